#include <iostream>

#include "stringchain/cli.hpp"

int main(int argc, char** argv) { return stringchain::run_cli(argc, argv, std::cout, std::cerr); }
