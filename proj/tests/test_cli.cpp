#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stringchain/cli.hpp"
#include "support.hpp"

using namespace stringchain;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "stringchain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "chain.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("spectrum writes roots and a manifest") {
  const fs::path dir = testing::scratch_dir("spectrum");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0, 4.0]})");
  const Result r = run({"spectrum", "--config", cfg.string(), "--rect", "-2,0,0,30", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(dir / "eigenvalues.csv"));
  CHECK(fs::exists(dir / "spectrum.json"));
  const auto m = manifest(dir);
  CHECK(m["command"] == "spectrum");
  CHECK(m["seed"] == 0);
  CHECK(m["config"]["densities"].size() == 2);
}

TEST_CASE("verify passes on a healthy chain") {
  const fs::path dir = testing::scratch_dir("verify");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0, 2.0, 0.5]})");
  const Result r = run({"verify", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("decay on a matched string reports extinction") {
  const fs::path dir = testing::scratch_dir("decay");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0]})");
  const Result r = run({"decay", "--config", cfg.string(), "--T", "20", "--points", "2000", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "decay.json"));
  CHECK(j["extinction_time_1e-6"].get<double>() <= 2.2);
  CHECK(fs::exists(dir / "energy.csv"));
}

TEST_CASE("every subcommand emits a manifest") {
  const fs::path dir = testing::scratch_dir("all");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0, 2.0]})");
  const std::vector<std::vector<std::string>> commands{
      {"gap", "--beta-min", "-5", "--beta-max", "5", "--step", "0.01"},
      {"det-bound", "--beta-min", "-5", "--beta-max", "5", "--step", "0.01"},
      {"resolvent-scan", "--beta-min", "10", "--beta-max", "100", "--count", "3", "--probes", "4"},
      {"schrodinger-scan", "--beta-min", "10", "--beta-max", "100", "--count", "3", "--probes", "4"},
      {"transfer-scan", "--gamma", "1", "--beta-min", "-5", "--beta-max", "5", "--step", "0.1"},
      {"schrodinger-decay", "--T", "1", "--points", "101"},
      {"io-ratios", "--T", "4", "--points", "400"},
  };
  for (auto args : commands) {
    const fs::path out = dir / args.front();
    args.insert(args.end(), {"--config", cfg.string(), "--out", out.string()});
    const Result r = run(args);
    CHECK_MESSAGE(r.code == kExitOk, args.front() << ": " << r.err);
    CHECK(manifest(out)["command"] == args.front());
  }
}

TEST_CASE("scans are deterministic") {
  const fs::path dir = testing::scratch_dir("determinism");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0, 3.0]})");
  auto scan = [&](const std::string& name, const std::string& jobs) {
    const fs::path out = dir / name;
    run({"resolvent-scan", "--config", cfg.string(), "--beta-min", "10", "--beta-max", "300", "--count", "5",
         "--probes", "6", "--seed", "3", "--jobs", jobs, "--out", out.string()});
    return slurp(out / "resolvent_scan.csv");
  };
  const std::string a = scan("a", "1");
  CHECK_FALSE(a.empty());
  CHECK(a == scan("b", "1"));
  CHECK(a == scan("c", "3"));
}

TEST_CASE("exit codes for bad input") {
  const fs::path dir = testing::scratch_dir("errors");
  CHECK(run({"spectrum", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(run({"spectrum", "--config", write_config(dir, "{not json").string()}).code == kExitConfig);
  CHECK(run({"spectrum", "--config", write_config(dir, R"({"densities": [1, -2]})").string()}).code == kExitConfig);
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({"spectrum"}).code == kExitUsage);
  const fs::path cfg = write_config(dir, R"({"densities": [1.0]})");
  CHECK(run({"spectrum", "--config", cfg.string(), "--rect", "1,2", "--out", dir.string()}).code == kExitUsage);
  CHECK(run({"spectrum", "--config", cfg.string(), "--system", "heat", "--out", dir.string()}).code == kExitUsage);
}

TEST_CASE("jobs environment variable overrides the flag") {
  const fs::path dir = testing::scratch_dir("jobs");
  const fs::path cfg = write_config(dir, R"({"densities": [1.0]})");
  setenv("STRINGCHAIN_JOBS", "3", 1);
  const Result r = run({"gap", "--config", cfg.string(), "--jobs", "1", "--beta-min", "-1", "--beta-max", "1",
                        "--step", "0.1", "--out", dir.string()});
  unsetenv("STRINGCHAIN_JOBS");
  CHECK(r.code == kExitOk);
  CHECK(manifest(dir)["jobs"] == 3);
}
