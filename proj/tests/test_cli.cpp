#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "../tools/cli.hpp"
#include "gl3/errors.hpp"
#include "gl3/identities.hpp"

using namespace gl3;
using namespace gl3::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gl3_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gl3moll");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse a plain command line") {
  const auto cfg = parse_config({"constants", "--sigma0", "0.75", "--prime-limit", "100000"});
  CHECK(cfg.command == Command::constants);
  REQUIRE(cfg.sigma0);
  CHECK(*cfg.sigma0 == 0.75);
  CHECK(cfg.prime_limit == 100000);
  CHECK_FALSE(cfg.source);
}

TEST_CASE("parse errors name the field") {
  auto message = [](const std::vector<std::string>& args) {
    try {
      parse_config(args);
    } catch (const usage_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message({"second-moment", "--T", "100"}).find("source") != std::string::npos);
  CHECK(message({"constants", "--sigma0", "abc"}).find("sigma0") != std::string::npos);
  CHECK(message({"constants", "--no-such-flag", "1"}) != "no error");
  CHECK(message({"frobnicate"}).find("frobnicate") != std::string::npos);
  CHECK(message({"zeros", "--source", "eisenstein", "--T1", "30", "--T2", "20"}).find("T1") != std::string::npos);
  CHECK(message({"mollifier", "--source", "sym2_lift"}).find("source-file") != std::string::npos);
  CHECK(message({"constants", "--quad-tol", "0"}).find("quad-tol") != std::string::npos);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  TempDir dir;
  const auto path = dir.path / "cfg.json";
  std::ofstream(path) << R"({"T": 300, "X": 5, "source": "eisenstein", "afe_eps": 0.9})";
  const auto cfg = parse_config({"second-moment", "--config", path.string(), "--T", "400"});
  CHECK(cfg.T == 400.0);
  REQUIRE(cfg.X);
  CHECK(*cfg.X == 5.0);
  CHECK(cfg.afe.eps == 0.9);
  CHECK(cfg.k == 1.0);

  std::ofstream(dir.path / "bad.json") << R"({"bogus_key": 1})";
  CHECK_THROWS_AS(parse_config({"constants", "--config", (dir.path / "bad.json").string()}), usage_error);
  std::ofstream(dir.path / "broken.json") << "{";
  CHECK_THROWS_AS(parse_config({"constants", "--config", (dir.path / "broken.json").string()}), usage_error);
}

TEST_CASE("per-command defaults") {
  CHECK(parse_config({"zeros", "--source", "eisenstein"}).afe.eps == 0.7);
  CHECK(parse_config({"afe-check", "--source", "eisenstein"}).afe.eps == 1.0);
  CHECK(parse_config({"littlewood", "--source", "eisenstein"}).quad_tol == 1e-3);
  CHECK(parse_config({"second-moment", "--source", "eisenstein"}).quad_tol == 1e-6);
}

TEST_CASE("serialize is sorted, exact and round-trips") {
  json j{{"b", 0.1}, {"a", json::array({1, 2.5, "x"})}, {"c", json{{"z", true}, {"y", nullptr}}}};
  const std::string text = serialize(j);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(json::parse(text) == j);
  CHECK(json::parse(text)["b"].get<double>() == 0.1);
  const json nan{{"v", std::numeric_limits<double>::quiet_NaN()}};
  CHECK(json::parse(serialize(nan))["v"].is_null());
}

TEST_CASE("determinism hash ignores the timestamp") {
  json a{{"command", "constants"}, {"result", {{"value", 1.5}}}, {"generated_at", "2020-01-01T00:00:00Z"}};
  json b = a;
  b["generated_at"] = "2030-01-01T00:00:00Z";
  CHECK(determinism_hash(a) == determinism_hash(b));
  b["result"]["value"] = 1.5000000000000002;
  CHECK(determinism_hash(a) != determinism_hash(b));
  CHECK(determinism_hash(a).rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("constants report") {
  TempDir dir;
  const auto out = dir.path / "c.json";
  REQUIRE(invoke({"constants", "--sigma0", "1", "--prime-limit", "100000", "--output", out.string()}) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["command"] == "constants");
  const auto mc = main_constant(1.0, 100000);
  CHECK(r["result"]["value"].get<double>() == mc.constant.value);
  CHECK(r["result"]["error_radius"].get<double>() < 1e-6);
  CHECK(r["result"]["relation_to_published_estimate"] == "interval lies below 6.52");
  CHECK(r["determinism_hash"] == determinism_hash(r));
  CHECK(serialize(r) + "\n" == slurp(out));
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("default output location comes from the environment") {
  TempDir dir;
  ::setenv("GL3MOLL_OUTPUT_DIR", dir.path.c_str(), 1);
  const int status = invoke({"chain-verify", "--X", "4", "--sigma0", "0.75"});
  ::unsetenv("GL3MOLL_OUTPUT_DIR");
  REQUIRE(status == 0);
  const json r = json::parse(slurp(dir.path / "chain-verify.json"));
  CHECK(r["result"]["steps"].size() == 7);
  CHECK(r["result"]["all_within_tolerance"] == true);
}

TEST_CASE("delta-enum report matches the library enumeration") {
  TempDir dir;
  const auto out = dir.path / "d.json";
  REQUIRE(invoke({"delta-enum", "--bound", "20", "--output", out.string()}) == 0);
  const json r = json::parse(slurp(out))["result"];
  const auto ref = delta_enumerate(20, 6.0);
  CHECK(r["solutions"].get<std::size_t>() == ref.solutions);
  CHECK(r["forward_violations"].get<std::size_t>() == ref.forward_violations);
  CHECK(r["reverse_violations"].get<std::size_t>() == ref.reverse_violations);
}

TEST_CASE("mollifier csv output") {
  TempDir dir;
  const auto out = dir.path / "m.csv";
  REQUIRE(invoke({"mollifier", "--source", "eisenstein", "--T", "100", "--X", "3", "--sigma0", "0.7", "--format",
                  "csv", "--output", out.string()}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("1\t1\t0\n") != std::string::npos);
  CHECK(text.find("2\t-3\t0\n") != std::string::npos);
  CHECK(text.find("8\t-1\t0\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto out = (dir.path / "x.json").string();
  CHECK(invoke({"mollifier", "--source", "eisenstein", "--T", "100", "--X", "30", "--sigma0", "0.7",
                "--term-budget", "2", "--output", out}) == 4);
  CHECK(invoke({"mollifier", "--source", "eisenstein", "--T", "100", "--output", out}) == 64);
  CHECK(invoke({"constants", "--sigma0", "0.3", "--output", out}) == 3);
  // The left edge runs through the zeta zero at 1/2 + 14.13i.
  CHECK(invoke({"zeros", "--source", "eisenstein", "--sigma", "0.5", "--T1", "10", "--T2", "20", "--output", out}) ==
        3);
  CHECK(invoke({}) == 64);
}

TEST_CASE("installed binary exit status") {
  const std::string bin = GL3MOLL_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("not-a-command") == 64);
  CHECK(status("--help") == 0);
  CHECK(status("zeros --help") == 0);
  TempDir dir;
  CHECK(status("arith-selftest --output " + (dir.path / "s.json").string()) == 0);
  const json r = json::parse(slurp(dir.path / "s.json"));
  CHECK(r["result"]["all_passed"] == true);
}
