// End-to-end checks of the kpzlab binary: exit codes, output layout, and
// byte-stable reruns.  The binary path comes in through KPZLAB_BIN.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const char* kBin = KPZLAB_BIN;

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "kpz-test-cli" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
  REQUIRE(out.good());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

const char* kDecorrConfig = R"({
  "schema_version": 1,
  "experiment": "decorr",
  "t_values": [16, 32],
  "samples": 24,
  "seed": 5
})";

}  // namespace

TEST_CASE("classify run writes its json next to the provenance") {
  const fs::path dir = fresh_dir("classify");
  const fs::path cfg = dir / "cfg.json";
  write_file(cfg, R"({
    "schema_version": 1,
    "experiment": "classify",
    "model": {"kind": "two-sided", "pi": 0.7, "eta": 0.5},
    "kappa": 1.5
  })");

  const int rc = run_cmd(std::string(kBin) + " run --config " + q(cfg) +
                         " --out " + q(dir / "out") + " > " +
                         q(dir / "log.txt") + " 2>&1");
  CHECK(rc == 0);

  const fs::path out = dir / "out" / "classify" / "classify.json";
  REQUIRE(fs::exists(out));
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("case").get<int>() == 2);
  CHECK(doc.at("regime").get<std::string>() == "column-pinned");
  CHECK(doc.at("law").get<std::string>() == "gaussian");
  CHECK(doc.at("config_hash").get<std::string>().size() == 16);
  CHECK(doc.at("seed").get<int>() == 1);
}

TEST_CASE("schema and domain failures map to distinct exit codes") {
  const fs::path dir = fresh_dir("exit-codes");

  const fs::path bad = dir / "bad.json";
  write_file(bad, R"({"schema_version": 1, "experiment": "classify", "oops": 1})");
  CHECK(run_cmd(std::string(kBin) + " run --config " + q(bad) + " --out " +
                q(dir / "out") + " 2> /dev/null") == 2);

  const fs::path missing = dir / "not-there.json";
  CHECK(run_cmd(std::string(kBin) + " run --config " + q(missing) + " --out " +
                q(dir / "out") + " 2> /dev/null") == 2);

  // The shock direction refuses to run without its explicit opt-in, which is
  // a domain problem rather than a malformed config.
  const fs::path shock = dir / "shock.json";
  write_file(shock, R"({
    "schema_version": 1,
    "experiment": "decorr",
    "model": {"kind": "two-sided", "pi": 0.2, "eta": 0.2},
    "t_values": [16],
    "samples": 4
  })");
  CHECK(run_cmd(std::string(kBin) + " run --config " + q(shock) + " --out " +
                q(dir / "out") + " 2> /dev/null") == 3);

  CHECK(run_cmd(std::string(kBin) + " verify --suite nope 2> /dev/null") == 2);
}

TEST_CASE("reruns and worker counts leave the output bytes unchanged") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path cfg = dir / "cfg.json";
  write_file(cfg, kDecorrConfig);

  const std::string base = std::string(kBin) + " run --config " + q(cfg);
  CHECK(run_cmd(base + " --out " + q(dir / "a") + " > /dev/null") == 0);
  CHECK(run_cmd(base + " --out " + q(dir / "b") + " --workers 3 > /dev/null") ==
        0);
  CHECK(run_cmd(base + " --out " + q(dir / "c") + " > /dev/null") == 0);

  for (const char* name :
       {"decorr_samples.csv", "decorr_tails.csv", "decorr_summary.json"}) {
    CAPTURE(name);
    const std::string a = slurp(dir / "a" / "decorr" / name);
    CHECK(a == slurp(dir / "b" / "decorr" / name));
    CHECK(a == slurp(dir / "c" / "decorr" / name));
  }
}

TEST_CASE("seed override changes the samples but not the config hash") {
  const fs::path dir = fresh_dir("seed-override");
  const fs::path cfg = dir / "cfg.json";
  write_file(cfg, kDecorrConfig);

  const std::string base = std::string(kBin) + " run --config " + q(cfg);
  CHECK(run_cmd(base + " --out " + q(dir / "a") + " > /dev/null") == 0);
  CHECK(run_cmd(base + " --out " + q(dir / "d") + " --seed 6 > /dev/null") == 0);

  const std::string sa = slurp(dir / "a" / "decorr" / "decorr_samples.csv");
  const std::string sd = slurp(dir / "d" / "decorr" / "decorr_samples.csv");
  CHECK(sa != sd);
  CHECK(sa.substr(0, sa.find('\n')) == sd.substr(0, sd.find('\n')));
  CHECK(sd.find("# seed=6\n") != std::string::npos);

  const nlohmann::json summary = nlohmann::json::parse(
      slurp(dir / "d" / "decorr" / "decorr_summary.json"));
  CHECK(summary.at("seed").get<int>() == 6);
}

TEST_CASE("output directory resolution prefers the flag over the environment") {
  const fs::path dir = fresh_dir("out-resolution");
  const fs::path cfg = dir / "cfg.json";
  write_file(cfg, R"({"schema_version": 1, "experiment": "shape"})");

  const std::string env = "KPZLAB_OUT=" + (dir / "env").string() + " ";
  CHECK(run_cmd(env + kBin + " run --config " + q(cfg) + " > /dev/null") == 0);
  CHECK(fs::exists(dir / "env" / "shape" / "shape.csv"));

  fs::remove_all(dir / "env");
  CHECK(run_cmd(env + kBin + " run --config " + q(cfg) + " --out " +
                q(dir / "flag") + " > /dev/null") == 0);
  CHECK(fs::exists(dir / "flag" / "shape" / "shape.csv"));
  CHECK_FALSE(fs::exists(dir / "env"));
}
