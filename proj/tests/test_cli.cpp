#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(CCLAB_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify sphere writes reports and deterministic CSV") {
  REQUIRE(run("verify sphere --quick --seed 7 --json /tmp/cclab_s1.json --csv /tmp/cclab_s1.csv") ==
          0);
  REQUIRE(run("verify sphere --quick --seed 7 --json /tmp/cclab_s2.json --csv /tmp/cclab_s2.csv") ==
          0);
  CHECK(slurp("/tmp/cclab_s1.csv") == slurp("/tmp/cclab_s2.csv"));
  CHECK(slurp("/tmp/cclab_s1.csv").substr(0, 9) == "rho,theta");

  auto j = nlohmann::json::parse(slurp("/tmp/cclab_s1.json"));
  std::set<std::string> claims;
  for (const auto& r : j["reports"]) claims.insert(r["claim"].get<std::string>());
  for (const char* want : {"a_nonneg", "D_negative", "P_positive", "closedform_vs_fd",
                           "equality_cases"})
    CHECK(claims.count(want) == 1);
  for (const auto& r : j["reports"]) CHECK(r["pass"].get<bool>());

  // a different seed changes the scan rows
  REQUIRE(run("verify sphere --quick --seed 8 --csv /tmp/cclab_s3.csv") == 0);
  CHECK(slurp("/tmp/cclab_s1.csv") != slurp("/tmp/cclab_s3.csv"));
}

TEST_CASE("verify cross emits the flat classification schema") {
  REQUIRE(run("verify cross --manifold S2 --claim nonneg --samples 40 --seed 7 "
              "--json /tmp/cclab_c.json") == 0);
  auto j = nlohmann::json::parse(slurp("/tmp/cclab_c.json"));
  const auto& c = j["classification"];
  CHECK(c["claim"] == "nonneg");
  CHECK(c["manifold"] == "S2");
  CHECK(c["cost"] == "half-square");
  CHECK(c["pass"].get<bool>());
  CHECK(c.contains("min_cross"));
  CHECK(c.contains("tolerance"));
  CHECK(c["n_samples"].get<int>() >= 40);
  CHECK(c["argmin"].contains("x"));
  CHECK(c["argmin"].contains("xbar"));
  CHECK(c["argmin"].contains("p"));
  CHECK(c["argmin"].contains("pbar"));
}

TEST_CASE("counterexample subcommand succeeds by exhibiting the violation") {
  CHECK(run("counterexample log-product --dim 1 --seed 7") == 0);
  CHECK(run("counterexample log-product --dim 2 --seed 7") == 0);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("verify cross --manifold Q7 --claim nonneg") == 2);
  CHECK(run("verify cross --manifold S2 --claim bogus") == 2);
  CHECK(run("verify nothing") == 2);
  CHECK(run("verify product --factors S2") == 2);
}

TEST_CASE("tolerance overrides may only loosen") {
  CHECK(run("verify sphere --quick --tolerance-scale 0.5") == 2);
  CHECK(run("verify sphere --quick --tolerance-scale 10") == 0);
}

TEST_CASE("unwritable output paths exit with 2") {
  CHECK(run("verify sphere --quick --csv /nonexistent_dir/scan.csv") == 2);
  CHECK(run("verify sphere --quick --json /nonexistent_dir/out.json") == 2);
}

TEST_CASE("every report carries a nonempty statement") {
  REQUIRE(run("verify all --quick --json /tmp/cclab_all.json") == 0);
  auto j = nlohmann::json::parse(slurp("/tmp/cclab_all.json"));
  CHECK(j["reports"].size() > 40);
  for (const auto& r : j["reports"]) {
    CHECK_FALSE(r["statement"].get<std::string>().empty());
    CHECK(r.contains("tolerance"));
    CHECK(r.contains("n_samples"));
  }
}

TEST_CASE("CCLAB_SEED overrides the default seed") {
  std::string cmd = std::string("CCLAB_SEED=77 ") + CCLAB_BIN +
                    " verify cross --manifold R2 --claim nonneg --samples 8 "
                    "--json /tmp/cclab_env.json >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  auto j = nlohmann::json::parse(slurp("/tmp/cclab_env.json"));
  CHECK(j["seed"].get<std::uint64_t>() == 77);
}

TEST_CASE("submersion and mountain subcommands run quick") {
  CHECK(run("verify submersion --total S3 --base CP1 --quick") == 0);
  CHECK(run("verify dasm --manifold S2 --scenarios 10 --quick") == 0);
  CHECK(run("verify time-convexity --manifold CP1 --scenarios 8 --quick") == 0);
}
