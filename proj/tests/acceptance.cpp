#include <doctest.h>

#include <cstdio>
#include <map>
#include <string>

#include "cclab/parallel.hpp"
#include "cclab/suites.hpp"

using namespace cclab;

// Acceptance gate: each criterion below runs at its stated tolerance on the
// full (non-quick) sample counts and prints one pass/fail line.

namespace {

SuiteConfig base_config() {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.threads = std::min(4, default_threads());
  cfg.quick = false;
  return cfg;
}

std::map<std::string, VerificationReport> by_claim(const std::vector<VerificationReport>& rs) {
  std::map<std::string, VerificationReport> m;
  for (const auto& r : rs) m[r.claim_id] = r;
  return m;
}

struct Criterion {
  bool ok = true;
  std::string detail;

  void require(const std::map<std::string, VerificationReport>& m, const std::string& claim) {
    auto it = m.find(claim);
    if (it == m.end()) {
      ok = false;
      detail += " missing:" + claim;
      return;
    }
    if (!it->second.pass) {
      ok = false;
      detail += " failed:" + claim;
    }
  }

  void finish(int number, const char* text) const {
    std::printf("[%s] criterion %d: %s%s\n", ok ? "PASS" : "FAIL", number, text,
                detail.empty() ? "" : detail.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", number, detail);
  }
};

}  // namespace

TEST_CASE("criterion 1: sphere closed form vs FD oracle") {
  SuiteConfig cfg = base_config();
  cfg.samples = 200;
  auto m = by_claim(sphere_suite(cfg));
  Criterion c;
  c.require(m, "closedform_vs_fd");
  c.require(m, "cross_correspondence");
  c.finish(1, "closed-form -H'' matches the fourth-derivative stencil and the "
              "cross-curvature correspondence at max(1e-4, 1e-3|v|)");
}

TEST_CASE("criterion 2: sphere positivity") {
  SuiteConfig cfg = base_config();
  auto m = by_claim(sphere_suite(cfg));
  Criterion c;
  c.require(m, "negHddot_nonneg");
  c.require(m, "D_negative");
  c.require(m, "P_positive");
  c.require(m, "a_nonneg");
  c.finish(2, "-H'' >= 0 on the 48x24x24 grid, D < 0, P > 0, a >= 0 with endpoint zeros");
}

TEST_CASE("criterion 3: calibration") {
  SuiteConfig cfg = base_config();
  auto m = by_claim(calibration_suite(cfg));
  Criterion c;
  c.require(m, "diag_four_thirds");
  c.require(m, "euclidean_zero");
  c.require(m, "geodesic_pair");
  c.finish(3, "diagonal 4/3 within 1e-3, flat cross within 1e-7, geodesic pairs: "
              "cross within 1e-6 and h = dist^2 within 1e-8");
}

TEST_CASE("criterion 4: product additivity and regularity") {
  SuiteConfig cfg = base_config();
  cfg.samples = 100;
  auto m = by_claim(product_suite(cfg, "S2,S2"));
  Criterion c;
  c.require(m, "cross_additivity");
  c.require(m, "a3s_never");
  c.require(m, "nonneg_scan");

  SuiteConfig quick = base_config();
  quick.quick = true;
  for (const char* fs : {"S2,R1", "S3,S5"}) {
    auto mm = by_claim(product_suite(quick, fs));
    c.require(mm, "nonneg_scan");
  }
  c.finish(4, "cross additivity within 2e-4 on 100 splits, strict regularity fails with a "
              "zero-cross null pair, nonnegativity scans pass on S2xS2, S2xR1, S3xS5");
}

TEST_CASE("criterion 5: log-product counterexample") {
  Criterion c;
  for (int dim : {1, 2}) {
    SuiteConfig cfg = base_config();
    auto m = by_claim(counterexample_suite(cfg, dim));
    c.require(m, "log_product_a3w_violation");
    c.require(m, "log_quadratic_vs_fd");
  }
  c.finish(5, "dims 1 and 2 exhibit |h| <= 1e-9 with cross <= -1e-3, and the closed-form "
              "log quadratic matches FD within 1e-6");
}

TEST_CASE("criterion 6: submersion comparisons") {
  Criterion c;
  for (auto [total, base] : {std::pair{"S3", "CP1"}, std::pair{"S5", "CP2"}}) {
    SuiteConfig cfg = base_config();
    cfg.samples = 50;
    auto m = by_claim(submersion_suite(cfg, total, base));
    c.require(m, "metric_lift");
    c.require(m, "oneill_inequality");
    c.require(m, "comparison_surface_nonneg");
    c.require(m, "sectional_window");
    c.require(m, "a3s_quotient");
  }
  c.finish(6, "50 O'Neill records each on S3->CP1 and S5->CP2: h equality within 1e-8, "
              "inequality slack >= -1e-5, F >= -1e-10, sectional windows, A3s quotients");
}

TEST_CASE("criterion 7: global convexity") {
  Criterion c;
  for (const char* name : {"S2", "S2xS2", "S2xR1", "CP1"}) {
    SuiteConfig cfg = base_config();
    cfg.manifold = name;
    cfg.samples = 200;
    auto md = by_claim(dasm_suite(cfg));
    c.require(md, "dasm");
    cfg.samples = -1;
    auto mt = by_claim(time_convexity_suite(cfg));
    c.require(mt, "time_convexity");
    c.require(mt, "g_diagnostics");
  }
  c.finish(7, "DASM and time-convexity pass 200-seed scenario suites on S2, S2xS2, S2xR1, "
              "CP1 with |g(0)| <= 1e-8 and |g'(0)| <= 1e-6");
}

TEST_CASE("criterion 8: infrastructure") {
  SuiteConfig cfg = base_config();
  auto m = by_claim(infrastructure_suite(cfg));
  Criterion c;
  c.require(m, "exp_log_roundtrip");
  c.require(m, "determinism");
  c.finish(8, "exp/log round trip within 1e-9 and seed-for-seed deterministic output "
              "(the CLI quick gate runs as its own ctest entry)");
}
