#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cclab/report.hpp"

namespace cclab {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int threads = 1;
  bool quick = false;
  std::string manifold = "S2";
  std::string cost = "half-square";
  int samples = -1;  // -1: per-suite default
  std::array<int, 3> grid = {48, 24, 24};
  std::string csv_path;  // sphere scan output, empty = no CSV
  std::string label;     // prefix for claim ids when composing suites

  // Multiplies every claim tolerance. May only loosen: values below 1 are
  // rejected. Reports embed the tolerance actually used.
  double tolerance_scale = 1.0;
};

// Closed-form sphere battery: positivity of a, A, B, B−A, the negative
// discriminant, P > 0, the full (ρ, θ, ψ, w⊥) nonnegativity grid, equality
// cases, and the FD-oracle comparisons.
std::vector<VerificationReport> sphere_suite(const SuiteConfig& cfg);

// Cross-curvature calibration: the flat zero, the diagonal 4/3 identity,
// and the geodesic-pair null direction with its h = dist² identity.
std::vector<VerificationReport> calibration_suite(const SuiteConfig& cfg);

// Classification scan on cfg.manifold with cfg.cost.
std::vector<VerificationReport> cross_suite(const SuiteConfig& cfg, const std::string& claim);

// Product battery on "A,B" (or "AxB") factor strings.
std::vector<VerificationReport> product_suite(const SuiteConfig& cfg, const std::string& factors);

// Hopf submersion battery for total S^{2m+1} over base CP^m.
std::vector<VerificationReport> submersion_suite(const SuiteConfig& cfg, const std::string& total,
                                                 const std::string& base);

std::vector<VerificationReport> dasm_suite(const SuiteConfig& cfg);
std::vector<VerificationReport> time_convexity_suite(const SuiteConfig& cfg);

// Log-product counterexample battery on R^dim factors.
std::vector<VerificationReport> counterexample_suite(const SuiteConfig& cfg, int dim);

// exp/log round trips and output determinism.
std::vector<VerificationReport> infrastructure_suite(const SuiteConfig& cfg);

// Everything, with per-suite labels.
std::vector<VerificationReport> all_suites(const SuiteConfig& cfg);

bool all_pass(const std::vector<VerificationReport>& reports);

}  // namespace cclab
