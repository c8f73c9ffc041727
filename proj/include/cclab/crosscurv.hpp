#pragma once

#include <cstdint>
#include <vector>

#include "cclab/cost.hpp"
#include "cclab/manifold.hpp"
#include "cclab/sampling.hpp"
#include "cclab/types.hpp"

namespace cclab {

// One cross-curvature evaluation: cross(p, p̄) = −2 ∂⁴/∂s²∂t² c(x(s), x̄(t))
// where s ↦ (x(s), x̄) is the h-geodesic with velocity p built through
// solve_h_velocity and x̄(t) = exp_x̄(t p̄) (only one slot must be geodesic).
struct CrossSample {
  ManifoldPoint x, xbar;
  TangentVector p, pbar;
  double h_value = 0.0;
  double cross_value = 0.0;
  double fd_step = 0.0;
  int richardson_levels = 0;
  double residual_estimate = 0.0;
};

CrossSample cross_fd(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
                     const TangentVector& p, const TangentVector& pbar);

// λ balancing a nonpositive h₊ block against the positive h of a geodesic
// pair: h₊ + λ² h₋ = 0.
double balance_lambda(double h_plus, double h_minus);

// Combines a factor pair having h₊ ≤ 0 (p̄₊ is sign-flipped when needed)
// with a nontrivial geodesic pair of another factor, producing an h-null
// pair on the product. h₋ = dist² > 0 for geodesic velocities.
struct NullPairResult {
  double lambda = 0.0;
  bool flipped = false;  // whether p̄₊ was negated to reach h₊ ≤ 0
  double h_plus = 0.0, h_minus = 0.0;
  CostDescriptor product_cost;
  ManifoldPoint x, xbar;
  TangentVector p, pbar;
  double h_value = 0.0;  // of the combined pair; ~0 by construction
};

NullPairResult null_pair(const CostDescriptor& c_plus, const ManifoldPoint& x_plus,
                         const ManifoldPoint& xbar_plus, const TangentVector& p_plus,
                         const TangentVector& pbar_plus, const ManifoldPoint& x_minus,
                         const ManifoldPoint& xbar_minus);

enum class CrossClaim { NonNegCross, A3w, A3s, AlmostPositive };

std::string claim_name(CrossClaim c);

struct SamplerSpec {
  int n_pairs = 20;
  int n_dirs = 10;
  std::uint64_t seed = 42;
  double rho_min = 0.1;
  double rho_max = -1.0;         // auto: pair_rho_max(manifold, 0.35)
  double tolerance_scale = 1.0;  // >= 1; loosens the classification thresholds
};

struct ClassificationReport {
  CrossClaim claim = CrossClaim::NonNegCross;
  double min_cross = 0.0;
  double max_cross = 0.0;
  CrossSample argmin;
  int null_pair_count = 0;
  int n_samples = 0;
  std::vector<CrossSample> violations;
  double tolerance = 0.0;
  double fitted_c0 = 0.0;  // AlmostPositive: min cross / deviation²
  bool pass = false;
};

// Scans cross-curvature over sampled pairs and directions.
//   NonNegCross     all (p, p̄)
//   A3w             numerically h-null pairs only
//   A3s             h-null pairs must clear a strict floor; split pairs
//                   (p₋ = p̄₊ = 0) are probed explicitly on products
//   AlmostPositive  quadratic growth away from the parallel configuration
ClassificationReport classify(const CostDescriptor& c, const SamplerSpec& spec, CrossClaim claim,
                              int threads = 1);

// Second differences along t of the scalar t ↦ Hess c(·, x̄(t))|_x(p, p),
// x̄(t) = c_exp_x(q₀* + t q*). Concave (≤ 0 up to tolerance) in every
// direction for non-negatively cross-curved costs; for merely weakly
// regular costs only when <q*, p> = 0 (the h-null pairing).
struct ConcavityReport {
  double max_second_difference = 0.0;  // normalized by Δt²
  double pairing = 0.0;                // <q*, p>
  std::vector<double> values;
};

ConcavityReport alternative_a3_concavity(const CostDescriptor& c, const ManifoldPoint& x,
                                         const TangentVector& p, const CotangentVector& q0,
                                         const CotangentVector& qdir, int n_samples);

// Strict-positivity floor used by the A3s classifier (unit-normalized pairs).
inline constexpr double kA3sFloor = 1e-3;

}  // namespace cclab
