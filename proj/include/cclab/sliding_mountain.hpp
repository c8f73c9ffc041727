#pragma once

#include <cstdint>
#include <vector>

#include "cclab/cost.hpp"
#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

// The sliding mountain f_t(y) = −c(y, x̄(t)) + c(x, x̄(t)) along a c-segment
// x̄(t) = c_exp_x((1−t)p₀* + t p₁*). Weak regularity of the cost is
// equivalent to the double mountain max[f₀, f₁] staying above f_t; the
// nonnegative cross-curvature strengthening makes t ↦ f_t(y) convex.
struct SlidingMountainScenario {
  CostDescriptor cost;
  ManifoldPoint x;
  HGeodesic segment;  // x̄(t) = segment.at(cost, t), anchored at x
  std::vector<ManifoldPoint> probes;
  std::vector<double> t_grid;

  ManifoldPoint xbar_at(double t) const { return segment.at(cost, t); }
};

// Random admissible scenario: segment endpoints inside the c-exp domain
// with margin to spare, probes filtered so every (y, x̄(t)) pair stays in
// the cost's smooth domain. 33-point uniform t-grid.
SlidingMountainScenario make_scenario(const CostDescriptor& c, Rng& rng, int n_probes = 8,
                                      int t_points = 33);

double f_eval(const SlidingMountainScenario& s, double t, const ManifoldPoint& y);

struct ConvexityOutcome {
  double max_dasm_violation = 0.0;   // max over probes/grid of f_t − max(f₀, f₁)
  double max_chord_violation = 0.0;  // max of f_t − ((1−t) f₀ + t f₁)
  double min_second_difference = 0.0;
  double scale = 1.0;  // 1 + max |f| over the scan
  int n_evaluations = 0;
  bool pass = false;
};

// Loeper's maximum principle over the scenario grid; pass iff the worst
// violation stays below 1e-8 · scale.
ConvexityOutcome check_dasm(const SlidingMountainScenario& s);

// Chord bound and centered second differences in t; pass iff both stay
// above −1e-8 · scale.
ConvexityOutcome check_time_convexity(const SlidingMountainScenario& s);

struct GDiagnostics {
  double g0 = 0.0;        // ∂²/∂t² f_t(x(0)) — zero by definition
  double gprime0 = 0.0;   // vanishes by the h-geodesic equation
  double min_second_difference = 0.0;  // ≥ 0 for non-negatively cross-curved costs
  double s_range = 0.0;
};

// g(s) = ∂²/∂t²|_{t0} f_t(x(s)) along the h-geodesic s ↦ (x(s), x̄(t0))
// with velocity p, built through solve_h_velocity.
GDiagnostics g_diagnostics(const SlidingMountainScenario& s, double t0, const TangentVector& p);

}  // namespace cclab
