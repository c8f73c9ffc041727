#pragma once

#include <cstdint>
#include <vector>

#include "cclab/cost.hpp"
#include "cclab/crosscurv.hpp"
#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

// Additive cost c = c₊ + c₋ on the product of the factor spaces. The induced
// pseudo-metric is block diagonal and cross-curvature is additive on split
// vectors.
CostDescriptor product_cost(const CostDescriptor& c_plus, const CostDescriptor& c_minus);

// Closed form of the restriction scalar for the log cost: 2<q,p>² − |p|²|q|².
// Strictly convex along q ∥ p, strictly concave across it.
double log_cost_quadratic(const Vec& q, const Vec& p);

// The tensor product of two log costs is strictly regular factor-wise but
// fails weak regularity: an h-null pair with strictly negative
// cross-curvature, built from directions parallel to the E-image.
struct LogCounterexample {
  CrossSample sample;  // on (R^dim x R^dim); |h| ~ 0, cross < 0
  double cross_plus = 0.0;
  double cross_minus = 0.0;
  double lambda = 0.0;
};

LogCounterexample log_product_counterexample(int dim, std::uint64_t seed);

// Hopf submersion S^{2m+1} -> CP^m. Total-space points share the ambient
// coordinates of CP^m representatives; projection is the gauge map.
struct SubmersionDescriptor {
  ManifoldDescriptor total;
  ManifoldDescriptor base;
  int vertical_dim = 1;

  static SubmersionDescriptor hopf(int m);

  ManifoldPoint project(const ManifoldPoint& xt) const;
};

// Unique horizontal lift of v in T_b B to the fiber point x̃: rotate by the
// fiber phase of x̃ relative to the canonical representative of b.
TangentVector horizontal_lift_vector(const SubmersionDescriptor& sub, const ManifoldPoint& b,
                                     const TangentVector& v, const ManifoldPoint& xt);

struct LiftedPair {
  ManifoldPoint x, xbar;    // base pair
  ManifoldPoint xt, xbart;  // total-space pair, dist preserved
  TangentVector geodesic;   // log of the lifted geodesic at xt
};

// Lifts the connecting geodesic from the gauge-canonical representative of x.
LiftedPair horizontal_lift_pair(const SubmersionDescriptor& sub, const ManifoldPoint& x,
                                const ManifoldPoint& xbar);

// One O'Neill comparison record: builds the theorem's covector lifts
// w̃* = hlift(−D̄DDc_B v̄), w̄̃* = hlift(−DD̄c_B v), extracts the lifted
// surface velocities, and evaluates both cross-curvatures. The guaranteed
// relations: h_base = h_total, cross_base >= cross_total, and
// F = c_M − c_B >= 0 on the comparison surface.
struct OneillRecord {
  double h_base = 0.0, h_total = 0.0;
  double cross_base = 0.0, cross_total = 0.0;
  double residual_base = 0.0, residual_total = 0.0;
  TangentVector w_tilde, wbar_tilde;
  double f_min = 0.0;        // min of c_M − c_B over the stencil surface
  double lift_defect = 0.0;  // |c-Exp_x̃(q̃*) vs x̄̃|, consistency of the lift
};

OneillRecord oneill_compare(const SubmersionDescriptor& sub, const RadialProfile& profile,
                            const ManifoldPoint& x, const ManifoldPoint& xbar,
                            const TangentVector& v, const TangentVector& vbar);

// Diagonal-limit sectional curvature estimates of CP^m through the 4/3
// calibration, over holomorphic / totally-real / mixed tangent planes.
struct CurvatureProbe {
  std::vector<double> estimates;
  std::vector<double> holomorphic;  // subset: planes (p, Jp)
  std::vector<double> real_planes;  // subset: planes with pbar ⊥ {p, Jp}
  double min_estimate = 0.0, max_estimate = 0.0;
};

CurvatureProbe cpn_curvature_probe(int m, int samples, std::uint64_t seed, int threads = 1);

}  // namespace cclab
