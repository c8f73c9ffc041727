#pragma once

#include <string>
#include <vector>

#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

// Radial profile f applied to geodesic distance: strictly convex, smooth,
// strictly increasing on the positive axis, shipped with f' and its inverse
// (the cost exponential consumes the inverse directly). Stored as
// long-double callables; the double paths narrow on return.
struct RadialProfile {
  std::string name;
  long double (*f)(long double) = nullptr;
  long double (*fp)(long double) = nullptr;
  long double (*fp_inv)(long double) = nullptr;
};

// f(ρ) = ρ²/2, the distance-squared cost.
const RadialProfile& half_square_profile();
// f(ρ) = cosh(ρ) − 1; exercises the general-profile paths.
const RadialProfile& cosh_profile();
// Registry lookup for "radial:<name>" config strings (nullptr when absent).
const RadialProfile* find_profile(const std::string& name);

enum class CostKind { RadialDistance, LogEuclidean, ProductSum };

struct CostDescriptor {
  CostKind kind = CostKind::RadialDistance;
  RadialProfile profile;      // RadialDistance only
  ManifoldDescriptor space;   // source = target
  std::vector<CostDescriptor> parts;  // ProductSum factor costs

  const ManifoldDescriptor& source() const { return space; }
  const ManifoldDescriptor& target() const { return space; }

  static CostDescriptor half_square(const ManifoldDescriptor& m);
  // Validates f'' > 0 and f' > 0 on a sample grid of (0, diam].
  static CostDescriptor radial(const ManifoldDescriptor& m, const RadialProfile& p);
  // c(x, x̄) = −log|x − x̄|; Euclidean source = target only.
  static CostDescriptor log_euclidean(const ManifoldDescriptor& m);
  // Additive cost on the product of the factor spaces.
  static CostDescriptor product_sum(std::vector<CostDescriptor> parts);
  // Config strings: "half-square", "log", "radial:<name>".
  static CostDescriptor parse(const ManifoldDescriptor& m, const std::string& name);

  std::string name() const;
};

namespace detail {

template <class T>
T cost_core(const CostDescriptor& c, const V<T>& x, const V<T>& xbar) {
  switch (c.kind) {
    case CostKind::RadialDistance: {
      T d = dist_core<T>(c.space, x, xbar);
      return static_cast<T>(c.profile.f(static_cast<long double>(d)));
    }
    case CostKind::LogEuclidean:
      return -std::log((x - xbar).norm());
    case CostKind::ProductSum: {
      T sum = 0;
      const auto spans = c.space.factor_spans();
      for (std::size_t i = 0; i < c.parts.size(); ++i) {
        auto [off, len] = spans[i];
        sum += cost_core<T>(c.parts[i], V<T>(x.segment(off, len)), V<T>(xbar.segment(off, len)));
      }
      return sum;
    }
  }
  return 0;
}

// Cost exponential, no domain checks. Radial kind: exp_x of the covector
// rescaled to length (f')^{-1}(|p*|).
template <class T>
V<T> c_exp_core(const CostDescriptor& c, const V<T>& x, const V<T>& pstar) {
  switch (c.kind) {
    case CostKind::RadialDistance: {
      T n = pstar.norm();
      if (n < T(1e-300)) return x;
      T len = static_cast<T>(c.profile.fp_inv(static_cast<long double>(n)));
      return exp_core<T>(c.space, x, V<T>((len / n) * pstar));
    }
    case CostKind::LogEuclidean: {
      T n2 = pstar.squaredNorm();
      return x - pstar / n2;
    }
    case CostKind::ProductSum: {
      V<T> out(x.size());
      const auto spans = c.space.factor_spans();
      for (std::size_t i = 0; i < c.parts.size(); ++i) {
        auto [off, len] = spans[i];
        out.segment(off, len) =
            c_exp_core<T>(c.parts[i], V<T>(x.segment(off, len)), V<T>(pstar.segment(off, len)));
      }
      return out;
    }
  }
  return x;
}

}  // namespace detail

// True when the pair sits in the smooth domain of c with `extra` room:
// outside the cut-locus margin for radial costs, separated from the
// diagonal for the log cost.
bool cost_pair_smooth(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
                      double extra = 0.0);
void require_cost_pair_smooth(const CostDescriptor& c, const ManifoldPoint& x,
                              const ManifoldPoint& xbar, double extra = 0.0);

double cost_eval(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar);

// Dc(x, x̄) as a covector at x (closed form). −grad_x_cost is the covector
// the cost exponential maps back to x̄.
CotangentVector grad_x_cost(const CostDescriptor& c, const ManifoldPoint& x,
                            const ManifoldPoint& xbar);
CotangentVector grad_xbar_cost(const CostDescriptor& c, const ManifoldPoint& x,
                               const ManifoldPoint& xbar);

// Finite-difference gradient in the x slot (oracle for the closed forms).
CotangentVector grad_x_cost_fd(const CostDescriptor& c, const ManifoldPoint& x,
                               const ManifoldPoint& xbar);

// True when c_exp(x, p*) is admissible with `extra` room (factor-wise).
bool c_exp_in_domain(const CostDescriptor& c, const ManifoldPoint& x, const Vec& pstar,
                     double extra = 0.0);

ManifoldPoint c_exp(const CostDescriptor& c, const ManifoldPoint& x, const CotangentVector& pstar);

// c_exp(x, (1−t) p0* + t p1*).
ManifoldPoint c_segment(const CostDescriptor& c, const ManifoldPoint& x,
                        const CotangentVector& p0, const CotangentVector& p1, double t);

// A geodesic of the pseudo-metric h with one endpoint frozen: the moving
// slot traces c_exp(fixed, anchor + t·direction). Side records which slot
// of the pair moves.
struct HGeodesic {
  enum class Side { MovingLeft, MovingRight };
  ManifoldPoint fixed_point;
  CotangentVector anchor;
  CotangentVector direction;
  Side side = Side::MovingRight;

  ManifoldPoint at(const CostDescriptor& c, double t) const;
};

// The bilinear form E(u, ū) = −∂²c/∂x∂x̄ evaluated in deterministic
// orthonormal frames at x and x̄. h(p ⊕ p̄, p ⊕ p̄) = pᵀ E p̄, and E is the
// non-degeneracy (A2) witness.
struct CrossDifference {
  Mat E;
  double det = 0.0;
  bool degenerate = false;  // A2 failure flag at this pair
  std::vector<Vec> frame_x, frame_xbar;

  // Ambient covector at x with frame components E * pbar_components.
  Vec pair_left(const Vec& pbar_ambient) const;
  // Ambient covector at x̄ with frame components Eᵀ * p_components.
  Vec pair_right(const Vec& p_ambient) const;
};

CrossDifference cross_difference_matrix(const CostDescriptor& c, const ManifoldPoint& x,
                                        const ManifoldPoint& xbar);

// h(p ⊕ p̄, p ⊕ p̄) via the directional mixed second difference (equal to
// pᵀ E p̄ by bilinearity).
double h_quadratic(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
                   const TangentVector& p, const TangentVector& pbar);

// Covector u* at x̄ such that s ↦ c_exp(x̄, q̄* + s u*) has velocity p at
// s = 0, where q̄* = −grad_xbar_cost(c, x, x̄) anchors the curve at x.
// FD Jacobian solve plus damped-Newton correction; defect ≤ 1e-8 |p|.
CotangentVector solve_h_velocity(const CostDescriptor& c, const ManifoldPoint& x,
                                 const ManifoldPoint& xbar, const TangentVector& p);

// Velocity of s ↦ c_exp(base, anchor + s dir) at s = 0 (fourth-order FD,
// projected to the tangent space at the curve point).
Vec c_exp_velocity(const CostDescriptor& c, const ManifoldPoint& base, const Vec& anchor,
                   const Vec& dir);

}  // namespace cclab
