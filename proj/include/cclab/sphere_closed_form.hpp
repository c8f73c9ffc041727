#pragma once

#include "cclab/cost.hpp"
#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

// Closed-form cross-curvature machinery of the unit round sphere with the
// distance-squared cost. Geometry of a sample: a base point x, the radial
// vector r = ρ r̂ pointing at x̄ = exp_x(r), a velocity q of the moving
// covector line r + t q, and a Hessian direction w = w₁ + w⊥ split into its
// component w₁ in the plane Σ = span(r̂, q) and its normal part w⊥.
//
// Angle convention: θ and ψ are measured so that sin θ = <r̂, q̂> and
// sin ψ = <r̂, ŵ₁>; θ = ψ = π/2 is the all-parallel configuration.
struct SphereConfig {
  double rho = 1.0;     // geodesic distance |r|, in (0, π)
  double theta = 0.0;   // q direction angle, T = tan θ
  double psi = 0.0;     // w₁ direction angle, S = tan ψ
  double w_perp_norm = 0.0;
  double q_norm = 1.0;
  double w_norm = 1.0;

  double w1_norm() const;
};

// a(ρ) = sin²ρ + ρ sin ρ − ρ²(1 + cos ρ); nonnegative on [0, π] with zeros
// exactly at the endpoints. Series branch near 0 (a ~ ρ⁶/90) keeps the
// computed sign exact where the direct form would cancel to noise.
double a_func(double rho);

// b(λ) = a(π/2 + arcsin λ)/(1 − λ) on [−1, 1); positive on (−1, 1).
double b_func(double lambda);

struct SphereABG {
  double A = 0.0;  // 2(sin ρ − ρ cos ρ)/ρ
  double B = 0.0;  // (ρ − cos ρ sin ρ)/sin ρ
  double G = 0.0;  // 1 − ρ cos ρ / sin ρ = ρ A / (2 sin ρ)
};

SphereABG abg(double rho);

// Inner-product form of the sphere quantities. qr = <r̂,q>, qq = |q|²,
// w1r = <r̂,w₁>, w1w1 = |w₁|², qw1 = <q,w₁>, wperp2 = |w⊥|².
double hessian_H_ip(double rho, double qq_unused, double w1r, double w1w1, double wperp2);
double neg_H_ddot_ip(double rho, double qr, double qq, double w1r, double w1w1, double qw1,
                     double wperp2);

// Hess(dist(·, x̄)²/2)|_x(w, w) = |w|² − I G.
double hessian_H(const SphereConfig& cfg);

// −d²H/dt² along the covector line; the closed form of half the
// cross-curvature. Nonnegative on (0, π).
double neg_H_ddot(const SphereConfig& cfg);

// Two-dimensional reduction: −Ḧ₁ = cos²θ cos²ψ / (ρ sin ρ) · P with
// P = A S² − 2(2B−A) T S + A ρ²/sin²ρ T² + B − A.
double p_poly(double rho, double T, double S);

// Discriminant of P as a quadratic in S; negative for every (ρ, T), which
// forces P > 0. Uses the factorization of (2B−A)² − A²ρ²/sin²ρ through
// a(ρ) to avoid catastrophic cancellation.
double discriminant(double rho, double T);

// True exactly on the zero set of −Ḧ: w⊥ = 0 and q, w₁ both parallel to r̂
// (sines of the angles below 1e-12).
bool equality_classifier(const SphereConfig& cfg);

// Ambient realization of a config on S² (or S³ when w⊥ ≠ 0): x is the last
// coordinate axis, r̂ the first, the q/w plane spanned by the first two.
struct SphereVectors {
  ManifoldDescriptor manifold;
  ManifoldPoint x;
  Vec r;  // ρ r̂
  Vec q;
  Vec w;
};

SphereVectors config_to_vectors(const SphereConfig& cfg);

// Independent oracle: −∂⁴/∂t²∂s² c(exp_x(s w), exp_x(r + t q)) by the
// tensor-product stencil, evaluated directly on the exponential curves.
// Shares no formulas with neg_H_ddot.
double neg_H_ddot_fd(const SphereVectors& v, double* residual = nullptr);

// t-velocity of x̄(t) = exp_x(r + t q) at t = 0; the second slot of the
// cross-curvature correspondence cross(w, p̄) = 2 (−Ḧ).
Vec sphere_segment_velocity(const SphereVectors& v);

}  // namespace cclab
