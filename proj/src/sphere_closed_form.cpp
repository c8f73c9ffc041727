#include "cclab/sphere_closed_form.hpp"

#include <cmath>

#include "cclab/fd.hpp"

namespace cclab {

double SphereConfig::w1_norm() const {
  double s = w_norm * w_norm - w_perp_norm * w_perp_norm;
  if (s < -1e-12) throw DomainError("SphereConfig: |w_perp| exceeds |w|");
  return std::sqrt(std::max(0.0, s));
}

double a_func(double rho) {
  if (rho < 0.0 || rho > M_PI + 1e-12) throw DomainError("a_func: rho outside [0, pi]");
  if (rho < 0.01) {
    const double r2 = rho * rho;
    const double r6 = r2 * r2 * r2;
    return r6 / 90.0 * (1.0 - r2 * 90.0 / 504.0);
  }
  const double s = std::sin(rho);
  return s * s + rho * s - rho * rho * (1.0 + std::cos(rho));
}

double b_func(double lambda) {
  if (lambda < -1.0 || lambda >= 1.0) throw DomainError("b_func: lambda outside [-1, 1)");
  if (lambda == -1.0) return 0.0;
  return a_func(M_PI / 2.0 + std::asin(lambda)) / (1.0 - lambda);
}

namespace {

// The assembled coefficients of the −Ḧ expression:
//   c1 = A ρ / sin³ρ              (radial-radial block, also G̈'s first term)
//   c2 = B / (ρ sin ρ)
//   c3 = (B − A) / (ρ sin ρ)
//   c4 = A / (ρ sin ρ)
// Series branches below ρ = 1e-4 remove the 0/0 at the diagonal.
struct Coeffs {
  double c1, c2, c3, c4;
};

Coeffs coeffs(double rho) {
  if (rho < 1e-4) {
    const double r2 = rho * rho;
    return {2.0 / 3.0 * (1.0 + 0.4 * r2), 2.0 / 3.0 * (1.0 + 2.0 * r2 / 15.0),
            2.0 / 45.0 * r2, 2.0 / 3.0 * (1.0 + r2 / 15.0)};
  }
  const double s = std::sin(rho);
  SphereABG v = abg(rho);
  double bma = (rho * rho + rho * s * std::cos(rho) - 2.0 * s * s) / (rho * s);
  return {v.A * rho / (s * s * s), v.B / (rho * s), bma / (rho * s), v.A / (rho * s)};
}

}  // namespace

SphereABG abg(double rho) {
  if (rho <= 0.0 || rho >= M_PI) {
    if (rho == 0.0) return {0.0, 0.0, 0.0};
    throw DomainError("abg: rho outside (0, pi)");
  }
  if (rho < 1e-4) {
    const double r2 = rho * rho;
    SphereABG v;
    v.A = 2.0 / 3.0 * r2 * (1.0 - r2 / 10.0);
    v.B = 2.0 / 3.0 * r2 * (1.0 - r2 / 30.0);
    v.G = r2 / 3.0 * (1.0 + r2 / 15.0);
    return v;
  }
  const double s = std::sin(rho);
  const double c = std::cos(rho);
  SphereABG v;
  v.A = 2.0 * (s - rho * c) / rho;
  v.B = (rho - c * s) / s;
  v.G = 1.0 - rho * c / s;
  return v;
}

double hessian_H_ip(double rho, double /*qq*/, double w1r, double w1w1, double wperp2) {
  const double ww = w1w1 + wperp2;
  const double I = ww - w1r * w1r;
  const double G = rho < 1e-4 ? rho * rho / 3.0 * (1.0 + rho * rho / 15.0) : abg(rho).G;
  return ww - I * G;
}

double neg_H_ddot_ip(double rho, double qr, double qq, double w1r, double w1w1, double qw1,
                     double wperp2) {
  const Coeffs k = coeffs(rho);
  const double gddot = k.c1 * qr * qr + k.c2 * (qq - qr * qr);
  const double neg_h1 = gddot * (w1w1 - w1r * w1r) +
                        4.0 * k.c3 * (qr * qr * w1r * w1r - qr * w1r * qw1) +
                        k.c4 * (w1r * w1r * qq - qw1 * qw1);
  return gddot * wperp2 + neg_h1;
}

double hessian_H(const SphereConfig& cfg) {
  const double w1 = cfg.w1_norm();
  return hessian_H_ip(cfg.rho, cfg.q_norm * cfg.q_norm, w1 * std::sin(cfg.psi), w1 * w1,
                      cfg.w_perp_norm * cfg.w_perp_norm);
}

double neg_H_ddot(const SphereConfig& cfg) {
  const double w1 = cfg.w1_norm();
  const double qr = cfg.q_norm * std::sin(cfg.theta);
  const double w1r = w1 * std::sin(cfg.psi);
  const double qw1 = cfg.q_norm * w1 * std::cos(cfg.theta - cfg.psi);
  return neg_H_ddot_ip(cfg.rho, qr, cfg.q_norm * cfg.q_norm, w1r, w1 * w1, qw1,
                       cfg.w_perp_norm * cfg.w_perp_norm);
}

double p_poly(double rho, double T, double S) {
  const SphereABG v = abg(rho);
  const double si = std::sin(rho);
  return v.A * S * S - 2.0 * (2.0 * v.B - v.A) * T * S + v.A * rho * rho / (si * si) * T * T +
         (rho * rho + rho * si * std::cos(rho) - 2.0 * si * si) / (rho * si);
}

double discriminant(double rho, double T) {
  const SphereABG v = abg(rho);
  const double si = std::sin(rho);
  const double bma = (rho * rho + rho * si * std::cos(rho) - 2.0 * si * si) / (rho * si);
  // (2B−A)² − A²ρ²/sin²ρ = (2B−A + Aρ/sinρ)(2B−A − Aρ/sinρ), and the second
  // factor equals −2a(ρ)/(ρ sinρ)
  const double plus = 2.0 * v.B - v.A + v.A * rho / si;
  const double minus = -2.0 * a_func(rho) / (rho * si);
  return 4.0 * (plus * minus * T * T - v.A * bma);
}

bool equality_classifier(const SphereConfig& cfg) {
  if (cfg.rho <= 0.0 || cfg.rho >= M_PI) throw DomainError("equality_classifier: rho outside (0, pi)");
  const double sin_q_angle = std::abs(std::cos(cfg.theta));
  const double sin_w_angle = std::abs(std::cos(cfg.psi));
  return cfg.w_perp_norm <= 1e-12 && sin_q_angle <= 1e-12 && sin_w_angle <= 1e-12;
}

SphereVectors config_to_vectors(const SphereConfig& cfg) {
  const bool flat = cfg.w_perp_norm <= 0.0;
  const int n = flat ? 2 : 3;  // S² unless a normal component is requested
  const auto m = ManifoldDescriptor::sphere(n);
  const int amb = m.ambient_dim();
  Vec x = Vec::Zero(amb);
  x[amb - 1] = 1.0;  // base point at the pole
  Vec rhat = Vec::Unit(amb, 0);
  Vec e2 = Vec::Unit(amb, 1);
  SphereVectors out{m, {m, x}, Vec(), Vec(), Vec()};
  out.r = cfg.rho * rhat;
  out.q = cfg.q_norm * (std::cos(cfg.theta) * e2 + std::sin(cfg.theta) * rhat);
  const double w1 = cfg.w1_norm();
  out.w = w1 * (std::cos(cfg.psi) * e2 + std::sin(cfg.psi) * rhat);
  if (!flat) out.w += cfg.w_perp_norm * Vec::Unit(amb, 2);
  return out;
}

double neg_H_ddot_fd(const SphereVectors& v, double* residual) {
  const double h = 0.02;
  const double rho = v.r.norm();
  const double room = rho + 2.0 * h * (v.q.norm() + v.w.norm());
  if (room >= M_PI - 1e-3)
    throw CutLocusProximity("sphere FD oracle: stencil would reach the cut locus");
  const CostDescriptor c = CostDescriptor::half_square(v.manifold);
  const VecL x = to_ld(v.x.coords);
  const VecL r = to_ld(v.r), q = to_ld(v.q), w = to_ld(v.w);
  auto f = [&](long double s, long double t) {
    VecL xs = detail::exp_core<long double>(v.manifold, x, VecL(s * w));
    VecL xt = detail::exp_core<long double>(v.manifold, x, VecL(r + t * q));
    return detail::cost_core<long double>(c, xs, xt);
  };
  fd::Estimate e = fd::mixed4(f, h);
  if (residual) *residual = e.residual;
  return -e.value;
}

Vec sphere_segment_velocity(const SphereVectors& v) {
  const VecL x = to_ld(v.x.coords);
  const VecL r = to_ld(v.r), q = to_ld(v.q);
  const long double sigma = 1e-5L;
  auto pt = [&](long double t) { return detail::exp_core<long double>(v.manifold, x, VecL(r + t * q)); };
  VecL vel =
      (8.0L * (pt(sigma) - pt(-sigma)) - (pt(2.0L * sigma) - pt(-2.0L * sigma))) / (12.0L * sigma);
  ManifoldPoint xbar{v.manifold, to_d(pt(0.0L))};
  return project_tangent(xbar, to_d(vel));
}

}  // namespace cclab
