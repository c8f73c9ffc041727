#include "cclab/cost.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cclab/fd.hpp"

namespace cclab {

namespace {

long double hs_f(long double r) { return 0.5L * r * r; }
long double hs_fp(long double r) { return r; }
long double hs_fp_inv(long double s) { return s; }

long double ch_f(long double r) { return std::cosh(r) - 1.0L; }
long double ch_fp(long double r) { return std::sinh(r); }
long double ch_fp_inv(long double s) { return std::asinh(s); }

double finite_diameter(const ManifoldDescriptor& m) {
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return M_PI;
    case ManifoldKind::Euclidean:
      return 10.0;  // sampling box scale; profiles are validated out to here
    case ManifoldKind::ComplexProjective:
      return M_PI / 2.0;
    case ManifoldKind::Product: {
      double s = 0.0;
      for (const auto& f : m.factors) {
        double d = finite_diameter(f);
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return 10.0;
}

}  // namespace

const RadialProfile& half_square_profile() {
  static const RadialProfile p{"half-square", hs_f, hs_fp, hs_fp_inv};
  return p;
}

const RadialProfile& cosh_profile() {
  static const RadialProfile p{"cosh", ch_f, ch_fp, ch_fp_inv};
  return p;
}

const RadialProfile* find_profile(const std::string& name) {
  if (name == "half-square") return &half_square_profile();
  if (name == "cosh") return &cosh_profile();
  return nullptr;
}

CostDescriptor CostDescriptor::half_square(const ManifoldDescriptor& m) {
  CostDescriptor c;
  c.kind = CostKind::RadialDistance;
  c.profile = half_square_profile();
  c.space = m;
  return c;
}

CostDescriptor CostDescriptor::radial(const ManifoldDescriptor& m, const RadialProfile& p) {
  if (!p.f || !p.fp || !p.fp_inv) throw DomainError("radial profile is missing callables");
  // strict convexity / monotonicity probe on a grid of (0, diam]
  const double diam = finite_diameter(m);
  const int n = 64;
  if (static_cast<double>(p.fp(1e-9L)) > 1e-6)
    throw DomainError("radial profile must have f'(0) = 0 for a smooth cost");
  for (int i = 1; i <= n; ++i) {
    double r = diam * i / n;
    double fp = static_cast<double>(p.fp(static_cast<long double>(r)));
    double h = 1e-5 * (1.0 + r);
    double fpp = static_cast<double>(p.fp(static_cast<long double>(r + h)) -
                                     p.fp(static_cast<long double>(r - h))) /
                 (2.0 * h);
    if (fp <= 0.0) throw DomainError("radial profile is not strictly increasing on (0, diam]");
    if (fpp <= 0.0) throw DomainError("radial profile is not strictly convex on (0, diam]");
    double round = static_cast<double>(p.fp_inv(static_cast<long double>(fp)));
    if (std::abs(round - r) > 1e-8 * (1.0 + r))
      throw DomainError("radial profile (f')^{-1} does not invert f'");
  }
  CostDescriptor c;
  c.kind = CostKind::RadialDistance;
  c.profile = p;
  c.space = m;
  return c;
}

CostDescriptor CostDescriptor::log_euclidean(const ManifoldDescriptor& m) {
  if (m.kind != ManifoldKind::Euclidean)
    throw DomainError("log cost requires Euclidean source = target");
  CostDescriptor c;
  c.kind = CostKind::LogEuclidean;
  c.space = m;
  return c;
}

CostDescriptor CostDescriptor::product_sum(std::vector<CostDescriptor> parts) {
  if (parts.size() < 2) throw DomainError("product cost needs at least two factors");
  std::vector<ManifoldDescriptor> spaces;
  spaces.reserve(parts.size());
  for (const auto& p : parts) spaces.push_back(p.space);
  CostDescriptor c;
  c.kind = CostKind::ProductSum;
  c.space = ManifoldDescriptor::product(std::move(spaces));
  c.parts = std::move(parts);
  return c;
}

CostDescriptor CostDescriptor::parse(const ManifoldDescriptor& m, const std::string& name) {
  if (name.empty() || name == "half-square") return half_square(m);
  if (name == "log") return log_euclidean(m);
  if (name.rfind("radial:", 0) == 0) {
    const RadialProfile* p = find_profile(name.substr(7));
    if (!p) throw DomainError("unknown radial profile '" + name.substr(7) + "'");
    return radial(m, *p);
  }
  throw DomainError("unknown cost '" + name + "'");
}

std::string CostDescriptor::name() const {
  switch (kind) {
    case CostKind::RadialDistance:
      return profile.name == "half-square" ? "half-square" : "radial:" + profile.name;
    case CostKind::LogEuclidean:
      return "log";
    case CostKind::ProductSum: {
      std::string out = "sum(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i].name();
      }
      return out + ")";
    }
  }
  return "?";
}

// --- smooth-domain checks ----------------------------------------------------

namespace {
constexpr double kLogSeparation = 1e-3;
}

bool cost_pair_smooth(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
                      double extra) {
  switch (c.kind) {
    case CostKind::RadialDistance:
      return within_margin(x, xbar, extra);
    case CostKind::LogEuclidean:
      return (x.coords - xbar.coords).norm() > kLogSeparation + extra;
    case CostKind::ProductSum:
      for (std::size_t i = 0; i < c.parts.size(); ++i)
        if (!cost_pair_smooth(c.parts[i], factor_point(x, static_cast<int>(i)),
                              factor_point(xbar, static_cast<int>(i)), extra))
          return false;
      return true;
  }
  return true;
}

void require_cost_pair_smooth(const CostDescriptor& c, const ManifoldPoint& x,
                              const ManifoldPoint& xbar, double extra) {
  if (c.kind == CostKind::LogEuclidean && (x.coords - xbar.coords).norm() <= kLogSeparation + extra)
    throw SingularCost("log cost evaluated too close to the diagonal");
  if (!cost_pair_smooth(c, x, xbar, extra))
    throw CutLocusProximity("pair is outside the smooth domain of the cost");
}

double cost_eval(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar) {
  if (x.owner != c.space || xbar.owner != c.space)
    throw DomainError("cost_eval: points do not live on the cost's space");
  require_cost_pair_smooth(c, x, xbar);
  return static_cast<double>(detail::cost_core<double>(c, x.coords, xbar.coords));
}

// --- gradients ----------------------------------------------------------------

namespace {

Vec grad_core(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
              bool x_slot) {
  switch (c.kind) {
    case CostKind::RadialDistance: {
      double d = dist(x, xbar);
      if (d < 1e-12) return Vec::Zero(x.coords.size());
      double ratio = static_cast<double>(c.profile.fp(static_cast<long double>(d))) / d;
      Vec lg = x_slot ? log_map(x, xbar).coords : log_map(xbar, x).coords;
      return -ratio * lg;
    }
    case CostKind::LogEuclidean: {
      Vec u = x.coords - xbar.coords;
      double r2 = u.squaredNorm();
      if (r2 < 1e-300) throw SingularCost("log cost gradient at the diagonal");
      return (x_slot ? -1.0 : 1.0) * u / r2;
    }
    case CostKind::ProductSum: {
      std::vector<Vec> parts;
      parts.reserve(c.parts.size());
      for (std::size_t i = 0; i < c.parts.size(); ++i)
        parts.push_back(grad_core(c.parts[i], factor_point(x, static_cast<int>(i)),
                                  factor_point(xbar, static_cast<int>(i)), x_slot));
      return join_factors(c.space, parts);
    }
  }
  return Vec::Zero(x.coords.size());
}

}  // namespace

CotangentVector grad_x_cost(const CostDescriptor& c, const ManifoldPoint& x,
                            const ManifoldPoint& xbar) {
  require_cost_pair_smooth(c, x, xbar);
  return {x, grad_core(c, x, xbar, true)};
}

CotangentVector grad_xbar_cost(const CostDescriptor& c, const ManifoldPoint& x,
                               const ManifoldPoint& xbar) {
  require_cost_pair_smooth(c, x, xbar);
  return {xbar, grad_core(c, x, xbar, false)};
}

CotangentVector grad_x_cost_fd(const CostDescriptor& c, const ManifoldPoint& x,
                               const ManifoldPoint& xbar) {
  require_cost_pair_smooth(c, x, xbar);
  const auto frame = tangent_frame(x);
  const VecL xl = to_ld(x.coords);
  const VecL bl = to_ld(xbar.coords);
  const double h = 1e-5 * (1.0 + dist(x, xbar));
  Vec g = Vec::Zero(x.coords.size());
  for (const auto& e : frame) {
    const VecL el = to_ld(e);
    double gi = fd::deriv1(
        [&](long double s) {
          return detail::cost_core<long double>(c, detail::exp_core<long double>(c.space, xl, VecL(s * el)), bl);
        },
        h);
    g += gi * e;
  }
  return {x, g};
}

// --- cost exponential ----------------------------------------------------------

bool c_exp_in_domain(const CostDescriptor& c, const ManifoldPoint& x, const Vec& pstar,
                     double extra) {
  switch (c.kind) {
    case CostKind::RadialDistance: {
      double n = pstar.norm();
      if (n < 1e-300) return true;
      double len = static_cast<double>(c.profile.fp_inv(static_cast<long double>(n)));
      TangentVector v{x, (len / n) * pstar};
      return tangent_within_bound(v, extra);
    }
    case CostKind::LogEuclidean:
      return pstar.norm() > 1e-8;
    case CostKind::ProductSum: {
      const auto spans = c.space.factor_spans();
      for (std::size_t i = 0; i < c.parts.size(); ++i) {
        auto [off, len] = spans[i];
        if (!c_exp_in_domain(c.parts[i], factor_point(x, static_cast<int>(i)),
                             Vec(pstar.segment(off, len)), extra))
          return false;
      }
      return true;
    }
  }
  return true;
}

ManifoldPoint c_exp(const CostDescriptor& c, const ManifoldPoint& x, const CotangentVector& pstar) {
  if (c.kind == CostKind::LogEuclidean && pstar.coords.norm() <= 1e-8)
    throw SingularCost("log cost exponential is undefined at p* = 0");
  if (!c_exp_in_domain(c, x, pstar.coords))
    throw CutLocusProximity("covector is outside Dom(c-Exp) with the safety margin");
  return {x.owner, detail::c_exp_core<double>(c, x.coords, pstar.coords)};
}

ManifoldPoint c_segment(const CostDescriptor& c, const ManifoldPoint& x, const CotangentVector& p0,
                        const CotangentVector& p1, double t) {
  CotangentVector pt{p0.base, (1.0 - t) * p0.coords + t * p1.coords};
  return c_exp(c, x, pt);
}

ManifoldPoint HGeodesic::at(const CostDescriptor& c, double t) const {
  CotangentVector pt{anchor.base, anchor.coords + t * direction.coords};
  return c_exp(c, fixed_point, pt);
}

// --- pseudo-metric machinery -----------------------------------------------------

namespace {

// long-double functional (s,t) -> c(exp_x(s u), exp_xbar(t ubar))
struct PairFunctional {
  const CostDescriptor& c;
  VecL x, xbar, u, ubar;

  long double operator()(long double s, long double t) const {
    return detail::cost_core<long double>(
        c, detail::exp_core<long double>(c.space, x, VecL(s * u)),
        detail::exp_core<long double>(c.space, xbar, VecL(t * ubar)));
  }
};

constexpr double kMixedSecondStep = 1e-4;

}  // namespace

CrossDifference cross_difference_matrix(const CostDescriptor& c, const ManifoldPoint& x,
                                        const ManifoldPoint& xbar) {
  require_cost_pair_smooth(c, x, xbar);
  CrossDifference out;
  out.frame_x = tangent_frame(x);
  out.frame_xbar = tangent_frame(xbar);
  const int m = static_cast<int>(out.frame_x.size());
  const int mb = static_cast<int>(out.frame_xbar.size());
  out.E.resize(m, mb);
  const VecL xl = to_ld(x.coords), bl = to_ld(xbar.coords);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < mb; ++j) {
      PairFunctional f{c, xl, bl, to_ld(out.frame_x[static_cast<std::size_t>(i)]),
                       to_ld(out.frame_xbar[static_cast<std::size_t>(j)])};
      out.E(i, j) = -fd::mixed2(f, kMixedSecondStep).value;
    }
  }
  Eigen::PartialPivLU<Mat> lu(out.E);
  out.det = lu.determinant();
  double scale = std::pow(std::max(1e-8, out.E.norm() / std::sqrt(static_cast<double>(m))), m);
  out.degenerate = std::abs(out.det) < 1e-10 * scale;
  return out;
}

Vec CrossDifference::pair_left(const Vec& pbar_ambient) const {
  Vec comp(static_cast<int>(frame_xbar.size()));
  for (int j = 0; j < comp.size(); ++j) comp[j] = frame_xbar[static_cast<std::size_t>(j)].dot(pbar_ambient);
  Vec ehat = E * comp;
  Vec out = Vec::Zero(frame_x.front().size());
  for (int i = 0; i < ehat.size(); ++i) out += ehat[i] * frame_x[static_cast<std::size_t>(i)];
  return out;
}

Vec CrossDifference::pair_right(const Vec& p_ambient) const {
  Vec comp(static_cast<int>(frame_x.size()));
  for (int i = 0; i < comp.size(); ++i) comp[i] = frame_x[static_cast<std::size_t>(i)].dot(p_ambient);
  Vec ehat = E.transpose() * comp;
  Vec out = Vec::Zero(frame_xbar.front().size());
  for (int j = 0; j < ehat.size(); ++j) out += ehat[j] * frame_xbar[static_cast<std::size_t>(j)];
  return out;
}

double h_quadratic(const CostDescriptor& c, const ManifoldPoint& x, const ManifoldPoint& xbar,
                   const TangentVector& p, const TangentVector& pbar) {
  require_cost_pair_smooth(c, x, xbar);
  if (p.coords.norm() < 1e-300 || pbar.coords.norm() < 1e-300) return 0.0;
  PairFunctional f{c, to_ld(x.coords), to_ld(xbar.coords), to_ld(p.coords), to_ld(pbar.coords)};
  return -fd::mixed2(f, kMixedSecondStep).value;
}

Vec c_exp_velocity(const CostDescriptor& c, const ManifoldPoint& base, const Vec& anchor,
                   const Vec& dir) {
  const VecL bl = to_ld(base.coords);
  const VecL al = to_ld(anchor);
  const VecL dl = to_ld(dir);
  const long double sigma = 1e-5L * (1.0L + al.norm());
  auto pt = [&](long double s) { return detail::c_exp_core<long double>(c, bl, VecL(al + s * dl)); };
  VecL vel = (8.0L * (pt(sigma) - pt(-sigma)) - (pt(2.0L * sigma) - pt(-2.0L * sigma))) /
             (12.0L * sigma);
  ManifoldPoint at{base.owner, to_d(pt(0.0L))};
  return project_tangent(at, to_d(vel));
}

CotangentVector solve_h_velocity(const CostDescriptor& c, const ManifoldPoint& x,
                                 const ManifoldPoint& xbar, const TangentVector& p) {
  require_cost_pair_smooth(c, x, xbar);
  const double pnorm = p.coords.norm();
  if (pnorm < 1e-300) return {xbar, Vec::Zero(xbar.coords.size())};

  const Vec qbar = -grad_xbar_cost(c, x, xbar).coords;
  const auto fx = tangent_frame(x);
  const auto fxb = tangent_frame(xbar);
  const int m = static_cast<int>(fx.size());
  if (static_cast<int>(fxb.size()) != m)
    throw DomainError("solve_h_velocity: mismatched tangent dimensions");

  Mat J(m, m);
  for (int k = 0; k < m; ++k) {
    Vec vel = c_exp_velocity(c, xbar, qbar, fxb[static_cast<std::size_t>(k)]);
    for (int i = 0; i < m; ++i) J(i, k) = fx[static_cast<std::size_t>(i)].dot(vel);
  }
  Eigen::PartialPivLU<Mat> lu(J);
  double scale = std::pow(std::max(1e-8, J.norm() / std::sqrt(static_cast<double>(m))), m);
  if (std::abs(lu.determinant()) < 1e-12 * scale)
    throw DegeneracyError("solve_h_velocity: singular c-exponential Jacobian");

  auto components = [&](const Vec& ambient) {
    Vec comp(m);
    for (int i = 0; i < m; ++i) comp[i] = fx[static_cast<std::size_t>(i)].dot(ambient);
    return comp;
  };
  auto assemble = [&](const Vec& comp) {
    Vec out = Vec::Zero(xbar.coords.size());
    for (int k = 0; k < m; ++k) out += comp[k] * fxb[static_cast<std::size_t>(k)];
    return out;
  };

  Vec u = assemble(lu.solve(components(p.coords)));
  const double tol = 1e-10 * (1.0 + pnorm);
  double damp = 1.0;
  Vec defect = c_exp_velocity(c, xbar, qbar, u) - p.coords;
  for (int iter = 0; iter < 50; ++iter) {
    if (defect.norm() <= tol) return {xbar, u};
    Vec step = assemble(lu.solve(components(defect)));
    Vec u_try = u - damp * step;
    Vec defect_try = c_exp_velocity(c, xbar, qbar, u_try) - p.coords;
    if (defect_try.norm() < defect.norm()) {
      u = u_try;
      defect = defect_try;
      damp = std::min(1.0, 2.0 * damp);
    } else {
      damp *= 0.5;
    }
  }
  if (defect.norm() <= 1e-8 * std::max(1.0, pnorm)) return {xbar, u};
  throw ConvergenceError("solve_h_velocity: Newton correction did not converge");
}

}  // namespace cclab
