#include "cclab/constructions.hpp"

#include <cmath>

#include "cclab/fd.hpp"
#include "cclab/parallel.hpp"
#include "cclab/sampling.hpp"

namespace cclab {

CostDescriptor product_cost(const CostDescriptor& c_plus, const CostDescriptor& c_minus) {
  return CostDescriptor::product_sum({c_plus, c_minus});
}

double log_cost_quadratic(const Vec& q, const Vec& p) {
  double qn = q.norm();
  if (qn < 1e-12) throw SingularCost("log_cost_quadratic: q must be nonzero");
  double qp = q.dot(p);
  return 2.0 * qp * qp - p.squaredNorm() * q.squaredNorm();
}

LogCounterexample log_product_counterexample(int dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("log_product_counterexample: dim must be >= 1");
  const auto rd = ManifoldDescriptor::euclidean(dim);
  const auto c_log = CostDescriptor::log_euclidean(rd);
  Rng rng(seed);

  auto factor_config = [&](bool flip) {
    struct Out {
      ManifoldPoint x, xbar;
      Vec p, pbar;
      double h;
    };
    ManifoldPoint x = sample_point(rd, rng);
    Vec u = sample_unit_tangent(x, rng);
    double r = rng.uniform(0.6, 1.4);
    ManifoldPoint xbar{rd, x.coords + r * u};
    CrossDifference E = cross_difference_matrix(c_log, x, xbar);
    Vec pbar = sample_unit_tangent(xbar, rng);
    Vec p = E.pair_left(pbar);
    p.normalize();  // parallel to the E-image of pbar: the convex direction
    if (flip) pbar = -pbar;
    double h = h_quadratic(c_log, x, xbar, {x, p}, {xbar, pbar});
    return Out{std::move(x), std::move(xbar), std::move(p), std::move(pbar), h};
  };

  auto plus = factor_config(true);    // h₊ < 0 after the sign flip
  auto minus = factor_config(false);  // h₋ > 0
  if (plus.h > 0.0 || minus.h <= 0.0)
    throw Error("log_product_counterexample: unexpected h signs in the factor configs");

  LogCounterexample out;
  out.lambda = balance_lambda(plus.h, minus.h);
  out.cross_plus =
      cross_fd(c_log, plus.x, plus.xbar, {plus.x, plus.p}, {plus.xbar, plus.pbar}).cross_value;
  out.cross_minus =
      cross_fd(c_log, minus.x, minus.xbar, {minus.x, minus.p}, {minus.xbar, minus.pbar})
          .cross_value;

  const CostDescriptor prod = product_cost(c_log, c_log);
  const auto& pm = prod.space;
  ManifoldPoint x{pm, join_factors(pm, {plus.x.coords, minus.x.coords})};
  ManifoldPoint xbar{pm, join_factors(pm, {plus.xbar.coords, minus.xbar.coords})};
  TangentVector p{x, join_factors(pm, {plus.p, Vec(out.lambda * minus.p)})};
  TangentVector pbar{xbar, join_factors(pm, {plus.pbar, Vec(out.lambda * minus.pbar)})};
  out.sample = cross_fd(prod, x, xbar, p, pbar);
  return out;
}

// --- Hopf submersions -----------------------------------------------------------

SubmersionDescriptor SubmersionDescriptor::hopf(int m) {
  if (m < 1) throw DomainError("hopf: m must be >= 1");
  SubmersionDescriptor s;
  s.total = ManifoldDescriptor::sphere(2 * m + 1);
  s.base = ManifoldDescriptor::complex_projective(m);
  s.vertical_dim = 1;
  return s;
}

ManifoldPoint SubmersionDescriptor::project(const ManifoldPoint& xt) const {
  if (xt.owner != total) throw DomainError("project: point is not on the total space");
  return {base, detail::gauge_cp<double>(xt.coords)};
}

namespace {

// Fiber phase of xt over the canonical representative rep: xt = e^{iφ} rep.
std::pair<double, double> fiber_phase(const Vec& xt, const Vec& rep) {
  auto [re, im] = detail::hermitian<double>(xt, rep);
  double mod = std::hypot(re, im);
  if (mod < 1e-6) throw DomainError("point is not on the expected fiber");
  return {re / mod, im / mod};
}

}  // namespace

TangentVector horizontal_lift_vector(const SubmersionDescriptor& sub, const ManifoldPoint& b,
                                     const TangentVector& v, const ManifoldPoint& xt) {
  if (b.owner != sub.base || xt.owner != sub.total)
    throw DomainError("horizontal_lift_vector: wrong spaces");
  // ambient comparison of gauged representatives; arccos-based distance
  // cannot resolve fiber membership this tightly
  if ((detail::gauge_cp<double>(xt.coords) - b.coords).norm() > 1e-9)
    throw DomainError("horizontal_lift_vector: point is not in the fiber over b");
  auto [c, s] = fiber_phase(xt.coords, b.coords);
  return {xt, detail::phase_rotate<double>(v.coords, c, s)};
}

LiftedPair horizontal_lift_pair(const SubmersionDescriptor& sub, const ManifoldPoint& x,
                                const ManifoldPoint& xbar) {
  if (x.owner != sub.base || xbar.owner != sub.base)
    throw DomainError("horizontal_lift_pair: pair is not on the base");
  require_margin(x, xbar);
  LiftedPair lp{x, xbar, {sub.total, x.coords}, {sub.total, Vec()}, {}};
  // the base log is horizontal at the canonical representative by
  // construction; the sphere exponential of it is the lifted geodesic
  Vec g = detail::log_core<double>(sub.base, x.coords, xbar.coords);
  lp.geodesic = TangentVector{lp.xt, g};
  lp.xbart = ManifoldPoint{sub.total, detail::exp_core<double>(sub.total, lp.xt.coords, g)};
  return lp;
}

OneillRecord oneill_compare(const SubmersionDescriptor& sub, const RadialProfile& profile,
                            const ManifoldPoint& x, const ManifoldPoint& xbar,
                            const TangentVector& v, const TangentVector& vbar) {
  const CostDescriptor cb = CostDescriptor::radial(sub.base, profile);
  const CostDescriptor cm = CostDescriptor::radial(sub.total, profile);
  require_cost_pair_smooth(cb, x, xbar);

  // base-side covectors of the comparison surface
  const CrossDifference E = cross_difference_matrix(cb, x, xbar);
  const Vec vstar = E.pair_left(vbar.coords);        // −D̄DDc_B(x, x̄) v̄ at x
  const Vec vbarstar = E.pair_right(v.coords);       // −DD̄c_B(x, x̄) v at x̄
  const Vec qstar = -grad_x_cost(cb, x, xbar).coords;
  const Vec qbarstar = -grad_xbar_cost(cb, x, xbar).coords;

  // horizontal lifts; x lifts to its canonical representative so covectors
  // at x keep their coordinates
  const LiftedPair lift = horizontal_lift_pair(sub, x, xbar);
  auto [pc, ps] = fiber_phase(lift.xbart.coords, xbar.coords);
  const Vec qt = qstar;
  const Vec wt_star = vstar;
  const Vec qbart = detail::phase_rotate<double>(qbarstar, pc, ps);
  const Vec wbart_star = detail::phase_rotate<double>(vbarstar, pc, ps);

  OneillRecord rec;
  {
    CotangentVector qtc{lift.xt, qt};
    rec.lift_defect = (c_exp(cm, lift.xt, qtc).coords - lift.xbart.coords).norm();
  }

  // surface velocities on the total space
  Vec w_tilde = c_exp_velocity(cm, lift.xbart, qbart, wbart_star);
  Vec wbar_tilde = c_exp_velocity(cm, lift.xt, qt, wt_star);
  rec.w_tilde = TangentVector{lift.xt, w_tilde};
  rec.wbar_tilde = TangentVector{lift.xbart, wbar_tilde};

  CrossSample base = cross_fd(cb, x, xbar, v, vbar);
  CrossSample tot = cross_fd(cm, lift.xt, lift.xbart, rec.w_tilde, rec.wbar_tilde);
  rec.cross_base = base.cross_value;
  rec.cross_total = tot.cross_value;
  rec.residual_base = base.residual_estimate;
  rec.residual_total = tot.residual_estimate;
  rec.h_base = base.h_value;
  rec.h_total = tot.h_value;

  // F(s,t) = c_M(x̃(s), x̄̃(t)) − c_B(x(s), x̄(t)) over the stencil surface
  const double h = 0.02;
  rec.f_min = std::numeric_limits<double>::infinity();
  for (int i = -2; i <= 2; ++i) {
    Vec covb = qbarstar + (i * h) * vbarstar;
    Vec covm = qbart + (i * h) * wbart_star;
    if (!c_exp_in_domain(cb, xbar, covb) || !c_exp_in_domain(cm, lift.xbart, covm))
      throw CutLocusProximity("oneill_compare: s-stencil leaves Dom(c-Exp)");
    Vec xs = detail::c_exp_core<double>(cb, xbar.coords, covb);
    Vec xts = detail::c_exp_core<double>(cm, lift.xbart.coords, covm);
    for (int j = -2; j <= 2; ++j) {
      Vec covb2 = qstar + (j * h) * vstar;
      Vec covm2 = qt + (j * h) * wt_star;
      if (!c_exp_in_domain(cb, x, covb2) || !c_exp_in_domain(cm, lift.xt, covm2))
        throw CutLocusProximity("oneill_compare: t-stencil leaves Dom(c-Exp)");
      Vec xbt = detail::c_exp_core<double>(cb, x.coords, covb2);
      Vec xtbt = detail::c_exp_core<double>(cm, lift.xt.coords, covm2);
      double f = detail::cost_core<double>(cm, xts, xtbt) - detail::cost_core<double>(cb, xs, xbt);
      rec.f_min = std::min(rec.f_min, f);
    }
  }
  return rec;
}

CurvatureProbe cpn_curvature_probe(int m, int samples, std::uint64_t seed, int threads) {
  if (m < 1) throw DomainError("cpn_curvature_probe: m must be >= 1");
  const auto cp = ManifoldDescriptor::complex_projective(m);
  const auto c = CostDescriptor::half_square(cp);
  const double eps = 0.01;  // diagonal-limit separation

  struct Slot {
    double k = 0.0;
    int type = 0;
    bool valid = false;
  };
  const int per = m >= 2 ? 3 : 1;
  std::vector<Slot> slots(static_cast<std::size_t>(samples * per));

  parallel_for(samples, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    ManifoldPoint x = sample_point(cp, rng);
    Vec p = sample_unit_tangent(x, rng);
    Vec jp = detail::times_i<double>(p);
    Vec u = sample_unit_tangent(x, rng);
    ManifoldPoint xbar = exp_map(x, {x, eps * u});

    // the gauged representative of xbar sits at some fiber phase relative
    // to x; candidates must be rotated by it before projecting, or the
    // probed plane silently turns inside the horizontal space
    auto [pc, ps] = fiber_phase(xbar.coords, x.coords);
    auto estimate = [&, pc, ps](const Vec& pbar_at_x, int type, int slot) {
      Vec pb = project_tangent(xbar, detail::phase_rotate<double>(pbar_at_x, pc, ps));
      double n = pb.norm();
      if (n < 1e-6) return;
      pb /= n;
      CrossSample s = cross_fd(c, x, xbar, {x, p}, {xbar, pb});
      slots[static_cast<std::size_t>(slot)] = {0.75 * s.cross_value, type, true};
    };

    estimate(jp, 0, i * per);  // holomorphic plane (p, Jp): K = 4
    if (m >= 2) {
      // totally real plane: pbar ⊥ {p, Jp}: K = 1
      Vec e;
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        e = sample_unit_tangent(x, rng);
        e -= e.dot(p) * p;
        e -= e.dot(jp) * jp;
        if (e.norm() > 1e-3) {
          e.normalize();
          found = true;
        }
      }
      if (found) {
        estimate(e, 1, i * per + 1);
        double alpha = rng.uniform(0.2, 1.35);
        Vec mix = std::cos(alpha) * jp + std::sin(alpha) * e;
        estimate(mix, 2, i * per + 2);
      }
    }
  });

  CurvatureProbe probe;
  probe.min_estimate = std::numeric_limits<double>::infinity();
  probe.max_estimate = -std::numeric_limits<double>::infinity();
  for (const auto& s : slots) {
    if (!s.valid) continue;
    probe.estimates.push_back(s.k);
    if (s.type == 0) probe.holomorphic.push_back(s.k);
    if (s.type == 1) probe.real_planes.push_back(s.k);
    probe.min_estimate = std::min(probe.min_estimate, s.k);
    probe.max_estimate = std::max(probe.max_estimate, s.k);
  }
  return probe;
}

}  // namespace cclab
