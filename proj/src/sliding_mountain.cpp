#include "cclab/sliding_mountain.hpp"

#include <algorithm>
#include <cmath>

#include "cclab/sampling.hpp"

namespace cclab {

SlidingMountainScenario make_scenario(const CostDescriptor& c, Rng& rng, int n_probes,
                                      int t_points) {
  if (t_points < 5) throw DomainError("make_scenario: t grid too coarse");
  SlidingMountainScenario s;
  s.cost = c;
  s.x = sample_point(c.space, rng);

  auto sample_covector = [&](const Vec* align) {
    Vec u = sample_unit_tangent(s.x, rng);
    if (align && u.dot(*align) < 0.0) u = -u;  // keep log segments away from p* = 0
    if (c.kind == CostKind::LogEuclidean || c.kind == CostKind::ProductSum) {
      double norm = rng.uniform(0.8, 1.8);
      return Vec(norm * u);
    }
    double rho = rng.uniform(0.2, pair_rho_max(c.space, 0.5));
    double norm = static_cast<double>(c.profile.fp(static_cast<long double>(rho)));
    return Vec(norm * u);
  };
  Vec p0 = sample_covector(nullptr);
  Vec p1 = sample_covector(&p0);
  s.segment = HGeodesic{s.x, CotangentVector{s.x, p0}, CotangentVector{s.x, Vec(p1 - p0)},
                        HGeodesic::Side::MovingRight};

  s.t_grid.resize(static_cast<std::size_t>(t_points));
  for (int k = 0; k < t_points; ++k) s.t_grid[static_cast<std::size_t>(k)] = double(k) / (t_points - 1);

  std::vector<ManifoldPoint> xbars;
  xbars.reserve(s.t_grid.size());
  for (double t : s.t_grid) xbars.push_back(s.xbar_at(t));

  int kept = 0, attempts = 0;
  while (kept < n_probes && attempts < 200 * n_probes) {
    ++attempts;
    ManifoldPoint y = sample_point(c.space, rng);
    bool ok = true;
    for (const auto& xb : xbars)
      if (!cost_pair_smooth(c, y, xb, 0.02)) {
        ok = false;
        break;
      }
    if (ok) {
      s.probes.push_back(std::move(y));
      ++kept;
    }
  }
  if (kept < n_probes) throw Error("make_scenario: probe sampling kept failing the margin filter");
  return s;
}

double f_eval(const SlidingMountainScenario& s, double t, const ManifoldPoint& y) {
  ManifoldPoint xb = s.xbar_at(t);
  require_cost_pair_smooth(s.cost, y, xb);
  return -detail::cost_core<double>(s.cost, y.coords, xb.coords) +
         detail::cost_core<double>(s.cost, s.x.coords, xb.coords);
}

namespace {

struct FTable {
  // f[probe][t]
  std::vector<std::vector<double>> f;
  double scale = 1.0;
};

FTable tabulate(const SlidingMountainScenario& s) {
  FTable tab;
  std::vector<ManifoldPoint> xbars;
  xbars.reserve(s.t_grid.size());
  for (double t : s.t_grid) xbars.push_back(s.xbar_at(t));
  tab.f.resize(s.probes.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < s.probes.size(); ++i) {
    auto& row = tab.f[i];
    row.resize(s.t_grid.size());
    for (std::size_t k = 0; k < xbars.size(); ++k) {
      require_cost_pair_smooth(s.cost, s.probes[i], xbars[k]);
      row[k] = -detail::cost_core<double>(s.cost, s.probes[i].coords, xbars[k].coords) +
               detail::cost_core<double>(s.cost, s.x.coords, xbars[k].coords);
      peak = std::max(peak, std::abs(row[k]));
    }
  }
  tab.scale = 1.0 + peak;
  return tab;
}

}  // namespace

ConvexityOutcome check_dasm(const SlidingMountainScenario& s) {
  FTable tab = tabulate(s);
  ConvexityOutcome out;
  out.scale = tab.scale;
  out.max_dasm_violation = -std::numeric_limits<double>::infinity();
  for (const auto& row : tab.f) {
    const double top = std::max(row.front(), row.back());
    for (double v : row) {
      out.max_dasm_violation = std::max(out.max_dasm_violation, v - top);
      ++out.n_evaluations;
    }
  }
  out.pass = out.max_dasm_violation <= 1e-8 * out.scale;
  return out;
}

ConvexityOutcome check_time_convexity(const SlidingMountainScenario& s) {
  FTable tab = tabulate(s);
  ConvexityOutcome out;
  out.scale = tab.scale;
  out.max_chord_violation = -std::numeric_limits<double>::infinity();
  out.min_second_difference = std::numeric_limits<double>::infinity();
  const auto& tg = s.t_grid;
  for (const auto& row : tab.f) {
    const double f0 = row.front(), f1 = row.back();
    for (std::size_t k = 0; k < row.size(); ++k) {
      double chord = (1.0 - tg[k]) * f0 + tg[k] * f1;
      out.max_chord_violation = std::max(out.max_chord_violation, row[k] - chord);
      ++out.n_evaluations;
    }
    for (std::size_t k = 1; k + 1 < row.size(); ++k)
      out.min_second_difference =
          std::min(out.min_second_difference, row[k + 1] - 2.0 * row[k] + row[k - 1]);
  }
  out.pass = out.max_chord_violation <= 1e-8 * out.scale &&
             out.min_second_difference >= -1e-8 * out.scale;
  return out;
}

GDiagnostics g_diagnostics(const SlidingMountainScenario& s, double t0, const TangentVector& p) {
  const CostDescriptor& c = s.cost;
  const double dt = 0.02;
  if (t0 - 2.0 * dt < 0.0 || t0 + 2.0 * dt > 1.0)
    throw DomainError("g_diagnostics: t0 too close to the segment ends");

  const ManifoldPoint xbar0 = s.xbar_at(t0);
  const Vec qbar = -grad_xbar_cost(c, s.x, xbar0).coords;
  const Vec u = solve_h_velocity(c, s.x, xbar0, p).coords;

  // long-double segment and h-geodesic evaluations
  const VecL xl = to_ld(s.x.coords);
  const VecL xb0 = to_ld(xbar0.coords);
  const VecL anchorl = to_ld(s.segment.anchor.coords), dirl = to_ld(s.segment.direction.coords);
  const VecL ql = to_ld(qbar), ul = to_ld(u);

  auto xbar_ld = [&](long double t) {
    return detail::c_exp_core<long double>(c, xl, VecL(anchorl + t * dirl));
  };
  auto curve_ld = [&](long double sv) {
    if (sv == 0.0L) return VecL(xl);  // exact base point: f_t(x) ≡ 0 bitwise
    return detail::c_exp_core<long double>(c, xb0, VecL(ql + sv * ul));
  };

  // cache the five segment points and the f-offsets c(x, x̄(t))
  const long double tl = t0;
  const long double steps[5] = {tl - dt, tl - 0.5L * dt, tl, tl + 0.5L * dt, tl + dt};
  VecL xbars[5];
  long double offset[5];
  for (int k = 0; k < 5; ++k) {
    xbars[k] = xbar_ld(steps[k]);
    offset[k] = detail::cost_core<long double>(c, xl, xbars[k]);
  }
  auto f_at = [&](const VecL& y, int k) {
    return -detail::cost_core<long double>(c, y, xbars[k]) + offset[k];
  };
  // Richardson pair of centered t-second-differences at steps dt and dt/2
  auto g_of = [&](long double sv) {
    VecL y = curve_ld(sv);
    long double coarse = (f_at(y, 0) - 2.0L * f_at(y, 2) + f_at(y, 4)) / (long double)(dt * dt);
    long double fine =
        (f_at(y, 1) - 2.0L * f_at(y, 2) + f_at(y, 3)) / (long double)(0.25 * dt * dt);
    return static_cast<double>((4.0L * fine - coarse) / 3.0L);
  };

  GDiagnostics out;
  out.g0 = g_of(0.0L);

  const double ds_g = 5e-3;
  out.gprime0 =
      (8.0 * (g_of(ds_g) - g_of(-ds_g)) - (g_of(2.0 * ds_g) - g_of(-2.0 * ds_g))) / (12.0 * ds_g);

  // widest admissible s-range for the curvature scan
  double S = 0.24;
  auto s_ok = [&](double sv) {
    Vec cov = qbar + sv * u;
    if (!c_exp_in_domain(c, xbar0, cov)) return false;
    ManifoldPoint y{c.space, detail::c_exp_core<double>(c, xbar0.coords, cov)};
    for (int k = 0; k < 5; ++k)
      if (!cost_pair_smooth(c, y, ManifoldPoint{c.space, to_d(xbars[k])})) return false;
    return true;
  };
  while (S > 0.05 && (!s_ok(S + 0.05) || !s_ok(-S - 0.05))) S *= 0.5;
  if (S <= 0.05) throw CutLocusProximity("g_diagnostics: no admissible s-range at this scenario");
  out.s_range = S;

  const int K = 6;
  const double ds = S / K;
  std::vector<double> gs(static_cast<std::size_t>(4 * K + 1));
  for (int j = -2 * K; j <= 2 * K; ++j) gs[static_cast<std::size_t>(j + 2 * K)] = g_of(j * 0.5 * ds);
  out.min_second_difference = std::numeric_limits<double>::infinity();
  for (int j = -K + 1; j <= K - 1; ++j) {
    auto at = [&](int half_steps) { return gs[static_cast<std::size_t>(2 * j + half_steps + 2 * K)]; };
    double coarse = (at(2) - 2.0 * at(0) + at(-2)) / (ds * ds);
    double fine = (at(1) - 2.0 * at(0) + at(-1)) / (0.25 * ds * ds);
    out.min_second_difference =
        std::min(out.min_second_difference, (4.0 * fine - coarse) / 3.0);
  }
  return out;
}

}  // namespace cclab
