#include <doctest.h>

#include "cclab/constructions.hpp"
#include "cclab/sampling.hpp"

using namespace cclab;

TEST_CASE("product cost additivity of values") {
  Rng rng(101);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  auto prod = product_cost(cs, cs);
  auto direct = CostDescriptor::half_square(ManifoldDescriptor::parse("S2xS2"));
  const auto& pm = prod.space;
  for (int i = 0; i < 30; ++i) {
    PairSample a = sample_pair(s2, rng, 0.1, 2.5);
    PairSample b = sample_pair(s2, rng, 0.1, 2.5);
    ManifoldPoint x{pm, join_factors(pm, {a.x.coords, b.x.coords})};
    ManifoldPoint y{pm, join_factors(pm, {a.xbar.coords, b.xbar.coords})};
    double lhs = cost_eval(prod, x, y);
    double da = dist(a.x, a.xbar), db = dist(b.x, b.xbar);
    CHECK(lhs == doctest::Approx(0.5 * da * da + 0.5 * db * db).epsilon(1e-12));
    CHECK(lhs == doctest::Approx(cost_eval(direct, x, y)).epsilon(1e-12));
  }

  // one factor coincident: the other factor's cost alone
  PairSample a = sample_pair(s2, rng, 0.3, 2.0);
  ManifoldPoint z = sample_point(s2, rng);
  ManifoldPoint x{pm, join_factors(pm, {a.x.coords, z.coords})};
  ManifoldPoint y{pm, join_factors(pm, {a.xbar.coords, z.coords})};
  CHECK(cost_eval(prod, x, y) == doctest::Approx(cost_eval(cs, a.x, a.xbar)).epsilon(1e-14));
}

TEST_CASE("log quadratic closed form") {
  Vec p(3), q(3);
  p << 1.0, 0.0, 0.0;
  q << 0.0, 1.0, 0.0;
  CHECK(log_cost_quadratic(q, p) == doctest::Approx(-1.0));  // orthogonal: concave side
  CHECK(log_cost_quadratic(p, p) == doctest::Approx(1.0));   // parallel: convex side
  Vec zero = Vec::Zero(3);
  CHECK_THROWS_AS(log_cost_quadratic(zero, p), SingularCost);
}

TEST_CASE("log product counterexample, frozen regression at seed 7") {
  LogCounterexample lc = log_product_counterexample(1, 7);
  CHECK(std::abs(lc.sample.h_value) <= 1e-9);
  CHECK(lc.sample.cross_value <= -1e-3);
  CHECK(lc.cross_plus < 0.0);
  CHECK(lc.cross_minus < 0.0);
  // first-run regression values for (dim 1, seed 7)
  CHECK(lc.sample.cross_value == doctest::Approx(-9.3426880439403472).epsilon(1e-9));
  CHECK(lc.lambda == doctest::Approx(1.4220014153431868).epsilon(1e-9));
  // the additivity identity ties the product value to the factor values
  double expect = lc.cross_plus + std::pow(lc.lambda, 4) * lc.cross_minus;
  CHECK(lc.sample.cross_value == doctest::Approx(expect).epsilon(2e-4));

  LogCounterexample lc2 = log_product_counterexample(2, 7);
  CHECK(std::abs(lc2.sample.h_value) <= 1e-9);
  CHECK(lc2.sample.cross_value <= -1e-3);
}

TEST_CASE("injecting a log factor always breaks weak regularity") {
  // 500-seed sweep: a log-cost factor paired against a geodesic pair of a
  // non-negatively cross-curved factor always yields an h-null pair with
  // strictly negative cross-curvature
  auto r1 = ManifoldDescriptor::euclidean(1);
  auto c_log = CostDescriptor::log_euclidean(r1);
  auto s2 = ManifoldDescriptor::sphere(2);
  int negatives = 0;
  for (int seed = 0; seed < 500; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 1000);
    Vec a(1), b(1);
    a << rng.normal();
    b << a[0] + rng.uniform(0.6, 1.6);
    ManifoldPoint xp{r1, a}, xbp{r1, b};
    Vec p(1), pb(1);
    p << 1.0;
    pb << -1.0;  // sign chosen so h_plus = p E pbar < 0 (E = 1/r^2 > 0)
    PairSample g = sample_pair(s2, rng, 0.3, 2.2);
    NullPairResult np = null_pair(c_log, xp, xbp, {xp, p}, {xbp, pb}, g.x, g.xbar);
    CrossSample s = cross_fd(np.product_cost, np.x, np.xbar, np.p, np.pbar);
    double scale = 1.0 + std::abs(np.h_plus) + np.lambda * np.lambda * np.h_minus;
    CHECK(std::abs(np.h_value) <= 1e-9 * scale);
    if (s.cross_value < -1e-4) ++negatives;
  }
  CHECK(negatives == 500);
}

TEST_CASE("the analogous sweep on S2xS2 finds no violation") {
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  double min_cross = 0.0;
  for (int seed = 0; seed < 500; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 5000);
    PairSample a = sample_pair(s2, rng, 0.15, 2.6);
    PairSample g = sample_pair(s2, rng, 0.3, 2.2);
    Vec p = sample_unit_tangent(a.x, rng), pb = sample_unit_tangent(a.xbar, rng);
    NullPairResult np = null_pair(cs, a.x, a.xbar, {a.x, p}, {a.xbar, pb}, g.x, g.xbar);
    CrossSample s = cross_fd(np.product_cost, np.x, np.xbar, np.p, np.pbar);
    min_cross = std::min(min_cross, s.cross_value);
  }
  CHECK(min_cross >= -1e-4);
}

TEST_CASE("hopf submersion lifts") {
  Rng rng(107);
  for (int m : {1, 2}) {
    auto sub = SubmersionDescriptor::hopf(m);
    CHECK(sub.total.ambient_dim() == sub.base.ambient_dim());
    for (int i = 0; i < 20; ++i) {
      ManifoldPoint b = sample_point(sub.base, rng);
      Vec v = rng.uniform(0.2, 1.0) * sample_unit_tangent(b, rng);
      double phi = rng.uniform(0.0, 2.0 * M_PI);
      ManifoldPoint xt{sub.total,
                       detail::phase_rotate<double>(b.coords, std::cos(phi), std::sin(phi))};
      TangentVector lift = horizontal_lift_vector(sub, b, {b, v}, xt);
      INFO("m=" << m);
      CHECK(std::abs(lift.coords.norm() - v.norm()) <= 1e-12);
      // horizontality at the fiber point
      CHECK(std::abs(lift.coords.dot(xt.coords)) <= 1e-10);
      CHECK(std::abs(lift.coords.dot(detail::times_i<double>(xt.coords))) <= 1e-10);
      // zero lifts to zero
      CHECK(horizontal_lift_vector(sub, b, {b, Vec(Vec::Zero(v.size()))}, xt).coords.norm() == 0.0);
    }

    // wrong fiber is refused
    ManifoldPoint b1 = sample_point(sub.base, rng);
    ManifoldPoint b2 = sample_point(sub.base, rng);
    Vec v = sample_unit_tangent(b1, rng);
    ManifoldPoint xt{sub.total, b2.coords};
    CHECK_THROWS_AS(horizontal_lift_vector(sub, b1, {b1, v}, xt), DomainError);
  }
}

TEST_CASE("horizontal pair lift: distance preserved, deterministic, minimal") {
  Rng rng(109);
  auto sub = SubmersionDescriptor::hopf(1);
  // the specific pi/4 example
  ManifoldPoint x = sample_point(sub.base, rng);
  Vec u = sample_unit_tangent(x, rng);
  ManifoldPoint xbar = exp_map(x, {x, (M_PI / 4.0) * u});
  LiftedPair lp = horizontal_lift_pair(sub, x, xbar);
  CHECK(dist(lp.xt, lp.xbart) == doctest::Approx(M_PI / 4.0).epsilon(1e-10));
  CHECK((sub.project(lp.xbart).coords - xbar.coords).norm() <= 1e-9);
  CHECK(lp.geodesic.coords.norm() == doctest::Approx(M_PI / 4.0).epsilon(1e-12));

  // determinism: bitwise-identical recomputation
  LiftedPair lp2 = horizontal_lift_pair(sub, x, xbar);
  CHECK((lp.xbart.coords - lp2.xbart.coords).norm() == 0.0);

  // minimality: the lift realizes the total-space distance, so no shorter
  // representative pair exists
  for (int i = 0; i < 10; ++i) {
    double phi = rng.uniform(0.0, 2.0 * M_PI);
    ManifoldPoint other{sub.total, detail::phase_rotate<double>(lp.xbart.coords, std::cos(phi),
                                                                std::sin(phi))};
    CHECK(dist(lp.xt, other) >= dist(lp.xt, lp.xbart) - 1e-12);
  }
}

TEST_CASE("oneill comparison on S3 -> CP1") {
  Rng rng(113);
  auto sub = SubmersionDescriptor::hopf(1);
  for (int i = 0; i < 8; ++i) {
    PairSample pr = sample_pair(sub.base, rng, 0.2, pair_rho_max(sub.base, 0.45));
    Vec v = sample_unit_tangent(pr.x, rng), vb = sample_unit_tangent(pr.xbar, rng);
    OneillRecord rec =
        oneill_compare(sub, half_square_profile(), pr.x, pr.xbar, {pr.x, v}, {pr.xbar, vb});
    CHECK(std::abs(rec.h_base - rec.h_total) <= 1e-8);
    CHECK(rec.cross_base >= rec.cross_total - 1e-5);
    CHECK(rec.f_min >= -1e-10);
    CHECK(rec.lift_defect <= 1e-9);
    // the lifted surface velocities are genuine tangent vectors upstairs
    CHECK(std::abs(rec.w_tilde.coords.dot(rec.w_tilde.base.coords)) <= 1e-8);
    CHECK(std::abs(rec.wbar_tilde.coords.dot(rec.wbar_tilde.base.coords)) <= 1e-8);
  }

  // general radial profile runs through the same machinery
  PairSample pr = sample_pair(sub.base, rng, 0.3, 0.9);
  Vec v = sample_unit_tangent(pr.x, rng), vb = sample_unit_tangent(pr.xbar, rng);
  OneillRecord rec = oneill_compare(sub, cosh_profile(), pr.x, pr.xbar, {pr.x, v}, {pr.xbar, vb});
  CHECK(std::abs(rec.h_base - rec.h_total) <= 1e-8);
  CHECK(rec.cross_base >= rec.cross_total - 1e-5);
  CHECK(rec.f_min >= -1e-10);
}

TEST_CASE("lifted surface velocities project onto the base vectors") {
  for (int m : {1, 2}) {
    auto sub = SubmersionDescriptor::hopf(m);
    for (int i = 0; i < 10; ++i) {
      Rng rng = Rng::stream(777, static_cast<std::uint64_t>(i + 100 * m));
      PairSample pr = sample_pair(sub.base, rng, 0.2, pair_rho_max(sub.base, 0.45));
      Vec v = sample_unit_tangent(pr.x, rng), vb = sample_unit_tangent(pr.xbar, rng);
      OneillRecord rec =
          oneill_compare(sub, half_square_profile(), pr.x, pr.xbar, {pr.x, v}, {pr.xbar, vb});
      // dpi at the canonical representative is horizontal projection
      Vec down = project_tangent(pr.x, rec.w_tilde.coords);
      CHECK((down - v).norm() <= 1e-9);
      // the far endpoint sits at a fiber phase; unrotate before projecting
      auto [re, im] = detail::hermitian<double>(rec.wbar_tilde.base.coords, pr.xbar.coords);
      double mod = std::hypot(re, im);
      Vec unrot = detail::phase_rotate<double>(rec.wbar_tilde.coords, re / mod, -im / mod);
      CHECK((project_tangent(pr.xbar, unrot) - vb).norm() <= 1e-9);
    }
  }
}

TEST_CASE("CP curvature probes") {
  CurvatureProbe p1 = cpn_curvature_probe(1, 12, 2025, 2);
  for (double k : p1.estimates) CHECK(k == doctest::Approx(4.0).epsilon(0.02));

  CurvatureProbe p2 = cpn_curvature_probe(2, 12, 2025, 2);
  CHECK(p2.min_estimate >= 0.98);
  CHECK(p2.max_estimate <= 4.08);
  CHECK(p2.max_estimate - p2.min_estimate >= 2.5);
  for (double k : p2.holomorphic) CHECK(k == doctest::Approx(4.0).epsilon(0.02));
  for (double k : p2.real_planes) CHECK(k == doctest::Approx(1.0).epsilon(0.05));
}
