#include <doctest.h>

#include "cclab/cost.hpp"
#include "cclab/sampling.hpp"

using namespace cclab;

namespace {
ManifoldPoint north() {
  auto s2 = ManifoldDescriptor::sphere(2);
  Vec v(3);
  v << 0.0, 0.0, 1.0;
  return make_point(s2, v);
}
}  // namespace

TEST_CASE("cost evaluation closed forms") {
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  auto x = north();
  Vec e0 = Vec::Unit(3, 0);
  auto y = make_point(s2, e0);  // distance pi/2
  CHECK(cost_eval(c, x, y) == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-14));
  CHECK(cost_eval(c, x, x) == 0.0);

  auto r2 = ManifoldDescriptor::euclidean(2);
  auto cl = CostDescriptor::log_euclidean(r2);
  Vec a(2), b(2);
  a << 0.0, 0.0;
  b << 1.0, 0.0;
  CHECK(cost_eval(cl, {r2, a}, {r2, b}) == doctest::Approx(0.0));  // log 1
  CHECK_THROWS_AS(cost_eval(cl, {r2, a}, {r2, a}), SingularCost);

  // radial profile validation: log cost only pairs with Euclidean spaces
  CHECK_THROWS_AS(CostDescriptor::log_euclidean(s2), DomainError);
  CHECK_NOTHROW(CostDescriptor::radial(s2, cosh_profile()));
  CHECK(CostDescriptor::parse(s2, "half-square").name() == "half-square");
  CHECK(CostDescriptor::parse(s2, "radial:cosh").name() == "radial:cosh");
  CHECK_THROWS_AS(CostDescriptor::parse(s2, "radial:nope"), DomainError);
}

TEST_CASE("margin violations raise") {
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  auto x = north();
  Vec anti(3);
  anti << 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(cost_eval(c, x, make_point(s2, anti)), CutLocusProximity);
}

TEST_CASE("gradients: closed form = log map for half-square, FD oracle elsewhere") {
  Rng rng(91);
  for (const char* name : {"S2", "CP1", "S2xR1"}) {
    auto m = ManifoldDescriptor::parse(name);
    auto c = CostDescriptor::half_square(m);
    for (int i = 0; i < 20; ++i) {
      PairSample pr = sample_pair(m, rng, 0.2, pair_rho_max(m, 0.3));
      Vec g = grad_x_cost(c, pr.x, pr.xbar).coords;
      Vec lg = log_map(pr.x, pr.xbar).coords;
      INFO(name);
      CHECK((g + lg).norm() <= 1e-10 * (1.0 + lg.norm()));
      // FD agreement in the x slot
      Vec fd = grad_x_cost_fd(c, pr.x, pr.xbar).coords;
      CHECK((g - fd).norm() <= 1e-8 * (1.0 + g.norm()));
    }
  }

  // coincident points: zero covector
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  auto x = north();
  CHECK(grad_x_cost(c, x, x).coords.norm() == 0.0);

  // log cost analytic gradient vs FD
  auto r3 = ManifoldDescriptor::euclidean(3);
  auto cl = CostDescriptor::log_euclidean(r3);
  for (int i = 0; i < 20; ++i) {
    PairSample pr = sample_pair(r3, rng, 0.5, 2.0);
    Vec u = pr.x.coords - pr.xbar.coords;
    Vec expect = u / u.squaredNorm();
    CHECK((-grad_x_cost(cl, pr.x, pr.xbar).coords - expect).norm() <= 1e-12);
    Vec fd = grad_x_cost_fd(cl, pr.x, pr.xbar).coords;
    CHECK((grad_x_cost(cl, pr.x, pr.xbar).coords - fd).norm() <= 1e-8);
  }

  // general radial profile: cosh
  auto cc = CostDescriptor::radial(s2, cosh_profile());
  for (int i = 0; i < 10; ++i) {
    PairSample pr = sample_pair(s2, rng, 0.2, M_PI - 0.3);
    Vec g = grad_x_cost(cc, pr.x, pr.xbar).coords;
    Vec fd = grad_x_cost_fd(cc, pr.x, pr.xbar).coords;
    CHECK((g - fd).norm() <= 1e-8 * (1.0 + g.norm()));
  }
}

TEST_CASE("cost exponential") {
  Rng rng(17);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  auto x = north();

  // p* = 0 maps to the base point
  CHECK((c_exp(c, x, {x, Vec(Vec::Zero(3))}).coords - x.coords).norm() == 0.0);

  // half-square: c-exp is the Riemannian exp
  for (int i = 0; i < 25; ++i) {
    ManifoldPoint p = sample_point(s2, rng);
    Vec u = sample_unit_tangent(p, rng);
    double rho = rng.uniform(0.01, M_PI - 0.1);
    CotangentVector ps{p, rho * u};
    CHECK((c_exp(c, p, ps).coords - exp_map(p, {p, rho * u}).coords).norm() == 0.0);
  }

  // inverse pair: c_exp(x, -grad_x c(x, xbar)) = xbar, and the round trip
  // -grad_x c(x, c_exp(x, p*)) = p*
  for (const char* cost_name : {"half-square", "radial:cosh"}) {
    auto cg = CostDescriptor::parse(s2, cost_name);
    for (int i = 0; i < 25; ++i) {
      PairSample pr = sample_pair(s2, rng, 0.1, M_PI - 0.3);
      CotangentVector ps{pr.x, -grad_x_cost(cg, pr.x, pr.xbar).coords};
      INFO(cost_name);
      CHECK((c_exp(cg, pr.x, ps).coords - pr.xbar.coords).norm() <= 1e-9);
      ManifoldPoint back = c_exp(cg, pr.x, ps);
      Vec again = -grad_x_cost(cg, pr.x, back).coords;
      CHECK((again - ps.coords).norm() <= 1e-9 * (1.0 + ps.coords.norm()));
    }
  }

  // domain refusal
  CotangentVector big{x, (M_PI - 0.01) * Vec(Vec::Unit(3, 0))};
  CHECK_THROWS_AS(c_exp(c, x, big), CutLocusProximity);
  auto r2 = ManifoldDescriptor::euclidean(2);
  auto cl = CostDescriptor::log_euclidean(r2);
  Vec origin = Vec::Zero(2);
  CHECK_THROWS_AS(c_exp(cl, {r2, origin}, {{r2, origin}, Vec(Vec::Zero(2))}), SingularCost);
}

TEST_CASE("c-segments") {
  Rng rng(29);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  ManifoldPoint x = sample_point(s2, rng);
  Vec u0 = sample_unit_tangent(x, rng), u1 = sample_unit_tangent(x, rng);
  CotangentVector p0{x, 1.1 * u0}, p1{x, 0.7 * u1};

  // endpoints and constancy
  CHECK((c_segment(c, x, p0, p1, 0.0).coords - c_exp(c, x, p0).coords).norm() == 0.0);
  CHECK((c_segment(c, x, p0, p1, 1.0).coords - c_exp(c, x, p1).coords).norm() == 0.0);
  CHECK((c_segment(c, x, p0, p0, 0.37).coords - c_exp(c, x, p0).coords).norm() <= 1e-15);

  // h-geodesy: the pulled-back gradient -D c(x, xbar(s)) is affine in s, so
  // its second difference vanishes (the geodesic equation in covector form)
  double worst = 0.0;
  for (int k = 1; k < 8; ++k) {
    double s = k / 8.0, ds = 1.0 / 16.0;
    Vec gm = grad_x_cost(c, x, c_segment(c, x, p0, p1, s - ds)).coords;
    Vec g0 = grad_x_cost(c, x, c_segment(c, x, p0, p1, s)).coords;
    Vec gp = grad_x_cost(c, x, c_segment(c, x, p0, p1, s + ds)).coords;
    worst = std::max(worst, (gp - 2.0 * g0 + gm).norm() / (ds * ds));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("cross-difference matrix") {
  Rng rng(31);

  // Euclidean half-square: E is the identity
  auto r3 = ManifoldDescriptor::euclidean(3);
  auto ce = CostDescriptor::half_square(r3);
  PairSample pr = sample_pair(r3, rng, 0.5, 2.0);
  CrossDifference E = cross_difference_matrix(ce, pr.x, pr.xbar);
  CHECK((E.E - Mat::Identity(3, 3)).norm() <= 1e-9);
  CHECK_FALSE(E.degenerate);

  // sphere diagonal limit: E is the identity up to the relative rotation of
  // the two frames, i.e. it matches their Gram matrix
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  ManifoldPoint x = sample_point(s2, rng);
  Vec u = sample_unit_tangent(x, rng);
  ManifoldPoint xbar = exp_map(x, {x, 1e-3 * u});
  CrossDifference Ed = cross_difference_matrix(cs, x, xbar);
  Mat gram(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      gram(i, j) = Ed.frame_x[static_cast<std::size_t>(i)].dot(Ed.frame_xbar[static_cast<std::size_t>(j)]);
  CHECK((Ed.E - gram).norm() <= 1e-5);

  // symmetry of mixed partials through the mirrored pairing
  for (int i = 0; i < 10; ++i) {
    PairSample q = sample_pair(s2, rng, 0.3, M_PI - 0.4);
    Vec a = sample_unit_tangent(q.x, rng);
    Vec b = sample_unit_tangent(q.xbar, rng);
    double h1 = h_quadratic(cs, q.x, q.xbar, {q.x, a}, {q.xbar, b});
    double h2 = h_quadratic(cs, q.xbar, q.x, {q.xbar, b}, {q.x, a});
    CHECK(h1 == doctest::Approx(h2).epsilon(1e-9));
  }

  // A1/A2 probes: non-degenerate on every built-in with half-square cost
  for (const char* name : {"S2", "S3", "R2", "CP1", "CP2", "S2xS2", "S2xR1"}) {
    auto m = ManifoldDescriptor::parse(name);
    auto c = CostDescriptor::half_square(m);
    for (int i = 0; i < 6; ++i) {
      PairSample p2 = sample_pair(m, rng, 0.15, pair_rho_max(m, 0.35));
      CrossDifference e2 = cross_difference_matrix(c, p2.x, p2.xbar);
      INFO(name);
      CHECK_FALSE(e2.degenerate);
      CHECK(std::abs(e2.det) > 1e-8);
    }
  }
}

TEST_CASE("h_quadratic properties") {
  Rng rng(37);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  PairSample pr = sample_pair(s2, rng, 0.4, 2.0);
  Vec p = sample_unit_tangent(pr.x, rng);
  Vec pb = sample_unit_tangent(pr.xbar, rng);

  // matches the E-matrix contraction
  CrossDifference E = cross_difference_matrix(c, pr.x, pr.xbar);
  Vec pc(2), bc(2);
  for (int i = 0; i < 2; ++i) {
    pc[i] = E.frame_x[static_cast<std::size_t>(i)].dot(p);
    bc[i] = E.frame_xbar[static_cast<std::size_t>(i)].dot(pb);
  }
  double via_matrix = pc.dot(E.E * bc);
  double direct = h_quadratic(c, pr.x, pr.xbar, {pr.x, p}, {pr.xbar, pb});
  CHECK(direct == doctest::Approx(via_matrix).epsilon(1e-8));

  // zero slots, bilinearity, sign flip
  CHECK(h_quadratic(c, pr.x, pr.xbar, {pr.x, Vec(Vec::Zero(3))}, {pr.xbar, pb}) == 0.0);
  double scaled = h_quadratic(c, pr.x, pr.xbar, {pr.x, Vec(2.0 * p)}, {pr.xbar, Vec(-0.5 * pb)});
  CHECK(scaled == doctest::Approx(-direct).epsilon(1e-7));
}

TEST_CASE("solve_h_velocity") {
  Rng rng(41);

  // Euclidean half-square: the covector equals the velocity
  auto r2 = ManifoldDescriptor::euclidean(2);
  auto ce = CostDescriptor::half_square(r2);
  PairSample pe = sample_pair(r2, rng, 0.5, 2.0);
  Vec p = sample_unit_tangent(pe.x, rng);
  Vec u = solve_h_velocity(ce, pe.x, pe.xbar, {pe.x, p}).coords;
  CHECK((u - p).norm() <= 1e-9);

  // zero velocity -> zero covector
  CHECK(solve_h_velocity(ce, pe.x, pe.xbar, {pe.x, Vec(Vec::Zero(2))}).coords.norm() == 0.0);

  // velocity defect on random sphere configurations
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    PairSample pr = sample_pair(s2, rng, 0.2, M_PI - 0.5);
    Vec v = sample_unit_tangent(pr.x, rng);
    Vec us = solve_h_velocity(cs, pr.x, pr.xbar, {pr.x, v}).coords;
    Vec qbar = -grad_xbar_cost(cs, pr.x, pr.xbar).coords;
    Vec vel = c_exp_velocity(cs, pr.xbar, qbar, us);
    worst = std::max(worst, (vel - v).norm());
  }
  CHECK(worst <= 1e-8);
}
