#include <doctest.h>

#include "cclab/constructions.hpp"
#include "cclab/crosscurv.hpp"
#include "cclab/sampling.hpp"

using namespace cclab;

TEST_CASE("cross_fd oracles") {
  Rng rng(71);

  // flat case: identically zero
  auto r2 = ManifoldDescriptor::euclidean(2);
  auto ce = CostDescriptor::half_square(r2);
  for (int i = 0; i < 20; ++i) {
    PairSample pr = sample_pair(r2, rng, 0.3, 2.0);
    Vec p = sample_unit_tangent(pr.x, rng), pb = sample_unit_tangent(pr.xbar, rng);
    CrossSample s = cross_fd(ce, pr.x, pr.xbar, {pr.x, p}, {pr.xbar, pb});
    CHECK(std::abs(s.cross_value) <= 1e-7);
    CHECK(s.fd_step == 0.02);
    CHECK(s.richardson_levels == 1);
    CHECK(s.residual_estimate >= 0.0);
  }

  // 1D log cost: cross(p, pbar) = -4 p^2 pbar^2 / r^4 along the h-geodesic
  auto r1 = ManifoldDescriptor::euclidean(1);
  auto cl = CostDescriptor::log_euclidean(r1);
  for (int i = 0; i < 20; ++i) {
    double r = rng.uniform(0.6, 1.8);
    Vec a(1), b(1);
    a << rng.normal();
    b << a[0] + r;
    ManifoldPoint x{r1, a}, xbar{r1, b};
    double p = rng.uniform(0.4, 1.2), pb = rng.uniform(0.4, 1.2);
    Vec pv(1), pbv(1);
    pv << p;
    pbv << pb;
    CrossSample s = cross_fd(cl, x, xbar, {x, pv}, {xbar, pbv});
    double expect = -4.0 * p * p * pb * pb / (r * r * r * r);
    CHECK(s.cross_value == doctest::Approx(expect).epsilon(2e-4));
    // h = p E pbar with E = 1/r^2 in one dimension
    CHECK(s.h_value == doctest::Approx(p * pb / (r * r)).epsilon(1e-8));
  }

  // zero vectors short-circuit
  PairSample pr = sample_pair(r2, rng, 0.5, 1.5);
  CrossSample z = cross_fd(ce, pr.x, pr.xbar, {pr.x, Vec(Vec::Zero(2))},
                           {pr.xbar, Vec(Vec::Unit(2, 0))});
  CHECK(z.cross_value == 0.0);
  CHECK(z.h_value == 0.0);
}

TEST_CASE("cross_fd quartic scaling and sign flips") {
  Rng rng(73);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  PairSample pr = sample_pair(s2, rng, 0.4, 1.8);
  Vec p = sample_unit_tangent(pr.x, rng), pb = sample_unit_tangent(pr.xbar, rng);
  double base = cross_fd(c, pr.x, pr.xbar, {pr.x, p}, {pr.xbar, pb}).cross_value;
  for (double alpha : {-1.0, 0.5, 2.0}) {
    for (double beta : {-1.0, 0.5, 2.0}) {
      double scaled = cross_fd(c, pr.x, pr.xbar, {pr.x, Vec(alpha * p)}, {pr.xbar, Vec(beta * pb)})
                          .cross_value;
      double expect = alpha * alpha * beta * beta * base;
      CHECK(std::abs(scaled - expect) <= std::max(1e-4, 1e-3 * std::abs(expect)));
    }
  }
}

TEST_CASE("stencil domain guard") {
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  Vec n(3), f(3);
  n << 0.0, 0.0, 1.0;
  double d = M_PI - 0.051;  // inside the margin but no stencil room
  f << std::sin(d), 0.0, std::cos(d);
  ManifoldPoint x = make_point(s2, n), xbar = make_point(s2, f);
  Vec p = Vec::Unit(3, 0) * 1.0;
  Vec pproj(3);
  pproj << std::cos(d), 0.0, -std::sin(d);
  CHECK_THROWS_AS(cross_fd(c, x, xbar, {x, p}, {xbar, pproj}), CutLocusProximity);
}

TEST_CASE("null pair balancing") {
  CHECK(balance_lambda(0.0, 4.0) == 0.0);
  CHECK(balance_lambda(-4.0, 4.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(balance_lambda(0.5, 4.0), NotNullable);
  CHECK_THROWS_AS(balance_lambda(-1.0, 0.0), DomainError);

  Rng rng(79);
  auto s2 = ManifoldDescriptor::sphere(2);
  auto c = CostDescriptor::half_square(s2);
  for (int i = 0; i < 25; ++i) {
    PairSample pa = sample_pair(s2, rng, 0.2, 2.0);
    PairSample pb = sample_pair(s2, rng, 0.3, 2.0);
    Vec p = sample_unit_tangent(pa.x, rng), pbv = sample_unit_tangent(pa.xbar, rng);
    NullPairResult np = null_pair(c, pa.x, pa.xbar, {pa.x, p}, {pa.xbar, pbv}, pb.x, pb.xbar);
    CHECK(np.h_plus <= 0.0);
    double d = dist(pb.x, pb.xbar);
    CHECK(np.h_minus == doctest::Approx(d * d).epsilon(1e-8));
    double scale = 1.0 + std::abs(np.h_plus) + np.lambda * np.lambda * np.h_minus;
    CHECK(std::abs(np.h_value) <= 1e-9 * scale);
  }

  // trivial second geodesic is refused
  PairSample pa = sample_pair(s2, rng, 0.3, 1.0);
  Vec p = sample_unit_tangent(pa.x, rng);
  CHECK_THROWS_AS(null_pair(c, pa.x, pa.xbar, {pa.x, p}, {pa.xbar, p}, pa.x, pa.x), DomainError);
}

TEST_CASE("classification scans") {
  SamplerSpec spec;
  spec.seed = 1234;
  spec.n_pairs = 6;
  spec.n_dirs = 6;

  // unit sphere: non-negatively cross-curved
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  auto rep = classify(cs, spec, CrossClaim::NonNegCross, 2);
  CHECK(rep.pass);
  CHECK(rep.min_cross >= -rep.tolerance);
  CHECK(rep.max_cross > 0.1);

  // A3w: every scanned pair is numerically h-null
  auto repw = classify(cs, spec, CrossClaim::A3w, 2);
  CHECK(repw.pass);
  CHECK(repw.null_pair_count == repw.n_samples);

  // Euclidean: flat zero throughout
  auto r2 = ManifoldDescriptor::euclidean(2);
  auto repe = classify(CostDescriptor::half_square(r2), spec, CrossClaim::NonNegCross, 2);
  CHECK(repe.pass);
  CHECK(std::abs(repe.min_cross) <= 1e-7);
  CHECK(std::abs(repe.max_cross) <= 1e-7);

  // product: A3s fails through split pairs while A3w holds
  auto prod = CostDescriptor::half_square(ManifoldDescriptor::parse("S2xS2"));
  auto reps = classify(prod, spec, CrossClaim::A3s, 2);
  CHECK_FALSE(reps.pass);
  bool found_split_zero = false;
  for (const auto& v : reps.violations)
    if (std::abs(v.cross_value) <= 1e-3 && std::abs(v.h_value) <= 1e-6) found_split_zero = true;
  CHECK(found_split_zero);
  auto repw2 = classify(prod, spec, CrossClaim::A3w, 2);
  CHECK(repw2.pass);

  // the sphere is strictly regular and almost positively cross-curved
  auto repa3s = classify(cs, spec, CrossClaim::A3s, 2);
  CHECK(repa3s.pass);
  auto repap = classify(cs, spec, CrossClaim::AlmostPositive, 2);
  CHECK(repap.pass);
  CHECK(repap.fitted_c0 > 0.01);
}

TEST_CASE("the log cost is strictly regular but not non-negatively cross-curved") {
  SamplerSpec spec;
  spec.seed = 11;
  spec.n_pairs = 10;
  spec.n_dirs = 10;
  auto cl = CostDescriptor::log_euclidean(ManifoldDescriptor::euclidean(2));
  auto a3s = classify(cl, spec, CrossClaim::A3s, 2);
  CHECK(a3s.pass);
  CHECK(a3s.min_cross > kA3sFloor);
  auto nn = classify(cl, spec, CrossClaim::NonNegCross, 2);
  CHECK_FALSE(nn.pass);
  CHECK(nn.min_cross < -0.1);
}

TEST_CASE("A3w null pairs really are h-null") {
  SamplerSpec spec;
  spec.seed = 99;
  spec.n_pairs = 8;
  spec.n_dirs = 8;
  auto cs = CostDescriptor::half_square(ManifoldDescriptor::sphere(2));
  auto rep = classify(cs, spec, CrossClaim::A3w, 2);
  // argmin is one of the scanned null pairs; its recorded h is tiny
  CHECK(std::abs(rep.argmin.h_value) <= 1e-9 * (1.0 + std::abs(rep.max_cross)));
}

TEST_CASE("alternative A3 concavity") {
  Rng rng(83);

  // Euclidean: the scalar is constant |p|^2
  auto r2 = ManifoldDescriptor::euclidean(2);
  auto ce = CostDescriptor::half_square(r2);
  ManifoldPoint x = sample_point(r2, rng);
  Vec p = sample_unit_tangent(x, rng);
  Vec q0 = 0.8 * sample_unit_tangent(x, rng);
  Vec qd = 0.5 * sample_unit_tangent(x, rng);
  ConcavityReport rep = alternative_a3_concavity(ce, x, {x, p}, {x, q0}, {x, qd}, 9);
  CHECK(std::abs(rep.max_second_difference) <= 1e-9);
  for (double v : rep.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

  // sphere, h-null pairing <q*, p> = 0: concave within tolerance
  auto s2 = ManifoldDescriptor::sphere(2);
  auto cs = CostDescriptor::half_square(s2);
  for (int i = 0; i < 10; ++i) {
    ManifoldPoint y = sample_point(s2, rng);
    Vec pp = sample_unit_tangent(y, rng);
    Vec q0s = rng.uniform(0.3, 1.2) * sample_unit_tangent(y, rng);
    Vec orth = sample_unit_tangent(y, rng);
    orth -= orth.dot(pp) * pp;
    if (orth.norm() < 1e-6) continue;
    orth = 0.6 * orth.normalized();
    ConcavityReport r2s = alternative_a3_concavity(cs, y, {y, pp}, {y, q0s}, {y, orth}, 9);
    CHECK(std::abs(r2s.pairing) <= 1e-12);
    CHECK(r2s.max_second_difference <= 1e-6);
  }

  // sphere is non-negatively cross-curved: concavity holds in every
  // direction, not only the null ones
  for (int i = 0; i < 10; ++i) {
    ManifoldPoint y = sample_point(s2, rng);
    Vec pp = sample_unit_tangent(y, rng);
    Vec q0s = rng.uniform(0.3, 1.0) * sample_unit_tangent(y, rng);
    Vec qds = 0.6 * sample_unit_tangent(y, rng);
    ConcavityReport r3 = alternative_a3_concavity(cs, y, {y, pp}, {y, q0s}, {y, qds}, 9);
    CHECK(r3.max_second_difference <= 1e-6);
  }
}
