#include "cclab/sampling.hpp"

#include <cmath>

namespace cclab {

ManifoldPoint sample_point(const ManifoldDescriptor& m, Rng& rng) {
  switch (m.kind) {
    case ManifoldKind::Euclidean: {
      Vec c(m.ambient_dim());
      for (int i = 0; i < c.size(); ++i) c[i] = rng.normal();
      return {m, c};
    }
    case ManifoldKind::Sphere: {
      Vec c(m.ambient_dim());
      double n = 0.0;
      do {
        for (int i = 0; i < c.size(); ++i) c[i] = rng.normal();
        n = c.norm();
      } while (n < 1e-6);
      return {m, c / n};
    }
    case ManifoldKind::ComplexProjective: {
      Vec c(m.ambient_dim());
      double n = 0.0;
      do {
        for (int i = 0; i < c.size(); ++i) c[i] = rng.normal();
        n = c.norm();
      } while (n < 1e-6);
      return {m, detail::gauge_cp<double>(Vec(c / n))};
    }
    case ManifoldKind::Product: {
      std::vector<Vec> parts;
      parts.reserve(m.factors.size());
      for (const auto& f : m.factors) parts.push_back(sample_point(f, rng).coords);
      return {m, join_factors(m, parts)};
    }
  }
  throw DomainError("sample_point: unknown manifold kind");
}

Vec sample_unit_tangent(const ManifoldPoint& x, Rng& rng) {
  const int amb = x.owner.ambient_dim();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec g(amb);
    for (int i = 0; i < amb; ++i) g[i] = rng.normal();
    Vec t = project_tangent(x, g);
    double n = t.norm();
    if (n > 1e-6) return t / n;
  }
  throw DegeneracyError("sample_unit_tangent: projection kept degenerating");
}

PairSample sample_pair(const ManifoldDescriptor& m, Rng& rng, double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("sample_pair: bad distance range");
  ManifoldPoint x = sample_point(m, rng);
  Vec u = sample_unit_tangent(x, rng);
  double rho = rng.uniform(lo, hi);
  ManifoldPoint xbar = exp_map(x, {x, rho * u});
  return {std::move(x), std::move(xbar)};
}

double pair_rho_max(const ManifoldDescriptor& m, double inset) {
  double b = m.geodesic_bound();
  if (!std::isfinite(b)) return 2.5;
  return b - inset;
}

}  // namespace cclab
