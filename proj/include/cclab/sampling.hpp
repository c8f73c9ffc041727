#pragma once

#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

ManifoldPoint sample_point(const ManifoldDescriptor& m, Rng& rng);

// Uniform unit direction in the tangent space at x.
Vec sample_unit_tangent(const ManifoldPoint& x, Rng& rng);

struct PairSample {
  ManifoldPoint x, xbar;
};

// x random, x̄ = exp_x(ρ û) with ρ uniform in [lo, hi] and û a random unit
// direction. hi must respect pair_rho_max so every factor keeps its margin.
PairSample sample_pair(const ManifoldDescriptor& m, Rng& rng, double lo, double hi);

// Largest pair distance the samplers hand out: the smallest sphere-like
// factor bound minus `inset` (a flat default when no factor is bounded).
double pair_rho_max(const ManifoldDescriptor& m, double inset);

}  // namespace cclab
