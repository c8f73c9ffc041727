#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Safety margin (radians) kept between any evaluation point and the cut
// locus of a sphere-like factor. All samplers and domain checks honor it.
inline constexpr double kCutLocusMargin = 0.05;

// Base class for all failures raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A point pair, tangent vector, or covector path came too close to the cut
// locus (or left the domain of the cost exponential).
struct CutLocusProximity : Error {
  using Error::Error;
};

// Log-type cost evaluated at (or too near) its singular diagonal.
struct SingularCost : Error {
  using Error::Error;
};

// A linear system that the math guarantees invertible was numerically
// singular (A2 failure at the sample).
struct DegeneracyError : Error {
  using Error::Error;
};

// An iterative solver exhausted its iteration budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// No sign choice makes the requested combined pair h-null.
struct NotNullable : Error {
  using Error::Error;
};

// Mismatched manifolds, malformed descriptors, bad configuration strings.
struct DomainError : Error {
  using Error::Error;
};

inline VecL to_ld(const Vec& v) { return v.cast<long double>(); }
inline Vec to_d(const VecL& v) { return v.cast<double>(); }

// Deterministic random stream. splitmix64 core; identical output on every
// platform, unlike the unspecified std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  // Standard normal via Box-Muller (deterministic).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Independent substream; used to give each sample index its own stream so
  // parallel sweeps are order-independent.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    mix.next_u64();
    return mix;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cclab
