#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cclab/types.hpp"

namespace cclab {

enum class ManifoldKind { Sphere, Euclidean, ComplexProjective, Product };

// Model manifolds: round unit spheres S^n, Euclidean R^l, CP^m carrying the
// quotient metric of the unit sphere (sectional curvature in [1,4]), and
// finite products. Points are stored in the ambient embedding; CP^m points
// are gauge-fixed unit vectors of C^{m+1} stored as interleaved real pairs.
struct ManifoldDescriptor {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int dim = 1;  // n for S^n, l for R^l, m for CP^m; unused for products
  std::vector<ManifoldDescriptor> factors;

  static ManifoldDescriptor sphere(int n);
  static ManifoldDescriptor euclidean(int l);
  static ManifoldDescriptor complex_projective(int m);
  static ManifoldDescriptor product(std::vector<ManifoldDescriptor> fs);

  // Config strings: "S2", "R3", "CP1", and products like "S2xS2", "S3xS5xR2".
  static ManifoldDescriptor parse(const std::string& name);
  std::string name() const;

  int ambient_dim() const;
  int intrinsic_dim() const;

  // Sup of |v| for which exp_x(v) stays inside the injectivity radius
  // (before the safety margin). Infinite for Euclidean factors.
  double geodesic_bound() const;

  bool is_product() const { return kind == ManifoldKind::Product; }

  // Ambient coordinate ranges of the factors (the whole range for
  // non-products); used to split vectors of product manifolds.
  std::vector<std::pair<int, int>> factor_spans() const;

  bool operator==(const ManifoldDescriptor& o) const;
  bool operator!=(const ManifoldDescriptor& o) const { return !(*this == o); }
};

struct ManifoldPoint {
  ManifoldDescriptor owner;
  Vec coords;
};

struct TangentVector {
  ManifoldPoint base;
  Vec coords;
};

// Covectors are identified with tangent vectors through the metric; the
// separate type records which role a vector is playing.
struct CotangentVector {
  ManifoldPoint base;
  Vec coords;
};

inline TangentVector as_tangent(const CotangentVector& c) { return {c.base, c.coords}; }
inline CotangentVector as_cotangent(const TangentVector& t) { return {t.base, t.coords}; }

namespace detail {

template <class T>
using V = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Multiplication by i on interleaved complex coordinates.
template <class T>
V<T> times_i(const V<T>& z) {
  V<T> out(z.size());
  for (int k = 0; k + 1 < z.size(); k += 2) {
    out[k] = -z[k + 1];
    out[k + 1] = z[k];
  }
  return out;
}

// Hermitian inner product of interleaved complex vectors: sum a_j conj(b_j).
template <class T>
std::pair<T, T> hermitian(const V<T>& a, const V<T>& b) {
  T re = 0, im = 0;
  for (int k = 0; k + 1 < a.size(); k += 2) {
    re += a[k] * b[k] + a[k + 1] * b[k + 1];
    im += a[k + 1] * b[k] - a[k] * b[k + 1];
  }
  return {re, im};
}

// Rotate every complex entry by the unit phase (c, s).
template <class T>
V<T> phase_rotate(const V<T>& z, T c, T s) {
  V<T> out(z.size());
  for (int k = 0; k + 1 < z.size(); k += 2) {
    out[k] = c * z[k] - s * z[k + 1];
    out[k + 1] = s * z[k] + c * z[k + 1];
  }
  return out;
}

template <class T>
T clamp1(T v) {
  return v > T(1) ? T(1) : (v < T(-1) ? T(-1) : v);
}

// Gauge fix a unit vector of C^{m+1}: rotate so the first coordinate of
// largest modulus is real and nonnegative. Exact identity on already
// gauged input (the zero phase is detected and skipped).
template <class T>
V<T> gauge_cp(const V<T>& z) {
  int best = 0;
  T best_mod = -1;
  for (int k = 0; k + 1 < z.size(); k += 2) {
    T mod = z[k] * z[k] + z[k + 1] * z[k + 1];
    if (mod > best_mod) {
      best_mod = mod;
      best = k;
    }
  }
  V<T> out = z;
  if (z[best + 1] != T(0) || z[best] < T(0)) {
    T r = std::sqrt(best_mod);
    // multiply by conj(z_best)/|z_best|
    out = phase_rotate(z, z[best] / r, -z[best + 1] / r);
    out[best] = r;
    out[best + 1] = T(0);
  }
  T n2 = out.squaredNorm();
  if (std::abs(n2 - T(1)) > T(1e-13)) out /= std::sqrt(n2);
  return out;
}

template <class T>
V<T> exp_sphere(const V<T>& x, const V<T>& v) {
  T n = v.norm();
  if (n < T(1e-300)) return x;
  return std::cos(n) * x + (std::sin(n) / n) * v;
}

template <class T>
T dist_sphere(const V<T>& x, const V<T>& y) {
  return std::acos(clamp1<T>(x.dot(y)));
}

template <class T>
V<T> log_sphere(const V<T>& x, const V<T>& y) {
  T c = clamp1<T>(x.dot(y));
  T d = std::acos(c);
  V<T> u = y - c * x;
  T un = u.norm();
  // near-coincident points: u already equals the log to O(d^3)
  if (un < T(1e-14)) return u;
  return (d / un) * u;
}

template <class T>
T dist_cp(const V<T>& z, const V<T>& w) {
  auto [re, im] = hermitian(z, w);
  T mod = std::sqrt(re * re + im * im);
  return std::acos(clamp1<T>(mod));
}

// Log on CP^m: rotate a fiber representative of w so its Hermitian inner
// product with z is real positive, then take the sphere log. The result is
// horizontal at z and realizes the base distance.
template <class T>
V<T> log_cp(const V<T>& z, const V<T>& w) {
  auto [re, im] = hermitian(w, z);  // = <w, z>_C, so w e^{-i arg} aligns with z
  T mod = std::sqrt(re * re + im * im);
  V<T> aligned = mod < T(1e-300) ? w : phase_rotate(w, re / mod, -im / mod);
  return log_sphere(z, aligned);
}

template <class T>
V<T> exp_cp(const V<T>& z, const V<T>& v) {
  return gauge_cp(exp_sphere(z, v));
}

template <class T>
T dist_core(const ManifoldDescriptor& m, const V<T>& x, const V<T>& y) {
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return dist_sphere(x, y);
    case ManifoldKind::Euclidean:
      return (x - y).norm();
    case ManifoldKind::ComplexProjective:
      return dist_cp(x, y);
    case ManifoldKind::Product: {
      T sum = 0;
      const auto spans = m.factor_spans();
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        auto [off, len] = spans[i];
        T d = dist_core(m.factors[i], V<T>(x.segment(off, len)), V<T>(y.segment(off, len)));
        sum += d * d;
      }
      return std::sqrt(sum);
    }
  }
  return 0;
}

template <class T>
V<T> exp_core(const ManifoldDescriptor& m, const V<T>& x, const V<T>& v) {
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return exp_sphere(x, v);
    case ManifoldKind::Euclidean:
      return x + v;
    case ManifoldKind::ComplexProjective:
      return exp_cp(x, v);
    case ManifoldKind::Product: {
      V<T> out(x.size());
      const auto spans = m.factor_spans();
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        auto [off, len] = spans[i];
        out.segment(off, len) =
            exp_core(m.factors[i], V<T>(x.segment(off, len)), V<T>(v.segment(off, len)));
      }
      return out;
    }
  }
  return x;
}

template <class T>
V<T> log_core(const ManifoldDescriptor& m, const V<T>& x, const V<T>& y) {
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return log_sphere(x, y);
    case ManifoldKind::Euclidean:
      return y - x;
    case ManifoldKind::ComplexProjective:
      return log_cp(x, y);
    case ManifoldKind::Product: {
      V<T> out(x.size());
      const auto spans = m.factor_spans();
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        auto [off, len] = spans[i];
        out.segment(off, len) =
            log_core(m.factors[i], V<T>(x.segment(off, len)), V<T>(y.segment(off, len)));
      }
      return out;
    }
  }
  return y - x;
}

}  // namespace detail

// --- validation -----------------------------------------------------------

// Throws DomainError unless coords satisfy the owner's point constraint.
void validate_point(const ManifoldPoint& p);
void validate_tangent(const TangentVector& v);
ManifoldPoint make_point(const ManifoldDescriptor& m, Vec coords);

// --- core operations -------------------------------------------------------

double inner(const ManifoldPoint& x, const TangentVector& u, const TangentVector& v);
double dist(const ManifoldPoint& x, const ManifoldPoint& y);

// exp_x(v); refuses |v| within the cut-locus margin of the geodesic bound
// (checked per factor on products).
ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v);

// Inverse of exp inside the margin; |log_map(x,y)| = dist(x,y).
TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y);

// True when every sphere-like factor pair keeps `extra` of room beyond the
// cut-locus margin.
bool within_margin(const ManifoldPoint& x, const ManifoldPoint& y, double extra = 0.0);
void require_margin(const ManifoldPoint& x, const ManifoldPoint& y, double extra = 0.0);

// True when exp_map(x, v) (and every scaling tv, t in [0,1]) is admissible
// with `extra` room, factor-wise.
bool tangent_within_bound(const TangentVector& v, double extra = 0.0);

// Orthogonal projection of an ambient vector onto the tangent space at x.
Vec project_tangent(const ManifoldPoint& x, const Vec& ambient);

// Deterministic orthonormal tangent frame: Gram-Schmidt over the ambient
// basis projected to the tangent space, factor frames concatenated on
// products. Size = intrinsic_dim.
std::vector<Vec> tangent_frame(const ManifoldPoint& x);

// Factor slicing helpers for product manifolds.
ManifoldPoint factor_point(const ManifoldPoint& x, int factor);
Vec factor_slice(const ManifoldDescriptor& m, const Vec& v, int factor);
Vec join_factors(const ManifoldDescriptor& m, const std::vector<Vec>& parts);

}  // namespace cclab
