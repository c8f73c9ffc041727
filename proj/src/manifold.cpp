#include "cclab/manifold.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace cclab {

ManifoldDescriptor ManifoldDescriptor::sphere(int n) {
  if (n < 1) throw DomainError("sphere dimension must be >= 1");
  return {ManifoldKind::Sphere, n, {}};
}

ManifoldDescriptor ManifoldDescriptor::euclidean(int l) {
  if (l < 1) throw DomainError("euclidean dimension must be >= 1");
  return {ManifoldKind::Euclidean, l, {}};
}

ManifoldDescriptor ManifoldDescriptor::complex_projective(int m) {
  if (m < 1) throw DomainError("CP dimension must be >= 1");
  return {ManifoldKind::ComplexProjective, m, {}};
}

ManifoldDescriptor ManifoldDescriptor::product(std::vector<ManifoldDescriptor> fs) {
  if (fs.size() < 2) throw DomainError("product needs at least two factors");
  for (const auto& f : fs)
    if (f.is_product()) throw DomainError("nested products are flattened at parse time");
  ManifoldDescriptor m;
  m.kind = ManifoldKind::Product;
  m.dim = 0;
  m.factors = std::move(fs);
  return m;
}

ManifoldDescriptor ManifoldDescriptor::parse(const std::string& name) {
  std::vector<ManifoldDescriptor> factors;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t next = name.find('x', pos);
    std::string tok = name.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::string head;
    std::size_t i = 0;
    while (i < tok.size() && std::isalpha(static_cast<unsigned char>(tok[i]))) head += tok[i++];
    std::string digits = tok.substr(i);
    if (head.empty() || digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw DomainError("unknown manifold token '" + tok + "' in '" + name + "'");
    int n = std::stoi(digits);
    if (head == "S")
      factors.push_back(sphere(n));
    else if (head == "R")
      factors.push_back(euclidean(n));
    else if (head == "CP")
      factors.push_back(complex_projective(n));
    else
      throw DomainError("unknown manifold token '" + tok + "' in '" + name + "'");
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (factors.empty()) throw DomainError("empty manifold string");
  if (factors.size() == 1) return factors.front();
  return product(std::move(factors));
}

std::string ManifoldDescriptor::name() const {
  switch (kind) {
    case ManifoldKind::Sphere:
      return "S" + std::to_string(dim);
    case ManifoldKind::Euclidean:
      return "R" + std::to_string(dim);
    case ManifoldKind::ComplexProjective:
      return "CP" + std::to_string(dim);
    case ManifoldKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "x";
        out += factors[i].name();
      }
      return out;
    }
  }
  return "?";
}

int ManifoldDescriptor::ambient_dim() const {
  switch (kind) {
    case ManifoldKind::Sphere:
      return dim + 1;
    case ManifoldKind::Euclidean:
      return dim;
    case ManifoldKind::ComplexProjective:
      return 2 * (dim + 1);
    case ManifoldKind::Product: {
      int s = 0;
      for (const auto& f : factors) s += f.ambient_dim();
      return s;
    }
  }
  return 0;
}

int ManifoldDescriptor::intrinsic_dim() const {
  switch (kind) {
    case ManifoldKind::Sphere:
      return dim;
    case ManifoldKind::Euclidean:
      return dim;
    case ManifoldKind::ComplexProjective:
      return 2 * dim;
    case ManifoldKind::Product: {
      int s = 0;
      for (const auto& f : factors) s += f.intrinsic_dim();
      return s;
    }
  }
  return 0;
}

double ManifoldDescriptor::geodesic_bound() const {
  switch (kind) {
    case ManifoldKind::Sphere:
      return M_PI;
    case ManifoldKind::Euclidean:
      return std::numeric_limits<double>::infinity();
    case ManifoldKind::ComplexProjective:
      return M_PI / 2.0;
    case ManifoldKind::Product: {
      double b = std::numeric_limits<double>::infinity();
      for (const auto& f : factors) b = std::min(b, f.geodesic_bound());
      return b;
    }
  }
  return 0.0;
}

std::vector<std::pair<int, int>> ManifoldDescriptor::factor_spans() const {
  if (!is_product()) return {{0, ambient_dim()}};
  std::vector<std::pair<int, int>> spans;
  int off = 0;
  for (const auto& f : factors) {
    int len = f.ambient_dim();
    spans.emplace_back(off, len);
    off += len;
  }
  return spans;
}

bool ManifoldDescriptor::operator==(const ManifoldDescriptor& o) const {
  if (kind != o.kind || dim != o.dim || factors.size() != o.factors.size()) return false;
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (!(factors[i] == o.factors[i])) return false;
  return true;
}

// --- validation -------------------------------------------------------------

void validate_point(const ManifoldPoint& p) {
  const auto& m = p.owner;
  if (p.coords.size() != m.ambient_dim())
    throw DomainError("point has wrong ambient dimension for " + m.name());
  switch (m.kind) {
    case ManifoldKind::Sphere:
      if (std::abs(p.coords.norm() - 1.0) > 1e-12)
        throw DomainError("sphere point is not a unit vector");
      break;
    case ManifoldKind::Euclidean:
      break;
    case ManifoldKind::ComplexProjective: {
      if (std::abs(p.coords.norm() - 1.0) > 1e-12)
        throw DomainError("CP point representative is not a unit vector");
      Vec g = detail::gauge_cp<double>(p.coords);
      if ((g - p.coords).norm() > 1e-12) throw DomainError("CP point is not gauge-fixed");
      break;
    }
    case ManifoldKind::Product:
      for (std::size_t i = 0; i < m.factors.size(); ++i) validate_point(factor_point(p, static_cast<int>(i)));
      break;
  }
}

void validate_tangent(const TangentVector& v) {
  const auto& m = v.base.owner;
  if (v.coords.size() != m.ambient_dim())
    throw DomainError("tangent vector has wrong ambient dimension");
  switch (m.kind) {
    case ManifoldKind::Sphere:
      if (std::abs(v.coords.dot(v.base.coords)) > 1e-10 * (1.0 + v.coords.norm()))
        throw DomainError("vector is not tangent to the sphere at its base point");
      break;
    case ManifoldKind::Euclidean:
      break;
    case ManifoldKind::ComplexProjective: {
      double a = std::abs(v.coords.dot(v.base.coords));
      double b = std::abs(v.coords.dot(detail::times_i<double>(v.base.coords)));
      if (std::max(a, b) > 1e-10 * (1.0 + v.coords.norm()))
        throw DomainError("vector is not horizontal at its base point");
      break;
    }
    case ManifoldKind::Product: {
      const auto spans = m.factor_spans();
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        auto [off, len] = spans[i];
        validate_tangent({factor_point(v.base, static_cast<int>(i)), v.coords.segment(off, len)});
      }
      break;
    }
  }
}

ManifoldPoint make_point(const ManifoldDescriptor& m, Vec coords) {
  ManifoldPoint p{m, std::move(coords)};
  validate_point(p);
  return p;
}

// --- operations --------------------------------------------------------------

double inner(const ManifoldPoint& x, const TangentVector& u, const TangentVector& v) {
  if (u.base.owner != x.owner || v.base.owner != x.owner ||
      (u.base.coords - x.coords).norm() > 1e-9 || (v.base.coords - x.coords).norm() > 1e-9)
    throw DomainError("inner product requires both vectors at the same base point");
  return u.coords.dot(v.coords);
}

double dist(const ManifoldPoint& x, const ManifoldPoint& y) {
  if (x.owner != y.owner) throw DomainError("dist requires points of the same manifold");
  return detail::dist_core<double>(x.owner, x.coords, y.coords);
}

bool tangent_within_bound(const TangentVector& v, double extra) {
  const auto& m = v.base.owner;
  if (!m.is_product()) {
    double b = m.geodesic_bound();
    return !(std::isfinite(b) && v.coords.norm() >= b - kCutLocusMargin - extra);
  }
  const auto spans = m.factor_spans();
  for (std::size_t i = 0; i < m.factors.size(); ++i) {
    auto [off, len] = spans[i];
    TangentVector part{factor_point(v.base, static_cast<int>(i)), v.coords.segment(off, len)};
    if (!tangent_within_bound(part, extra)) return false;
  }
  return true;
}

ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) {
  if (v.base.owner != x.owner) throw DomainError("exp_map: vector not based on the given manifold");
  if (!tangent_within_bound(v))
    throw CutLocusProximity("exp_map: |v| reaches the cut-locus margin");
  return {x.owner, detail::exp_core<double>(x.owner, x.coords, v.coords)};
}

TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) {
  if (x.owner != y.owner) throw DomainError("log_map requires points of the same manifold");
  require_margin(x, y);
  return {x, detail::log_core<double>(x.owner, x.coords, y.coords)};
}

bool within_margin(const ManifoldPoint& x, const ManifoldPoint& y, double extra) {
  const auto& m = x.owner;
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return true;
    case ManifoldKind::Sphere:
    case ManifoldKind::ComplexProjective:
      return dist(x, y) < m.geodesic_bound() - kCutLocusMargin - extra;
    case ManifoldKind::Product:
      for (std::size_t i = 0; i < m.factors.size(); ++i)
        if (!within_margin(factor_point(x, static_cast<int>(i)), factor_point(y, static_cast<int>(i)), extra))
          return false;
      return true;
  }
  return true;
}

void require_margin(const ManifoldPoint& x, const ManifoldPoint& y, double extra) {
  if (!within_margin(x, y, extra))
    throw CutLocusProximity("point pair is inside the cut-locus margin on " + x.owner.name());
}

Vec project_tangent(const ManifoldPoint& x, const Vec& ambient) {
  const auto& m = x.owner;
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return ambient;
    case ManifoldKind::Sphere:
      return ambient - ambient.dot(x.coords) * x.coords;
    case ManifoldKind::ComplexProjective: {
      Vec iz = detail::times_i<double>(x.coords);
      return ambient - ambient.dot(x.coords) * x.coords - ambient.dot(iz) * iz;
    }
    case ManifoldKind::Product: {
      Vec out(ambient.size());
      const auto spans = m.factor_spans();
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        auto [off, len] = spans[i];
        out.segment(off, len) =
            project_tangent(factor_point(x, static_cast<int>(i)), Vec(ambient.segment(off, len)));
      }
      return out;
    }
  }
  return ambient;
}

std::vector<Vec> tangent_frame(const ManifoldPoint& x) {
  const auto& m = x.owner;
  if (m.is_product()) {
    std::vector<Vec> frame;
    const auto spans = m.factor_spans();
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      auto sub = tangent_frame(factor_point(x, static_cast<int>(i)));
      for (const auto& v : sub) {
        Vec full = Vec::Zero(m.ambient_dim());
        full.segment(spans[i].first, spans[i].second) = v;
        frame.push_back(std::move(full));
      }
    }
    return frame;
  }
  const int want = m.intrinsic_dim();
  std::vector<Vec> frame;
  for (int i = 0; i < m.ambient_dim() && static_cast<int>(frame.size()) < want; ++i) {
    Vec cand = project_tangent(x, Vec(Vec::Unit(m.ambient_dim(), i)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& f : frame) cand -= cand.dot(f) * f;
    double n = cand.norm();
    if (n > 1e-8) frame.push_back(cand / n);
  }
  if (static_cast<int>(frame.size()) != want)
    throw DegeneracyError("tangent frame construction degenerated on " + m.name());
  return frame;
}

ManifoldPoint factor_point(const ManifoldPoint& x, int factor) {
  const auto& m = x.owner;
  if (!m.is_product()) {
    if (factor != 0) throw DomainError("factor index out of range");
    return x;
  }
  auto [off, len] = m.factor_spans()[static_cast<std::size_t>(factor)];
  return {m.factors[static_cast<std::size_t>(factor)], x.coords.segment(off, len)};
}

Vec factor_slice(const ManifoldDescriptor& m, const Vec& v, int factor) {
  auto [off, len] = m.factor_spans()[static_cast<std::size_t>(factor)];
  return v.segment(off, len);
}

Vec join_factors(const ManifoldDescriptor& m, const std::vector<Vec>& parts) {
  Vec out(m.ambient_dim());
  const auto spans = m.factor_spans();
  if (parts.size() != spans.size()) throw DomainError("join_factors: wrong part count");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != spans[i].second) throw DomainError("join_factors: wrong part size");
    out.segment(spans[i].first, spans[i].second) = parts[i];
  }
  return out;
}

}  // namespace cclab
