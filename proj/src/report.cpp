#include "cclab/report.hpp"

#include <cstdio>
#include <fstream>

namespace cclab {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["claim"] = r.claim_id;
  j["statement"] = r.statement;
  j["pass"] = r.pass;
  j["polarity"] = r.violation_expected ? "violation-expected" : "holds";
  j["tolerance"] = r.tolerance;
  j["n_samples"] = r.n_samples;
  j["elapsed_ms"] = r.elapsed_ms;
  j["stats"] = r.stats;
  if (!r.worst.empty()) j["worst"] = r.worst;
  return j;
}

Json to_json(const std::vector<VerificationReport>& rs) {
  Json arr = Json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

Json point_json(const ManifoldPoint& p) {
  Json j;
  j["manifold"] = p.owner.name();
  j["coords"] = std::vector<double>(p.coords.data(), p.coords.data() + p.coords.size());
  return j;
}

Json tangent_json(const TangentVector& v) {
  Json j;
  j["coords"] = std::vector<double>(v.coords.data(), v.coords.data() + v.coords.size());
  return j;
}

Json cross_sample_json(const CrossSample& s) {
  Json j;
  j["x"] = point_json(s.x);
  j["xbar"] = point_json(s.xbar);
  j["p"] = tangent_json(s.p);
  j["pbar"] = tangent_json(s.pbar);
  j["h"] = s.h_value;
  j["cross"] = s.cross_value;
  j["fd_step"] = s.fd_step;
  j["richardson_levels"] = s.richardson_levels;
  j["residual_estimate"] = s.residual_estimate;
  return j;
}

void CsvWriter::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw DomainError("CsvWriter: row width mismatch");
  rows_.push_back(row);
}

std::string CsvWriter::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ",";
    out += header_[i];
  }
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_g17(row[i]);
    }
    out += "\n";
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write CSV to '" + path + "'");
  f << str();
}

}  // namespace cclab
