#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cclab/crosscurv.hpp"
#include "cclab/manifold.hpp"
#include "cclab/types.hpp"

namespace cclab {

using Json = nlohmann::json;

// One verified claim. `statement` names the mathematical fact being checked
// so reports are self-describing; `violation_expected` marks counterexample
// suites where success means a violation was exhibited.
struct VerificationReport {
  std::string claim_id;
  std::string statement;
  bool pass = false;
  bool violation_expected = false;
  double tolerance = 0.0;
  int n_samples = 0;
  double elapsed_ms = 0.0;
  Json stats = Json::object();
  Json worst = Json::object();
};

Json to_json(const VerificationReport& r);
Json to_json(const std::vector<VerificationReport>& rs);

Json point_json(const ManifoldPoint& p);
Json tangent_json(const TangentVector& v);
Json cross_sample_json(const CrossSample& s);

// 17-significant-digit float serialization shared by CSV and JSON stats.
std::string format_g17(double v);

// Deterministic CSV: fixed header, rows in insertion order, g17 floats.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& row);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace cclab
