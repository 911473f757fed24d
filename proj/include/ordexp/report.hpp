#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordexp/estimator.hpp"
#include "ordexp/mcrisk.hpp"
#include "ordexp/model.hpp"

namespace ordexp {

constexpr int kDefaultPrecision = 6;

/// `value` in %g style with `precision` significant digits.
std::string format_number(double value, int precision = kDefaultPrecision);

/// `value` rounded to `precision` significant digits.
double round_significant(double value, int precision);

struct EstimateRow {
  EstimatorId estimator = EstimatorId::delta01;
  std::optional<double> multiplier;
  std::optional<double> value;
  bool truncation_active = false;
  std::string diagnostic;  // set when the estimator is unavailable for this loss/k

  bool operator==(const EstimateRow&) const = default;
};

struct EstimateTable {
  Target target = Target::sigma1;
  std::string loss;
  std::vector<EstimateRow> rows;

  bool operator==(const EstimateTable&) const = default;
};

struct EstimateDocument {
  double k = 2.0;
  SufficientStats stats;
  std::vector<EstimateTable> tables;  // per loss: σ₁ᵏ table, then σ₂ᵏ table

  bool operator==(const EstimateDocument&) const = default;
};

/// Both target tables for each loss. Estimators whose constants are
/// unavailable for a loss produce a row carrying the diagnostic.
EstimateDocument build_estimate_document(const SufficientStats& stats, double k,
                                         const std::vector<LossSpec>& losses);

/// Copy with every number rounded to `precision` significant digits.
EstimateDocument rounded(const EstimateDocument& doc, int precision);

void write_estimates_text(std::ostream& out, const EstimateDocument& doc,
                          int precision = kDefaultPrecision);
void write_estimates_csv(std::ostream& out, const EstimateDocument& doc,
                         int precision = kDefaultPrecision);

/// Schema:
///   {"k": num, "stats": {"x1","x2","s1","s2": num, "p1","p2": int},
///    "tables": [{"target": "sigma1"|"sigma2", "loss": str,
///                "rows": [{"estimator": str, "multiplier": num|null,
///                          "value": num|null, "truncation_active": bool,
///                          "diagnostic": str}]}]}
std::string estimates_to_json(const EstimateDocument& doc, int precision = kDefaultPrecision);

/// Inverse of estimates_to_json; throws ValidationError on schema violations.
EstimateDocument estimates_from_json(const std::string& text);

void write_risk_csv(std::ostream& out, const std::vector<mc::RiskRow>& rows,
                    int precision = kDefaultPrecision);

/// Reads a file produced by write_risk_csv.
std::vector<mc::RiskRow> read_risk_csv(std::istream& in);

void write_gpc_csv(std::ostream& out, const std::vector<mc::GpcPoint>& points,
                   int precision = kDefaultPrecision);

}  // namespace ordexp
