#include "ordexp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ordexp/bank.hpp"
#include "ordexp/error.hpp"

namespace ordexp {

namespace {

using nlohmann::json;

const char* target_name(Target t) { return t == Target::sigma1 ? "sigma1" : "sigma2"; }

Target parse_target(const std::string& s) {
  if (s == "sigma1") return Target::sigma1;
  if (s == "sigma2") return Target::sigma2;
  throw ValidationError("unknown target '" + s + "'");
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> opt_round(std::optional<double> v, int precision) {
  if (!v) return v;
  return round_significant(*v, precision);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("row " + std::to_string(line) + ": '" + s + "' is not a number");
}

}  // namespace

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

double round_significant(double value, int precision) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", std::max(precision, 1) - 1, value);
  return std::strtod(buf, nullptr);
}

EstimateDocument build_estimate_document(const SufficientStats& stats, double k,
                                         const std::vector<LossSpec>& losses) {
  EstimateDocument doc;
  doc.k = k;
  doc.stats = stats;
  for (const LossSpec& loss : losses) {
    const EstimatorBank bank(stats.p1, stats.p2, EstimationConfig{k, loss});
    for (Target target : {Target::sigma1, Target::sigma2}) {
      EstimateTable table{target, loss.name(), {}};
      for (EstimatorId id : table_estimators(target)) {
        EstimateRow row;
        row.estimator = id;
        try {
          const EstimateReport r = bank.evaluate(id, stats);
          row.multiplier = r.multiplier;
          row.value = r.value;
          row.truncation_active = r.truncation_active;
        } catch (const DomainError& e) {
          row.diagnostic = e.what();
        }
        table.rows.push_back(std::move(row));
      }
      doc.tables.push_back(std::move(table));
    }
  }
  return doc;
}

EstimateDocument rounded(const EstimateDocument& doc, int precision) {
  EstimateDocument out = doc;
  out.k = round_significant(doc.k, precision);
  out.stats.x1 = round_significant(doc.stats.x1, precision);
  out.stats.x2 = round_significant(doc.stats.x2, precision);
  out.stats.s1 = round_significant(doc.stats.s1, precision);
  out.stats.s2 = round_significant(doc.stats.s2, precision);
  for (auto& table : out.tables) {
    for (auto& row : table.rows) {
      row.multiplier = opt_round(row.multiplier, precision);
      row.value = opt_round(row.value, precision);
    }
  }
  return out;
}

void write_estimates_text(std::ostream& out, const EstimateDocument& doc, int precision) {
  const int width = std::max(12, precision + 8);
  for (Target target : {Target::sigma1, Target::sigma2}) {
    out << (target == Target::sigma1 ? "sigma1" : "sigma2") << "^k estimates (k = "
        << format_number(doc.k, precision) << ")\n";
    std::vector<const EstimateTable*> tables;
    for (const auto& t : doc.tables)
      if (t.target == target) tables.push_back(&t);
    if (tables.empty()) continue;
    out << std::left << std::setw(14) << "loss";
    for (const auto& row : tables.front()->rows) out << std::right << std::setw(width) << to_string(row.estimator);
    out << '\n';
    std::vector<std::string> notes;
    for (const EstimateTable* t : tables) {
      out << std::left << std::setw(14) << t->loss;
      for (const auto& row : t->rows) {
        std::string cell = row.value ? format_number(*row.value, precision) : "n/a";
        if (row.truncation_active) cell += '*';
        out << std::right << std::setw(width) << cell;
        if (!row.diagnostic.empty()) {
          notes.push_back(t->loss + " " + std::string(to_string(row.estimator)) + ": " + row.diagnostic);
        }
      }
      out << '\n';
    }
    out << "  * clamp active\n";
    for (const auto& note : notes) out << "  n/a " << note << '\n';
    out << '\n';
  }
}

void write_estimates_csv(std::ostream& out, const EstimateDocument& doc, int precision) {
  out << "target,loss,k,estimator,multiplier,value,truncation_active,diagnostic\n";
  for (const auto& table : doc.tables) {
    for (const auto& row : table.rows) {
      out << target_name(table.target) << ',' << csv_quote(table.loss) << ','
          << format_number(doc.k, precision) << ',' << to_string(row.estimator) << ','
          << (row.multiplier ? format_number(*row.multiplier, precision) : "") << ','
          << (row.value ? format_number(*row.value, precision) : "") << ','
          << (row.truncation_active ? "true" : "false") << ',' << csv_quote(row.diagnostic) << '\n';
    }
  }
}

std::string estimates_to_json(const EstimateDocument& doc_in, int precision) {
  const EstimateDocument doc = rounded(doc_in, precision);
  json j;
  j["k"] = doc.k;
  j["stats"] = {{"x1", doc.stats.x1}, {"x2", doc.stats.x2}, {"s1", doc.stats.s1},
                {"s2", doc.stats.s2}, {"p1", doc.stats.p1}, {"p2", doc.stats.p2}};
  j["tables"] = json::array();
  for (const auto& table : doc.tables) {
    json rows = json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"estimator", std::string(to_string(row.estimator))},
                      {"multiplier", row.multiplier ? json(*row.multiplier) : json(nullptr)},
                      {"value", row.value ? json(*row.value) : json(nullptr)},
                      {"truncation_active", row.truncation_active},
                      {"diagnostic", row.diagnostic}});
    }
    j["tables"].push_back({{"target", target_name(table.target)}, {"loss", table.loss}, {"rows", rows}});
  }
  return j.dump(2);
}

EstimateDocument estimates_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    EstimateDocument doc;
    doc.k = j.at("k").get<double>();
    const json& s = j.at("stats");
    doc.stats = {s.at("x1").get<double>(), s.at("x2").get<double>(), s.at("s1").get<double>(),
                 s.at("s2").get<double>(), s.at("p1").get<int>(),    s.at("p2").get<int>()};
    for (const json& t : j.at("tables")) {
      EstimateTable table;
      table.target = parse_target(t.at("target").get<std::string>());
      table.loss = t.at("loss").get<std::string>();
      for (const json& r : t.at("rows")) {
        EstimateRow row;
        row.estimator = parse_estimator(r.at("estimator").get<std::string>());
        if (!r.at("multiplier").is_null()) row.multiplier = r.at("multiplier").get<double>();
        if (!r.at("value").is_null()) row.value = r.at("value").get<double>();
        row.truncation_active = r.at("truncation_active").get<bool>();
        row.diagnostic = r.at("diagnostic").get<std::string>();
        table.rows.push_back(std::move(row));
      }
      doc.tables.push_back(std::move(table));
    }
    return doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("estimate JSON does not match the schema: ") + e.what());
  }
}

void write_risk_csv(std::ostream& out, const std::vector<mc::RiskRow>& rows, int precision) {
  out << "eta,p1,p2,mu1,mu2,k,loss,estimator,risk,rri,mc_se,reps,seed\n";
  for (const auto& r : rows) {
    out << format_number(r.eta, precision) << ',' << r.p1 << ',' << r.p2 << ','
        << format_number(r.mu1, precision) << ',' << format_number(r.mu2, precision) << ','
        << format_number(r.k, precision) << ',' << csv_quote(r.loss) << ',' << to_string(r.estimator)
        << ',' << format_number(r.risk, precision) << ',' << format_number(r.rri, precision) << ','
        << format_number(r.mc_se, precision) << ',' << r.reps << ',' << r.seed << '\n';
  }
}

std::vector<mc::RiskRow> read_risk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != 13 || line.rfind("eta,", 0) != 0) {
    throw ValidationError("risk CSV: missing or malformed header");
  }
  std::vector<mc::RiskRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) {
      throw ValidationError("row " + std::to_string(number) + ": expected 13 fields, got " +
                            std::to_string(f.size()));
    }
    mc::RiskRow r;
    r.eta = to_double(f[0], number);
    r.p1 = static_cast<int>(to_double(f[1], number));
    r.p2 = static_cast<int>(to_double(f[2], number));
    r.mu1 = to_double(f[3], number);
    r.mu2 = to_double(f[4], number);
    r.k = to_double(f[5], number);
    r.loss = f[6];
    r.estimator = parse_estimator(f[7]);
    r.risk = to_double(f[8], number);
    r.rri = to_double(f[9], number);
    r.mc_se = to_double(f[10], number);
    r.reps = static_cast<long>(to_double(f[11], number));
    r.seed = std::stoull(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_gpc_csv(std::ostream& out, const std::vector<mc::GpcPoint>& points, int precision) {
  out << "eta,probability,se\n";
  for (const auto& p : points) {
    out << format_number(p.eta, precision) << ',' << format_number(p.probability, precision) << ','
        << format_number(p.se, precision) << '\n';
  }
}

}  // namespace ordexp
