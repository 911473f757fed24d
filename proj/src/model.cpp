#include "ordexp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "ordexp/error.hpp"

namespace ordexp {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_number(const std::string& text, int row, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw ValidationError("row " + std::to_string(row) + ": invalid " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

void EstimationConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ValidationError("power k must be a finite positive number (negative k is not supported)");
  }
}

std::pair<double, double> summarize_population(std::span<const double> sample, int population) {
  const std::string label = "population " + std::to_string(population);
  if (sample.size() < 2) {
    throw ValidationError(label + " needs at least 2 observations, got " +
                          std::to_string(sample.size()));
  }
  for (double x : sample) {
    if (!std::isfinite(x)) throw ValidationError(label + " contains a non-finite value");
  }
  const double minimum = *std::min_element(sample.begin(), sample.end());
  double centered = 0.0;
  for (double x : sample) centered += x - minimum;
  if (!(centered > 0.0)) {
    throw DegenerateDataError(label + " is degenerate: all observations equal (centered sum 0)");
  }
  return {minimum, centered};
}

SufficientStats summarize(const RawDataset& data) {
  SufficientStats stats;
  std::tie(stats.x1, stats.s1) = summarize_population(data.pop1, 1);
  std::tie(stats.x2, stats.s2) = summarize_population(data.pop2, 2);
  stats.p1 = static_cast<int>(data.pop1.size());
  stats.p2 = static_cast<int>(data.pop2.size());
  return stats;
}

Pivots pivots(const SufficientStats& stats) {
  if (!(stats.s1 > 0.0) || !(stats.s2 > 0.0)) {
    throw DegenerateDataError("pivots need positive centered sums s1 and s2");
  }
  Pivots p;
  p.t = stats.s2 / stats.s1;
  p.t1 = stats.x1 / stats.s1;
  p.t2 = stats.x2 / stats.s1;
  p.w = stats.s1 / stats.s2;
  p.w1 = stats.x2 / stats.s2;
  return p;
}

double mle_rate(const SufficientStats& stats, int population) {
  if (population == 1) return stats.p1 / stats.s1;
  if (population == 2) return stats.p2 / stats.s2;
  throw ValidationError("population must be 1 or 2");
}

RawDataset parse_dataset_csv(std::istream& in) {
  RawDataset data;
  std::string line;
  int row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto comma = content.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("row " + std::to_string(row) + ": expected 'population,value'");
    }
    const std::string first = trim(std::string_view(content).substr(0, comma));
    const std::string second = trim(std::string_view(content).substr(comma + 1));
    if (!header_seen) {
      if (first != "population" || second != "value") {
        throw ValidationError("row " + std::to_string(row) +
                              ": expected header 'population,value'");
      }
      header_seen = true;
      continue;
    }
    const double population = parse_number(first, row, "population");
    const double value = parse_number(second, row, "value");
    if (population == 1.0) {
      data.pop1.push_back(value);
    } else if (population == 2.0) {
      data.pop2.push_back(value);
    } else {
      throw ValidationError("row " + std::to_string(row) + ": population must be 1 or 2, got '" +
                            first + "'");
    }
  }
  if (!header_seen) throw ValidationError("empty input: expected header 'population,value'");
  if (data.pop1.empty()) throw ValidationError("no rows for population 1");
  if (data.pop2.empty()) throw ValidationError("no rows for population 2");
  return data;
}

RawDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file '" + path + "'");
  return parse_dataset_csv(in);
}

double kolmogorov_survival(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("kolmogorov_survival: lambda must be nonnegative");
  // The alternating series converges too slowly to be useful this close to 0,
  // where Q_KS is 1 to double precision anyway.
  if (lambda < 0.2) return 1.0;
  const double a2 = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * sign * std::exp(a2 * j * j);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample, double location, double rate) {
  if (sample.empty()) throw ValidationError("ks_test: empty sample");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ValidationError("ks_test: rate must be positive");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    const double cdf = x < location ? 0.0 : -std::expm1(-rate * (x - location));
    const double above = (static_cast<double>(i) + 1.0) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  const double root_n = std::sqrt(n);
  const double lambda = (root_n + 0.12 + 0.11 / root_n) * d;
  return {d, kolmogorov_survival(lambda)};
}

}  // namespace ordexp
