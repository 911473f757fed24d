#pragma once

#include <iosfwd>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include "ordexp/losses.hpp"

namespace ordexp {

/// Raw observations from the two shifted-exponential populations.
struct RawDataset {
  std::vector<double> pop1;
  std::vector<double> pop2;
};

/// Minima and centered sums: the complete data reduction for the model.
struct SufficientStats {
  double x1 = 0.0;  // min of population 1
  double x2 = 0.0;  // min of population 2
  double s1 = 0.0;  // Σ (x − x1) over population 1
  double s2 = 0.0;  // Σ (x − x2) over population 2
  int p1 = 0;
  int p2 = 0;

  bool operator==(const SufficientStats&) const = default;
};

/// Scale-free ratios of the sufficient statistics.
struct Pivots {
  double t = 0.0;   // s2 / s1
  double t1 = 0.0;  // x1 / s1
  double t2 = 0.0;  // x2 / s1
  double w = 0.0;   // s1 / s2
  double w1 = 0.0;  // x2 / s2
};

/// Power k of the scale parameter being estimated, and the loss in force.
struct EstimationConfig {
  double k = 2.0;
  LossSpec loss = LossSpec::quadratic();

  /// Throws ValidationError unless k is a finite positive number.
  void validate() const;
};

/// Minimum and centered sum of one population. Requires at least two
/// finite observations that are not all equal.
std::pair<double, double> summarize_population(std::span<const double> sample, int population);

SufficientStats summarize(const RawDataset& data);

/// Throws DegenerateDataError when s1 or s2 is not positive.
Pivots pivots(const SufficientStats& stats);

/// Maximum-likelihood rate p / Σ (x − min) of population 1 or 2.
double mle_rate(const SufficientStats& stats, int population);

/// Reads `population,value` CSV (header required, rows in any order).
RawDataset parse_dataset_csv(std::istream& in);
RawDataset read_dataset_csv(const std::string& path);

struct KsResult {
  double statistic = 0.0;  // sup |F_n − F|
  double p_value = 1.0;
};

/// Kolmogorov survival function Q_KS(λ) = 2 Σ (−1)^{j−1} e^{−2 j² λ²}.
double kolmogorov_survival(double lambda);

/// One-sample KS test against the shifted exponential
/// F(x) = 1 − exp(−rate·(x − location)) for x ≥ location.
KsResult ks_test(std::span<const double> sample, double location, double rate);

}  // namespace ordexp
