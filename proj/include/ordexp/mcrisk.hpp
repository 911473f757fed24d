#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordexp/estimator.hpp"
#include "ordexp/losses.hpp"

namespace ordexp::mc {

/// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for one replication, derived from the run seed, the
  /// η-grid index and the replication number. Streams do not depend on how
  /// replications are scheduled.
  static Rng for_replication(std::uint64_t seed, std::uint64_t eta_index, std::uint64_t rep);

  std::uint64_t next() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard exponential by inversion, −ln(1 − U).
  double exponential() noexcept { return -std::log1p(-uniform()); }

 private:
  std::uint64_t s_[4];
};

/// Fills `out` with draws of μ + σ·Exp(1).
void sample_population(std::span<double> out, double mu, double sigma, Rng& rng);

/// p draws of μ + σ·Exp(1); p must be at least 2.
std::vector<double> sample_population(int p, double mu, double sigma, Rng& rng);

/// 20 equispaced points on [0.05, 1].
std::vector<double> default_eta_grid();

struct SimConfig {
  int p1 = 6;
  int p2 = 6;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;  // σ₁ = η·σ₂
  std::vector<double> eta_grid = default_eta_grid();
  double k = 2.0;
  std::vector<LossSpec> losses = {LossSpec::quadratic()};
  std::vector<EstimatorId> estimators;
  long reps = 90000;
  std::uint64_t seed = 20240601;
  int threads = 0;  // 0: hardware concurrency

  /// Throws ValidationError on any violated invariant.
  void validate() const;
};

struct RiskRow {
  double eta = 0.0;
  int p1 = 0;
  int p2 = 0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double k = 0.0;
  std::string loss;
  EstimatorId estimator = EstimatorId::delta01;
  double risk = 0.0;
  double rri = 0.0;    // percent, against the BAEE of the same target
  double mc_se = 0.0;  // sample sd of the loss / √reps
  long reps = 0;
  std::uint64_t seed = 0;
};

struct RiskTable {
  std::vector<RiskRow> rows;  // η-major, then loss, then estimator order of the config
  long degenerate_resamples = 0;
};

/// Monte Carlo risk of every configured estimator on every (η, loss), with
/// common random numbers: all estimators and losses in one (η, replication)
/// see the same sample. Output is identical for any thread count.
RiskTable simulate_risk(const SimConfig& config);

struct GpcPoint {
  double eta = 0.0;
  double probability = 0.0;
  double se = 0.0;
};

/// P[L(δ_A/σᵏ) < L(δ_B/σᵏ)] + ½ P[tie] per η. Both estimators must target the
/// same scale; `loss` is the L of the comparison.
std::vector<GpcPoint> gpc_estimate(const SimConfig& config, EstimatorId a, EstimatorId b,
                                   const LossSpec& loss);

/// Worker count for a requested value: 0 means hardware concurrency, and the
/// ORDEXP_THREADS environment variable caps the result.
int resolve_thread_count(int requested);

}  // namespace ordexp::mc
