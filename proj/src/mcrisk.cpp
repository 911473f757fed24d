#include "ordexp/mcrisk.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "ordexp/bank.hpp"
#include "ordexp/error.hpp"

namespace ordexp::mc {

namespace {

constexpr long kChunkSize = 1000;
constexpr int kMaxSampleSize = 100000;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

/// Runs fn(begin, end, partial) over fixed chunks of [0, reps) on `threads`
/// workers. Partials come back in chunk order, so merging them sequentially
/// gives the same floating-point result for any thread count.
template <class Partial, class Fn>
std::vector<Partial> run_chunks(long reps, int threads, const Partial& zero, Fn fn) {
  const long chunks = (reps + kChunkSize - 1) / kChunkSize;
  std::vector<Partial> partials(static_cast<std::size_t>(chunks), zero);
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const long chunk = next.fetch_add(1);
      if (chunk >= chunks) return;
      try {
        const long begin = chunk * kChunkSize;
        fn(begin, std::min(reps, begin + kChunkSize), partials[static_cast<std::size_t>(chunk)]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const int workers = static_cast<int>(std::min<long>(std::max(threads, 1), chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return partials;
}

struct Draw {
  SufficientStats stats;
  Pivots pivots;
  long resamples = 0;
};

// One nondegenerate sample for replication `rep` at grid point `eta_index`.
Draw draw(const SimConfig& cfg, std::size_t eta_index, long rep, std::vector<double>& buffer) {
  Rng rng = Rng::for_replication(cfg.seed, eta_index, static_cast<std::uint64_t>(rep));
  const double sigma1 = cfg.eta_grid[eta_index] * cfg.sigma2;
  Draw out;
  out.stats.p1 = cfg.p1;
  out.stats.p2 = cfg.p2;
  for (;;) {
    std::span<double> first(buffer.data(), static_cast<std::size_t>(cfg.p1));
    std::span<double> second(buffer.data() + cfg.p1, static_cast<std::size_t>(cfg.p2));
    sample_population(first, cfg.mu1, sigma1, rng);
    sample_population(second, cfg.mu2, cfg.sigma2, rng);
    const double x1 = *std::min_element(first.begin(), first.end());
    const double x2 = *std::min_element(second.begin(), second.end());
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : first) s1 += x - x1;
    for (double x : second) s2 += x - x2;
    if (s1 > 0.0 && s2 > 0.0) {
      out.stats.x1 = x1;
      out.stats.x2 = x2;
      out.stats.s1 = s1;
      out.stats.s2 = s2;
      out.pivots = pivots(out.stats);
      return out;
    }
    ++out.resamples;
  }
}

// δ / σᵏ for a multiplier m.
double scaled_estimate(double m, EstimatorId id, const Draw& d, double sigma1, double sigma2,
                       double k) {
  if (target_of(id) == Target::sigma1) return m * std::pow(d.stats.s1 / sigma1, k);
  return m * std::pow(d.stats.s2 / sigma2, k);
}

struct RiskPartial {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  long resamples = 0;
};

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::for_replication(std::uint64_t seed, std::uint64_t eta_index, std::uint64_t rep) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (eta_index * 0xD1B54A32D192ED03ULL);
  key = splitmix64(state);
  state = key ^ (rep * 0xAEF17502108EF2D9ULL);
  return Rng(splitmix64(state));
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

void sample_population(std::span<double> out, double mu, double sigma, Rng& rng) {
  for (double& x : out) x = mu + sigma * rng.exponential();
}

std::vector<double> sample_population(int p, double mu, double sigma, Rng& rng) {
  if (p < 2) throw ValidationError("sample_population: p must be at least 2");
  if (!(sigma > 0.0)) throw ValidationError("sample_population: sigma must be positive");
  std::vector<double> out(static_cast<std::size_t>(p));
  sample_population(out, mu, sigma, rng);
  return out;
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[static_cast<std::size_t>(i)] = 0.05 + 0.05 * i;
  grid.back() = 1.0;
  return grid;
}

void SimConfig::validate() const {
  if (p1 < 2 || p2 < 2) throw ValidationError("p1 and p2 must be at least 2");
  if (p1 > kMaxSampleSize || p2 > kMaxSampleSize) throw ValidationError("sample size too large");
  if (!std::isfinite(mu1) || !std::isfinite(mu2)) throw ValidationError("mu1 and mu2 must be finite");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ValidationError("sigma2 must be positive");
  if (eta_grid.empty()) throw ValidationError("eta grid is empty");
  for (double eta : eta_grid) {
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw ValidationError("eta must lie in (0, 1] (sigma1 <= sigma2), got " + std::to_string(eta));
    }
  }
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("k must be positive");
  if (losses.empty()) throw ValidationError("at least one loss is required");
  if (reps < 1000) throw ValidationError("reps must be at least 1000");
  if (threads < 0) throw ValidationError("threads must be nonnegative");
}

int resolve_thread_count(int requested) {
  int count = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (count <= 0) count = 1;
  if (const char* cap = std::getenv("ORDEXP_THREADS")) {
    try {
      const int limit = std::stoi(cap);
      if (limit > 0) count = std::min(count, limit);
    } catch (const std::exception&) {
      throw ValidationError(std::string("ORDEXP_THREADS must be a positive integer, got '") + cap +
                            "'");
    }
  }
  return count;
}

RiskTable simulate_risk(const SimConfig& config) {
  config.validate();
  if (config.estimators.empty()) throw ValidationError("at least one estimator is required");

  // Requested estimators plus the baselines their RRI needs.
  std::vector<EstimatorId> evaluated = config.estimators;
  for (EstimatorId id : config.estimators) {
    const EstimatorId base = baseline_of(target_of(id));
    if (std::find(evaluated.begin(), evaluated.end(), base) == evaluated.end()) {
      evaluated.push_back(base);
    }
  }
  auto slot_of = [&](EstimatorId id) {
    return static_cast<std::size_t>(std::find(evaluated.begin(), evaluated.end(), id) -
                                    evaluated.begin());
  };

  std::vector<EstimatorBank> banks;
  banks.reserve(config.losses.size());
  for (const LossSpec& loss : config.losses) banks.emplace_back(config.p1, config.p2, EstimationConfig{config.k, loss});
  // Surface unavailable constants before the run rather than mid-simulation.
  {
    std::vector<double> buffer(static_cast<std::size_t>(config.p1 + config.p2));
    const Draw probe = draw(config, 0, 0, buffer);
    for (const auto& bank : banks) {
      for (EstimatorId id : evaluated) bank.multiplier(id, probe.pivots);
    }
  }

  const std::size_t slots = config.losses.size() * evaluated.size();
  const int threads = resolve_thread_count(config.threads);
  RiskTable table;

  for (std::size_t e = 0; e < config.eta_grid.size(); ++e) {
    const double eta = config.eta_grid[e];
    const double sigma1 = eta * config.sigma2;
    const RiskPartial zero{std::vector<double>(slots, 0.0), std::vector<double>(slots, 0.0), 0};
    auto partials = run_chunks(config.reps, threads, zero, [&](long begin, long end, RiskPartial& acc) {
      std::vector<double> buffer(static_cast<std::size_t>(config.p1 + config.p2));
      for (long rep = begin; rep < end; ++rep) {
        const Draw d = draw(config, e, rep, buffer);
        acc.resamples += d.resamples;
        for (std::size_t l = 0; l < banks.size(); ++l) {
          for (std::size_t j = 0; j < evaluated.size(); ++j) {
            const EstimatorId id = evaluated[j];
            const double m = banks[l].multiplier(id, d.pivots).value;
            const double ratio = scaled_estimate(m, id, d, sigma1, config.sigma2, config.k);
            const double value = config.losses[l].eval_unchecked(ratio);
            acc.sum[l * evaluated.size() + j] += value;
            acc.sum_sq[l * evaluated.size() + j] += value * value;
          }
        }
      }
    });

    RiskPartial total = zero;
    for (const auto& part : partials) {
      for (std::size_t i = 0; i < slots; ++i) {
        total.sum[i] += part.sum[i];
        total.sum_sq[i] += part.sum_sq[i];
      }
      total.resamples += part.resamples;
    }
    table.degenerate_resamples += total.resamples;

    const double n = static_cast<double>(config.reps);
    for (std::size_t l = 0; l < config.losses.size(); ++l) {
      const std::string loss_name = config.losses[l].name();
      for (EstimatorId id : config.estimators) {
        const std::size_t slot = l * evaluated.size() + slot_of(id);
        const std::size_t base_slot = l * evaluated.size() + slot_of(baseline_of(target_of(id)));
        const double risk = total.sum[slot] / n;
        const double risk_base = total.sum[base_slot] / n;
        const double variance = std::max(0.0, (total.sum_sq[slot] - n * risk * risk) / (n - 1.0));
        RiskRow row;
        row.eta = eta;
        row.p1 = config.p1;
        row.p2 = config.p2;
        row.mu1 = config.mu1;
        row.mu2 = config.mu2;
        row.k = config.k;
        row.loss = loss_name;
        row.estimator = id;
        row.risk = risk;
        row.rri = slot == base_slot ? 0.0 : 100.0 * (risk_base - risk) / risk_base;
        row.mc_se = std::sqrt(variance / n);
        row.reps = config.reps;
        row.seed = config.seed;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<GpcPoint> gpc_estimate(const SimConfig& config, EstimatorId a, EstimatorId b,
                                   const LossSpec& loss) {
  config.validate();
  if (target_of(a) != target_of(b)) {
    throw ValidationError("GPC compares estimators of the same target; got " +
                          std::string(to_string(a)) + " and " + std::string(to_string(b)));
  }
  const EstimatorBank bank(config.p1, config.p2, EstimationConfig{config.k, loss});
  {
    std::vector<double> buffer(static_cast<std::size_t>(config.p1 + config.p2));
    const Draw probe = draw(config, 0, 0, buffer);
    bank.multiplier(a, probe.pivots);
    bank.multiplier(b, probe.pivots);
  }
  const int threads = resolve_thread_count(config.threads);

  struct Counts {
    double wins = 0.0;  // ties count ½
    double wins_sq = 0.0;
  };

  std::vector<GpcPoint> out;
  for (std::size_t e = 0; e < config.eta_grid.size(); ++e) {
    const double eta = config.eta_grid[e];
    const double sigma1 = eta * config.sigma2;
    auto partials = run_chunks(config.reps, threads, Counts{}, [&](long begin, long end, Counts& acc) {
      std::vector<double> buffer(static_cast<std::size_t>(config.p1 + config.p2));
      for (long rep = begin; rep < end; ++rep) {
        const Draw d = draw(config, e, rep, buffer);
        const double ra = scaled_estimate(bank.multiplier(a, d.pivots).value, a, d, sigma1,
                                          config.sigma2, config.k);
        const double rb = scaled_estimate(bank.multiplier(b, d.pivots).value, b, d, sigma1,
                                          config.sigma2, config.k);
        const double la = loss.eval_unchecked(ra);
        const double lb = loss.eval_unchecked(rb);
        const double score = la < lb ? 1.0 : (la == lb ? 0.5 : 0.0);
        acc.wins += score;
        acc.wins_sq += score * score;
      }
    });
    Counts total;
    for (const auto& part : partials) {
      total.wins += part.wins;
      total.wins_sq += part.wins_sq;
    }
    const double n = static_cast<double>(config.reps);
    const double p = total.wins / n;
    const double variance = std::max(0.0, (total.wins_sq - n * p * p) / (n - 1.0));
    out.push_back({eta, p, std::sqrt(variance / n)});
  }
  return out;
}

}  // namespace ordexp::mc
