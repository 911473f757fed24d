#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ordexp/error.hpp"
#include "ordexp/mcrisk.hpp"
#include "ordexp/report.hpp"

using namespace ordexp;
using namespace ordexp::mc;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.p1 = 4;
  c.p2 = 5;
  c.eta_grid = {0.3, 1.0};
  c.reps = 4000;
  c.losses = {LossSpec::quadratic(), LossSpec::entropy()};
  c.estimators = {EstimatorId::delta11, EstimatorId::bz1, EstimatorId::delta_d, EstimatorId::bz2};
  c.seed = 99;
  return c;
}

std::string as_csv(const RiskTable& t) {
  std::ostringstream out;
  write_risk_csv(out, t.rows, 17);
  return out.str();
}

// Quadratic risk of the BAEE: 1 − Γ(a+k)² / (Γ(a) Γ(a+2k)) with a = p − 1.
double baee_quadratic_risk(int p, double k) {
  const double a = p - 1.0;
  return 1.0 - std::exp(2 * std::lgamma(a + k) - std::lgamma(a) - std::lgamma(a + 2 * k));
}

}  // namespace

TEST_CASE("generator moments") {
  Rng rng(123);
  const int n = 200000;
  double sum = 0.0;
  double sum_e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum_e += rng.exponential();
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum_e / n - 1.0) < 4.0 / std::sqrt(n));
}

TEST_CASE("population minimum and spacing sums") {
  Rng rng(7);
  const int p = 5;
  const double mu = 2.0;
  const double sigma = 3.0;
  const int n = 40000;
  double min_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto xs = sample_population(p, mu, sigma, rng);
    double m = xs[0];
    for (double x : xs) {
      CHECK(x >= mu);
      m = std::min(m, x);
    }
    min_sum += m;
  }
  // min ~ μ + σ Exp(1)/p
  CHECK(std::abs(min_sum / n - (mu + sigma / p)) < 4.0 * (sigma / p) / std::sqrt(n));
  CHECK_THROWS_AS(sample_population(1, 0.0, 1.0, rng), ValidationError);
}

TEST_CASE("replication streams are reproducible and distinct") {
  Rng a = Rng::for_replication(5, 2, 17);
  Rng b = Rng::for_replication(5, 2, 17);
  Rng c = Rng::for_replication(5, 2, 18);
  Rng d = Rng::for_replication(5, 3, 17);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
}

TEST_CASE("default grid") {
  const auto g = default_eta_grid();
  REQUIRE(g.size() == 20);
  CHECK(g.front() == doctest::Approx(0.05));
  CHECK(g.back() == 1.0);
}

TEST_CASE("BAEE risk matches its closed form") {
  SimConfig c;
  c.p1 = 6;
  c.p2 = 4;
  c.eta_grid = {0.5};
  c.reps = 40000;
  c.estimators = {EstimatorId::delta01, EstimatorId::delta02};
  const RiskTable t = simulate_risk(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(std::abs(t.rows[0].risk - baee_quadratic_risk(6, 2.0)) < 3.0 * t.rows[0].mc_se);
  CHECK(std::abs(t.rows[1].risk - baee_quadratic_risk(4, 2.0)) < 3.0 * t.rows[1].mc_se);
  CHECK(baee_quadratic_risk(6, 2.0) == doctest::Approx(13.0 / 28.0).epsilon(1e-12));
  for (const auto& r : t.rows) CHECK(r.rri == 0.0);
}

TEST_CASE("table layout and RRI bookkeeping") {
  const SimConfig c = small_config();
  const RiskTable t = simulate_risk(c);
  REQUIRE(t.rows.size() == c.eta_grid.size() * c.losses.size() * c.estimators.size());
  std::size_t i = 0;
  for (double eta : c.eta_grid) {
    for (const auto& loss : c.losses) {
      for (EstimatorId id : c.estimators) {
        const RiskRow& r = t.rows[i++];
        CHECK(r.eta == eta);
        CHECK(r.loss == loss.name());
        CHECK(r.estimator == id);
        CHECK(r.reps == c.reps);
        CHECK(r.seed == c.seed);
        CHECK(r.risk > 0.0);
        CHECK(r.mc_se > 0.0);
      }
    }
  }
  // Stein-type never exceeds the BAEE pointwise, so under common random numbers
  // its quadratic RRI at η = 1 cannot be far below zero.
  CHECK(t.rows[4 * 2].estimator == EstimatorId::delta11);
  CHECK(t.rows[4 * 2].rri > -1.0);
}

TEST_CASE("output is independent of the thread count") {
  SimConfig c = small_config();
  c.threads = 1;
  const std::string one = as_csv(simulate_risk(c));
  c.threads = 4;
  const std::string four = as_csv(simulate_risk(c));
  c.threads = 3;
  const std::string three = as_csv(simulate_risk(c));
  CHECK(one == four);
  CHECK(one == three);
  c.seed = 100;
  CHECK(as_csv(simulate_risk(c)) != one);
}

TEST_CASE("Monte Carlo standard error shrinks like 1/sqrt(N)") {
  SimConfig c = small_config();
  c.losses = {LossSpec::quadratic()};
  c.eta_grid = {0.6};
  c.reps = 4000;
  const double se_small = simulate_risk(c).rows[0].mc_se;
  c.reps = 16000;
  const double se_large = simulate_risk(c).rows[0].mc_se;
  CHECK(se_small / se_large > 1.7);
  CHECK(se_small / se_large < 2.3);
}

TEST_CASE("configuration validation") {
  auto expect_invalid = [](SimConfig c) { CHECK_THROWS_AS(simulate_risk(c), ValidationError); };
  SimConfig base = small_config();
  SimConfig c = base;
  c.p1 = 1;
  expect_invalid(c);
  c = base;
  c.eta_grid = {0.5, 1.2};
  expect_invalid(c);
  c = base;
  c.eta_grid = {0.0};
  expect_invalid(c);
  c = base;
  c.k = 0.0;
  expect_invalid(c);
  c = base;
  c.reps = 999;
  expect_invalid(c);
  c = base;
  c.losses.clear();
  expect_invalid(c);
  c = base;
  c.estimators.clear();
  expect_invalid(c);
  c = base;
  c.threads = -1;
  expect_invalid(c);
}

TEST_CASE("unavailable constants are reported before the run") {
  SimConfig c = small_config();
  c.p1 = 2;
  c.p2 = 2;
  c.losses = {LossSpec::symmetric()};
  c.estimators = {EstimatorId::delta01};
  CHECK_THROWS_AS(simulate_risk(c), DomainError);
}

TEST_CASE("GPC") {
  SimConfig c = small_config();
  c.eta_grid = {0.5, 1.0};
  const auto same = gpc_estimate(c, EstimatorId::bz1, EstimatorId::bz1, LossSpec::quadratic());
  REQUIRE(same.size() == 2);
  for (const auto& p : same) CHECK(p.probability == 0.5);
  const auto pts = gpc_estimate(c, EstimatorId::delta11, EstimatorId::delta01, LossSpec::quadratic());
  for (const auto& p : pts) {
    CHECK(p.probability >= 0.0);
    CHECK(p.probability <= 1.0);
    CHECK(p.se >= 0.0);
  }
  // Swapping the pair mirrors the probability.
  const auto swapped = gpc_estimate(c, EstimatorId::delta01, EstimatorId::delta11, LossSpec::quadratic());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].probability + swapped[i].probability == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gpc_estimate(c, EstimatorId::bz1, EstimatorId::bz2, LossSpec::quadratic()), ValidationError);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
  ::setenv("ORDEXP_THREADS", "2", 1);
  CHECK(resolve_thread_count(8) == 2);
  CHECK(resolve_thread_count(1) == 1);
  ::setenv("ORDEXP_THREADS", "zero", 1);
  CHECK_THROWS_AS(resolve_thread_count(4), ValidationError);
  ::unsetenv("ORDEXP_THREADS");
}
