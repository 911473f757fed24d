#include <doctest.h>

#include <cmath>
#include <memory>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "ordexp/error.hpp"
#include "ordexp/kernel.hpp"

using namespace ordexp;

namespace {

double gamma_ratio(double a, double b) { return std::exp(std::lgamma(a) - std::lgamma(b)); }

// Hand-derived closed forms written against std::lgamma.
double closed(LossKind kind, double a, double k) {
  switch (kind) {
    case LossKind::quadratic: return gamma_ratio(a, a + k);
    case LossKind::entropy: return gamma_ratio(a - k, a);
    case LossKind::symmetric: return std::sqrt(gamma_ratio(a - 2 * k, a));
    default: return NAN;
  }
}

}  // namespace

TEST_CASE("psi_solve examples") {
  CHECK(psi_solve({12.0, 2.0, LossSpec::quadratic()}) == doctest::Approx(1.0 / 156.0).epsilon(1e-13));
  for (double a : {1.5, 4.0, 11.0}) {
    CHECK(psi_solve({a, 1.0, LossSpec::quadratic()}) == doctest::Approx(1.0 / a).epsilon(1e-13));
  }
  CHECK(psi_solve({10.0, 2.0, LossSpec::entropy()}) == doctest::Approx(1.0 / 72.0).epsilon(1e-13));
}

TEST_CASE("baee and umvue constants") {
  const EstimationConfig q{2.0, LossSpec::quadratic()};
  const EstimationConfig e{2.0, LossSpec::entropy()};
  const EstimationConfig s{2.0, LossSpec::symmetric()};
  CHECK(baee_constant(6, q) == doctest::Approx(1.0 / 56.0).epsilon(1e-13));
  CHECK(baee_constant(6, e) == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
  CHECK(baee_constant(6, s) == doctest::Approx(std::sqrt(1.0 / 360.0)).epsilon(1e-13));
  CHECK(baee_constant(6, s) == doctest::Approx(0.05270463).epsilon(1e-7));
  CHECK(umvue_constant(6, 2.0) == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
  CHECK(umvue_constant(3, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
  for (int p : {2, 3, 5, 9}) {
    for (double k : {0.3, 0.5, 1.0, 2.5}) {
      CHECK(baee_constant(p, {k, LossSpec::entropy()}) ==
            doctest::Approx(umvue_constant(p, k)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(umvue_constant(1, 2.0), DomainError);
  CHECK_THROWS_AS(baee_constant(1, q), ValidationError);
}

TEST_CASE("generic solver agrees with closed forms") {
  for (LossKind kind : {LossKind::quadratic, LossKind::entropy, LossKind::symmetric}) {
    const LossSpec loss = kind == LossKind::quadratic ? LossSpec::quadratic()
                          : kind == LossKind::entropy ? LossSpec::entropy()
                                                      : LossSpec::symmetric();
    for (double a : {2.5, 5.0, 9.0, 14.0}) {
      for (double k : {0.5, 1.0, 2.0}) {
        if (validate_loss_domain(loss, a, k)) continue;
        const MultiplierQuery query{a, k, loss};
        const double generic = psi_solve_generic(query);
        const double ref = closed(kind, a, k);
        CAPTURE(a);
        CAPTURE(k);
        CAPTURE(loss.name());
        CHECK(std::abs(generic / ref - 1.0) < 1e-8);
        CHECK(std::abs(*psi_closed_form(query) / ref - 1.0) < 1e-13);
      }
    }
  }
}

TEST_CASE("residual vanishes at the returned multiplier") {
  for (const LossSpec& loss : {LossSpec::quadratic(), LossSpec::entropy(), LossSpec::symmetric(),
                               LossSpec::linex(-1.0), LossSpec::linex(0.5)}) {
    for (double a : {6.0, 11.0}) {
      for (double k : {0.5, 1.0, 2.0}) {
        if (validate_loss_domain(loss, a, k)) continue;
        const MultiplierQuery query{a, k, loss};
        CAPTURE(loss.name());
        CAPTURE(a);
        CAPTURE(k);
        CHECK(std::abs(psi_residual(query, psi_solve(query))) < 1e-8);
      }
    }
  }
}

TEST_CASE("linex with k = 1 has an explicit root") {
  // E exp(αcY) = (1 − αc)^(−a) = e^α  ⇒  c = (1 − e^(−α/a)) / α.
  for (double alpha : {-2.0, -0.5, 0.5, 1.5}) {
    for (double a : {3.0, 7.0}) {
      const double expected = -std::expm1(-alpha / a) / alpha;
      const double got = psi_solve({a, 1.0, LossSpec::linex(alpha)});
      CAPTURE(alpha);
      CAPTURE(a);
      CHECK(std::abs(got / expected - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("linex generic root matches an independent bisection") {
  const double a = 8.0;
  const double k = 2.0;
  const double alpha = -1.0;
  auto g = [&](double c) {
    return oracle::simpson_half_line(
        [&](double y) {
          return alpha * std::expm1(alpha * (c * y * y - 1.0)) * std::exp((a - 1) * std::log(y) - y - std::lgamma(a));
        },
        1e-12);
  };
  const double ref = oracle::bisect_log(g, 1e-6, 1.0);
  CHECK(std::abs(psi_solve({a, k, LossSpec::linex(alpha)}) / ref - 1.0) < 1e-8);
}

TEST_CASE("custom losses go through the generic path") {
  // Quadratic written as a custom loss must reproduce the closed form.
  auto quad = std::make_shared<CustomLoss>(CustomLoss{
      "custom-quadratic", [](double t) { return (t - 1) * (t - 1); }, [](double t) { return 2 * (t - 1); }});
  const double got = psi_solve({7.0, 2.0, LossSpec::custom(quad)});
  CHECK(std::abs(got / gamma_ratio(7.0, 9.0) - 1.0) < 1e-8);
  CHECK_FALSE(psi_closed_form({7.0, 2.0, LossSpec::custom(quad)}).has_value());
}

TEST_CASE("quadratic multiplier decreases in k and in a") {
  for (double a = 2.0; a <= 15.0; a += 1.0) {
    double prev = INFINITY;
    for (double k = 0.25; k <= 4.0; k += 0.25) {
      const double c = psi_solve({a, k, LossSpec::quadratic()});
      CHECK(c < prev);
      prev = c;
    }
  }
  for (double k : {0.5, 1.0, 2.0}) {
    double prev = INFINITY;
    for (double a = 1.0; a <= 20.0; a += 0.5) {
      const double c = psi_solve({a, k, LossSpec::quadratic()});
      CHECK(c < prev);
      prev = c;
    }
  }
}

TEST_CASE("domain violations surface as diagnostics") {
  CHECK_THROWS_AS(psi_solve({4.0, 2.0, LossSpec::symmetric()}), DomainError);
  CHECK_THROWS_AS(psi_solve({2.0, 2.0, LossSpec::entropy()}), DomainError);
  CHECK_THROWS_AS(psi_solve({12.0, 2.0, LossSpec::linex(1.0)}), DomainError);
  CHECK_THROWS_AS(psi_solve({5.0, -1.0, LossSpec::quadratic()}), DomainError);
  const auto bad = CheckedConstant::compute([] { return psi_solve({4.0, 2.0, LossSpec::symmetric()}); });
  CHECK_FALSE(bad.ok());
  CHECK(bad.diagnostic().find("a-2k<=0") != std::string::npos);
  CHECK_THROWS_AS(bad.value(), DomainError);
  const auto good = CheckedConstant::compute([] { return 2.0; });
  CHECK(good.ok());
  CHECK(good.value() == 2.0);
}

TEST_CASE("cache is safe under concurrent use and behaves as recomputation") {
  clear_constant_cache();
  std::vector<std::thread> threads;
  std::vector<double> results(8);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { results[i] = psi_solve({6.5, 1.5, LossSpec::linex(-0.7)}); });
  }
  for (auto& t : threads) t.join();
  for (double r : results) CHECK(r == results[0]);
  CHECK(results[0] == psi_solve_generic({6.5, 1.5, LossSpec::linex(-0.7)}));
}
