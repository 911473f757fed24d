#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "ordexp/error.hpp"
#include "ordexp/sigma1.hpp"

using namespace ordexp;

namespace {

const SufficientStats kStats{5.0, 15.0, 609.0, 403.0, 6, 6};
const EstimationConfig kQuad{2.0, LossSpec::quadratic()};
const EstimationConfig kEnt{2.0, LossSpec::entropy()};
const EstimationConfig kSym{2.0, LossSpec::symmetric()};

bool within(double got, double printed, double rel) { return std::abs(got / printed - 1.0) < rel; }

// Boundary multiplier from the two-dimensional form.
double bz1_oracle(LossKind kind, int p1, int p2, double k, double t) {
  auto n = [&](double m) { return oracle::sigma1_double(m, p1, p2, t); };
  switch (kind) {
    case LossKind::quadratic: return n(k) / n(2 * k);
    case LossKind::entropy: return n(0) / n(k);
    default: return std::sqrt(n(-k) / n(k));
  }
}

}  // namespace

TEST_CASE("BAEE on the case-study data") {
  CHECK(delta01(kStats, kQuad).value == doctest::Approx(609.0 * 609.0 / 56.0).epsilon(1e-13));
  CHECK(within(delta01(kStats, kQuad).value, 6622.9, 5e-4));
  CHECK(within(delta01(kStats, kEnt).value, 12363.0, 5e-4));
  CHECK(within(delta01(kStats, kSym).value, 19547.0, 5e-4));
  CHECK_FALSE(delta01(kStats, kQuad).truncation_active);
  CHECK(delta01(kStats, kQuad).estimator_id == EstimatorId::delta01);
}

TEST_CASE("Stein-type estimators on the case-study data") {
  const double t = 403.0 / 609.0;
  const auto d11 = stein_sigma1(SteinVariant::d11, kStats, kQuad);
  CHECK(d11.multiplier == doctest::Approx(std::pow(1.0 + t, 2) / 156.0).epsilon(1e-13));
  CHECK(within(d11.value, 6565.0, 5e-4));
  CHECK(d11.truncation_active);
  CHECK(within(stein_sigma1(SteinVariant::d12, kStats, kQuad).value, 5965.7, 5e-4));
  const auto d13 = stein_sigma1(SteinVariant::d13, kStats, kQuad);
  CHECK_FALSE(d13.truncation_active);
  CHECK(d13.value == delta01(kStats, kQuad).value);
  CHECK(within(stein_sigma1(SteinVariant::d14, kStats, kQuad).value, 6102.0, 5e-4));
  CHECK(within(stein_sigma1(SteinVariant::d14, kStats, kEnt).value, 8214.0, 5e-4));
  CHECK(within(stein_sigma1(SteinVariant::d11, kStats, kSym).value, 11508.0, 5e-4));
}

TEST_CASE("Stein guards fall back to the BAEE") {
  const SufficientStats zero_x{0.0, 0.0, 609.0, 403.0, 6, 6};
  const double d0 = delta01(zero_x, kQuad).value;
  CHECK(stein_sigma1(SteinVariant::d12, zero_x, kQuad).value == d0);
  CHECK(stein_sigma1(SteinVariant::d13, zero_x, kQuad).value == d0);
  CHECK(stein_sigma1(SteinVariant::d14, zero_x, kQuad).value == d0);
  CHECK_FALSE(stein_sigma1(SteinVariant::d14, zero_x, kQuad).truncation_active);
}

TEST_CASE("Stein estimators never exceed the BAEE") {
  std::mt19937_64 rng(17);
  std::exponential_distribution<double> e(1.0);
  std::normal_distribution<double> loc(0.0, 0.5);
  for (const auto& cfg : {kQuad, kEnt, kSym}) {
    const Sigma1Rules rules(6, 6, cfg);
    for (int i = 0; i < 300; ++i) {
      const SufficientStats s{loc(rng), loc(rng), 5.0 * e(rng) + 1e-6, 5.0 * e(rng) + 1e-6, 6, 6};
      const Pivots pv = pivots(s);
      for (auto v : {SteinVariant::d11, SteinVariant::d12, SteinVariant::d13, SteinVariant::d14}) {
        const Multiplier m = rules.stein(v, pv);
        CHECK(m.value <= rules.d01());
        CHECK(m.truncation_active == (m.value < rules.d01()));
      }
    }
  }
}

TEST_CASE("BZ multiplier on the case-study data") {
  const double t = 403.0 / 609.0;
  const double m = bz_multiplier_sigma1(t, 6, 6, kQuad);
  CHECK(m == doctest::Approx(0.0128586).epsilon(1e-5));
  CHECK(within(bz_sigma1(kStats, kQuad).value, 4769.1, 2e-3));
  CHECK(within(bz_sigma1(kStats, kEnt).value, 7029.0, 2e-3));
  CHECK(within(bz_sigma1(kStats, kSym).value, 8840.0, 2e-3));
}

TEST_CASE("BZ reduced form matches the two-dimensional integral") {
  for (double t : {0.05, 0.661741, 3.0}) {
    for (auto [cfg, kind] : {std::pair{kQuad, LossKind::quadratic}, std::pair{kEnt, LossKind::entropy},
                             std::pair{kSym, LossKind::symmetric}}) {
      CAPTURE(t);
      CAPTURE(cfg.loss.name());
      const double got = bz_multiplier_sigma1(t, 6, 6, cfg);
      CHECK(std::abs(got / bz1_oracle(kind, 6, 6, 2.0, t) - 1.0) < 1e-6);
    }
  }
  // Unequal sizes and a fractional power.
  const EstimationConfig half{0.5, LossSpec::quadratic()};
  CHECK(std::abs(bz_multiplier_sigma1(1.3, 4, 5, half) / bz1_oracle(LossKind::quadratic, 4, 5, 0.5, 1.3) - 1.0) <
        1e-6);
}

TEST_CASE("BZ generic path for linex matches a two-dimensional root") {
  const double alpha = -1.0;
  const double k = 2.0;
  const double t = 0.8;
  const int p1 = 6;
  const int p2 = 6;
  auto g = [&](double c) {
    return oracle::simpson_half_line(
        [&](double v) {
          if (v <= 0.0) return 0.0;
          const double inner = oracle::simpson(
              [&](double u) { return std::exp(-v * u) * std::pow(u, p2 - 2.0); }, 0.0, t, 1e-11);
          const double lprime = alpha * std::expm1(alpha * (c * std::pow(v, k) - 1.0));
          return lprime * std::exp((k + p1 + p2 - 3.0) * std::log(v) - v) * inner;
        },
        1e-11);
  };
  const double ref = oracle::bisect_log(g, 1e-5, 1.0);
  const double got = bz_multiplier_sigma1(t, p1, p2, {k, LossSpec::linex(alpha)});
  CHECK(std::abs(got / ref - 1.0) < 1e-6);
  CHECK_THROWS_AS(bz_multiplier_sigma1(t, p1, p2, {k, LossSpec::linex(1.0)}), DomainError);
}

TEST_CASE("BZ multiplier increases in t toward d01") {
  for (const auto& cfg : {kQuad, kEnt, kSym}) {
    const Sigma1Rules rules(6, 6, cfg);
    double prev = 0.0;
    for (double t = 0.01; t < 200.0; t *= 1.5) {
      const double m = rules.bz(t);
      CHECK(m > prev);
      CHECK(m <= rules.d01() * (1.0 + 1e-12));
      prev = m;
    }
    CHECK(std::abs(rules.bz(1e6) - rules.d01()) < 1e-6 * rules.d01());
  }
  CHECK(std::abs(bz_multiplier_sigma1(1e6, 6, 6, kQuad) - 1.0 / 56.0) < 1e-6);
}

TEST_CASE("BZ domain checks") {
  CHECK_THROWS_AS(bz_multiplier_sigma1(0.0, 6, 6, kQuad), DomainError);
  CHECK_THROWS_AS(bz_multiplier_sigma1(1.0, 3, 3, kSym), DomainError);
  CHECK_THROWS_AS(bz_multiplier_sigma1(1.0, 1, 3, kQuad), ValidationError);
}

TEST_CASE("Pitman bounds") {
  const double t = 403.0 / 609.0;
  const double q = oracle::gamma_median(10.0);
  const PitmanBounds b = pitman_bounds_sigma1(t, 6, 6, 2.0);
  CHECK(b.lower == doctest::Approx(1.0 / (q * q)).epsilon(1e-10));
  CHECK(b.upper == doctest::Approx((1 + t) * (1 + t) / (q * q)).epsilon(1e-10));
  CHECK(b.lower == doctest::Approx(0.0106966).epsilon(1e-4));
  for (double k : {0.5, 1.0, 3.0}) {
    for (double tt : {0.1, 1.0, 9.0}) {
      const PitmanBounds bb = pitman_bounds_sigma1(tt, 4, 7, k);
      CHECK(bb.upper / bb.lower == doctest::Approx(std::pow(1 + tt, k)).epsilon(1e-12));
    }
  }
  const PitmanBounds tiny = pitman_bounds_sigma1(1e-12, 6, 6, 2.0);
  CHECK(tiny.upper == doctest::Approx(tiny.lower).epsilon(1e-10));
}

TEST_CASE("Pitman estimates") {
  const auto baee_based = pitman_estimate_sigma1(PitmanBase::baee, kStats, kQuad);
  CHECK(baee_based.multiplier == doctest::Approx(1.0 / 56.0).epsilon(1e-13));
  CHECK_FALSE(baee_based.truncation_active);

  const double m5 = oracle::gamma_median(5.0);
  const Sigma1Rules rules(6, 6, kQuad);
  CHECK(rules.m01() == doctest::Approx(1.0 / (m5 * m5)).epsilon(1e-10));
  const auto pcaee_based = pitman_estimate_sigma1(PitmanBase::pcaee, kStats, kQuad);
  CHECK(pcaee_based.truncation_active);
  CHECK(pcaee_based.multiplier == doctest::Approx(pitman_bounds_sigma1(403.0 / 609.0, 6, 6, 2.0).upper));

  // Large t lifts u above m01: no truncation.
  const Multiplier free = rules.pitman(PitmanBase::pcaee, 1e3);
  CHECK_FALSE(free.truncation_active);
  CHECK(free.value == rules.m01());

  // Entropy BAEE (1/30) lies above u: clamped to u.
  const auto ent = pitman_estimate_sigma1(PitmanBase::baee, kStats, kEnt);
  CHECK(ent.truncation_active);
  CHECK(ent.multiplier == doctest::Approx(pitman_bounds_sigma1(403.0 / 609.0, 6, 6, 2.0).upper));
}

TEST_CASE("scale equivariance and location invariance") {
  const double c = 3.7;
  const SufficientStats scaled{c * kStats.x1, c * kStats.x2, c * kStats.s1, c * kStats.s2, 6, 6};
  for (const auto& cfg : {kQuad, kEnt, kSym}) {
    const double ck = std::pow(c, cfg.k);
    CHECK(delta01(scaled, cfg).value == doctest::Approx(ck * delta01(kStats, cfg).value).epsilon(1e-12));
    for (auto v : {SteinVariant::d11, SteinVariant::d12, SteinVariant::d13, SteinVariant::d14}) {
      CHECK(stein_sigma1(v, scaled, cfg).value ==
            doctest::Approx(ck * stein_sigma1(v, kStats, cfg).value).epsilon(1e-12));
    }
    CHECK(bz_sigma1(scaled, cfg).value == doctest::Approx(ck * bz_sigma1(kStats, cfg).value).epsilon(1e-10));
    CHECK(pitman_estimate_sigma1(PitmanBase::baee, scaled, cfg).value ==
          doctest::Approx(ck * pitman_estimate_sigma1(PitmanBase::baee, kStats, cfg).value).epsilon(1e-12));
  }
  const SufficientStats shifted{kStats.x1 + 40.0, kStats.x2 - 7.0, kStats.s1, kStats.s2, 6, 6};
  CHECK(stein_sigma1(SteinVariant::d11, shifted, kQuad).value ==
        stein_sigma1(SteinVariant::d11, kStats, kQuad).value);
  CHECK(bz_sigma1(shifted, kQuad).value == bz_sigma1(kStats, kQuad).value);
}

TEST_CASE("constant availability is reported per constant") {
  // p1 = p2 = 2, k = 2, symmetric: BAEE shape 3 < 2k.
  const Sigma1Rules rules(2, 2, kSym);
  CHECK_FALSE(rules.checked_d01().ok());
  CHECK(rules.checked_alpha4().ok());
  CHECK_THROWS_AS(rules.d01(), DomainError);
}
