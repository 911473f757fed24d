#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordexp/losses.hpp"

namespace ordexp {

/// Which scale power an estimator targets.
enum class Target { sigma1, sigma2 };

enum class EstimatorId {
  // σ₁ᵏ
  delta01,        // best affine equivariant (BAEE)
  delta11,        // Stein-type, uses T
  delta12,        // Stein-type, uses T and T1
  delta13,        // Stein-type, uses T and T2
  delta14,        // Stein-type, uses T, T1 and T2
  bz1,            // Brewster–Zidek boundary
  pitman1,        // BAEE clamped to the conditional-median envelope
  pcaee1,         // Pitman-closest affine equivariant
  pitman1_pcaee,  // PCAEE clamped to the envelope
  // σ₂ᵏ
  delta02,        // BAEE
  delta21,        // expansion with W
  delta22,        // shrinkage with W1
  delta_d,        // double shrinkage
  bz2,            // Brewster–Zidek boundary
  pitman2,        // BAEE clamped to the conditional-median envelope
};

std::string_view to_string(EstimatorId id) noexcept;

/// Inverse of to_string; throws ValidationError for unknown names.
EstimatorId parse_estimator(std::string_view name);

Target target_of(EstimatorId id) noexcept;

/// BAEE of the same target: the RRI baseline.
EstimatorId baseline_of(Target target) noexcept;

/// Every estimator, in declaration order.
const std::vector<EstimatorId>& all_estimators();

/// Estimators shown by the `estimate` command for one target.
std::vector<EstimatorId> table_estimators(Target target);

/// Estimators claimed to dominate the BAEE in risk (Stein, BZ, double shrinkage).
bool is_risk_improver(EstimatorId id) noexcept;

/// Multiplier applied to sᵢᵏ, and whether a clamp moved it off its base value.
struct Multiplier {
  double value = 0.0;
  bool truncation_active = false;
};

struct EstimateReport {
  EstimatorId estimator_id = EstimatorId::delta01;
  double multiplier = 0.0;
  double value = 0.0;  // multiplier · sᵢᵏ
  bool truncation_active = false;
  LossSpec loss = LossSpec::quadratic();
  double k = 2.0;
};

}  // namespace ordexp
