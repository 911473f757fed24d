#include "ordexp/estimator.hpp"

#include <array>
#include <utility>

#include "ordexp/error.hpp"

namespace ordexp {

namespace {

constexpr std::array<std::pair<EstimatorId, std::string_view>, 15> kNames = {{
    {EstimatorId::delta01, "delta01"},
    {EstimatorId::delta11, "delta11"},
    {EstimatorId::delta12, "delta12"},
    {EstimatorId::delta13, "delta13"},
    {EstimatorId::delta14, "delta14"},
    {EstimatorId::bz1, "bz1"},
    {EstimatorId::pitman1, "pitman1"},
    {EstimatorId::pcaee1, "pcaee1"},
    {EstimatorId::pitman1_pcaee, "pitman1_pcaee"},
    {EstimatorId::delta02, "delta02"},
    {EstimatorId::delta21, "delta21"},
    {EstimatorId::delta22, "delta22"},
    {EstimatorId::delta_d, "deltaD"},
    {EstimatorId::bz2, "bz2"},
    {EstimatorId::pitman2, "pitman2"},
}};

}  // namespace

std::string_view to_string(EstimatorId id) noexcept {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

EstimatorId parse_estimator(std::string_view name) {
  for (const auto& [key, text] : kNames) {
    if (text == name) return key;
  }
  throw ValidationError("unknown estimator '" + std::string(name) + "'");
}

Target target_of(EstimatorId id) noexcept {
  return static_cast<int>(id) < static_cast<int>(EstimatorId::delta02) ? Target::sigma1
                                                                        : Target::sigma2;
}

EstimatorId baseline_of(Target target) noexcept {
  return target == Target::sigma1 ? EstimatorId::delta01 : EstimatorId::delta02;
}

const std::vector<EstimatorId>& all_estimators() {
  static const std::vector<EstimatorId> ids = [] {
    std::vector<EstimatorId> out;
    for (const auto& entry : kNames) out.push_back(entry.first);
    return out;
  }();
  return ids;
}

std::vector<EstimatorId> table_estimators(Target target) {
  if (target == Target::sigma1) {
    return {EstimatorId::delta01, EstimatorId::delta11, EstimatorId::delta12,
            EstimatorId::delta13, EstimatorId::delta14, EstimatorId::bz1,
            EstimatorId::pitman1, EstimatorId::pitman1_pcaee};
  }
  return {EstimatorId::delta02, EstimatorId::delta21, EstimatorId::delta22,
          EstimatorId::delta_d, EstimatorId::bz2,     EstimatorId::pitman2};
}

bool is_risk_improver(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::delta11:
    case EstimatorId::delta12:
    case EstimatorId::delta13:
    case EstimatorId::delta14:
    case EstimatorId::bz1:
    case EstimatorId::delta21:
    case EstimatorId::delta22:
    case EstimatorId::delta_d:
    case EstimatorId::bz2:
      return true;
    default:
      return false;
  }
}

}  // namespace ordexp
