#include "ordexp/bank.hpp"

#include <cmath>

#include "ordexp/error.hpp"

namespace ordexp {

Multiplier EstimatorBank::multiplier(EstimatorId id, const Pivots& pv) const {
  switch (id) {
    case EstimatorId::delta01: return sigma1_.baee();
    case EstimatorId::delta11: return sigma1_.stein(SteinVariant::d11, pv);
    case EstimatorId::delta12: return sigma1_.stein(SteinVariant::d12, pv);
    case EstimatorId::delta13: return sigma1_.stein(SteinVariant::d13, pv);
    case EstimatorId::delta14: return sigma1_.stein(SteinVariant::d14, pv);
    case EstimatorId::bz1: return {sigma1_.bz(pv.t), false};
    case EstimatorId::pitman1: return sigma1_.pitman(PitmanBase::baee, pv.t);
    case EstimatorId::pcaee1: return sigma1_.pcaee();
    case EstimatorId::pitman1_pcaee: return sigma1_.pitman(PitmanBase::pcaee, pv.t);
    case EstimatorId::delta02: return sigma2_.baee();
    case EstimatorId::delta21: return sigma2_.expansion(pv.w);
    case EstimatorId::delta22: return sigma2_.shrinkage(pv.w1);
    case EstimatorId::delta_d: return sigma2_.double_shrinkage(pv.w, pv.w1);
    case EstimatorId::bz2: return {sigma2_.bz(pv.w), false};
    case EstimatorId::pitman2: return sigma2_.pitman(pv.w);
  }
  throw InternalError("unhandled estimator id");
}

EstimateReport EstimatorBank::evaluate(EstimatorId id, const SufficientStats& stats) const {
  if (stats.p1 != sigma1_.p1() || stats.p2 != sigma1_.p2()) {
    throw ValidationError("sample sizes do not match the estimator bank");
  }
  const Multiplier m = multiplier(id, pivots(stats));
  const double s = target_of(id) == Target::sigma1 ? stats.s1 : stats.s2;
  const EstimationConfig& cfg = config();
  return {id, m.value, m.value * std::pow(s, cfg.k), m.truncation_active, cfg.loss, cfg.k};
}

}  // namespace ordexp
