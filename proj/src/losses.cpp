#include "ordexp/losses.hpp"

#include <cmath>
#include <sstream>

#include "ordexp/error.hpp"

namespace ordexp {

LossSpec LossSpec::linex(double alpha) {
  if (!(alpha != 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("linex loss requires a finite nonzero alpha");
  }
  return LossSpec(LossKind::linex, alpha);
}

LossSpec LossSpec::custom(std::shared_ptr<const CustomLoss> loss) {
  if (!loss || !loss->eval || !loss->deriv || loss->name.empty()) {
    throw ValidationError("custom loss requires a name, eval and deriv");
  }
  LossSpec spec(LossKind::custom, 0.0);
  spec.custom_ = std::move(loss);
  return spec;
}

LossSpec LossSpec::parse(std::string_view selector) {
  if (selector == "squared" || selector == "quadratic") return quadratic();
  if (selector == "entropy") return entropy();
  if (selector == "symmetric") return symmetric();
  constexpr std::string_view prefix = "linex:";
  if (selector.starts_with(prefix)) {
    const std::string text(selector.substr(prefix.size()));
    double alpha = 0.0;
    std::size_t used = 0;
    try {
      alpha = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw ValidationError("invalid linex alpha in loss selector '" + std::string(selector) + "'");
    }
    return linex(alpha);
  }
  throw ValidationError("unknown loss selector '" + std::string(selector) +
                        "' (expected squared|entropy|symmetric|linex:<alpha>)");
}

std::string LossSpec::name() const {
  switch (kind_) {
    case LossKind::quadratic: return "squared";
    case LossKind::entropy: return "entropy";
    case LossKind::symmetric: return "symmetric";
    case LossKind::linex: {
      std::ostringstream out;
      out << "linex:" << alpha_;
      return out.str();
    }
    case LossKind::custom: return custom_->name;
  }
  return "unknown";
}

double LossSpec::eval_unchecked(double t) const {
  switch (kind_) {
    case LossKind::quadratic: return (t - 1.0) * (t - 1.0);
    case LossKind::entropy: return t - std::log(t) - 1.0;
    case LossKind::symmetric: return t + 1.0 / t - 2.0;
    case LossKind::linex: {
      const double z = alpha_ * (t - 1.0);
      return std::expm1(z) - z;
    }
    case LossKind::custom: return custom_->eval(t);
  }
  return 0.0;
}

double LossSpec::deriv_unchecked(double t) const {
  switch (kind_) {
    case LossKind::quadratic: return 2.0 * (t - 1.0);
    case LossKind::entropy: return 1.0 - 1.0 / t;
    case LossKind::symmetric: return 1.0 - 1.0 / (t * t);
    case LossKind::linex: return alpha_ * std::expm1(alpha_ * (t - 1.0));
    case LossKind::custom: return custom_->deriv(t);
  }
  return 0.0;
}

double LossSpec::eval(double t) const {
  if (!(t > 0.0)) throw DomainError("loss argument must be positive");
  return eval_unchecked(t);
}

double LossSpec::deriv(double t) const {
  if (!(t > 0.0)) throw DomainError("loss argument must be positive");
  return deriv_unchecked(t);
}

bool LossSpec::operator==(const LossSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == LossKind::linex) return alpha_ == other.alpha_;
  if (kind_ == LossKind::custom) return custom_->name == other.custom_->name;
  return true;
}

double loss_eval(const LossSpec& spec, double t) { return spec.eval(t); }

double loss_deriv(const LossSpec& spec, double t) { return spec.deriv(t); }

std::optional<std::string> validate_loss_domain(const LossSpec& spec, double gamma_shape, double k) {
  if (!(k > 0.0)) return "power k must be positive";
  if (!(gamma_shape > 0.0)) return "gamma shape a must be positive";
  std::ostringstream why;
  switch (spec.kind()) {
    case LossKind::quadratic:
    case LossKind::custom:
      return std::nullopt;
    case LossKind::entropy:
      if (gamma_shape - k > 0.0) return std::nullopt;
      why << "entropy loss requires a-k>0 (a=" << gamma_shape << ", k=" << k << "): a-k<=0";
      return why.str();
    case LossKind::symmetric:
      if (gamma_shape - 2.0 * k > 0.0) return std::nullopt;
      why << "symmetric loss requires a-2k>0 (a=" << gamma_shape << ", k=" << k << "): a-2k<=0";
      return why.str();
    case LossKind::linex:
      // e^{α c y^k − y} is integrable for α < 0, for k < 1, and for k = 1 once cα < 1.
      if (spec.alpha() < 0.0 || k <= 1.0) return std::nullopt;
      why << "divergent linex integrand: alpha=" << spec.alpha() << " > 0 with k=" << k << " > 1";
      return why.str();
  }
  return std::nullopt;
}

void require_loss_domain(const LossSpec& spec, double gamma_shape, double k) {
  if (auto diagnostic = validate_loss_domain(spec, gamma_shape, k)) throw DomainError(*diagnostic);
}

}  // namespace ordexp
