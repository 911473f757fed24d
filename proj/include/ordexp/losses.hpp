#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ordexp {

enum class LossKind { quadratic, entropy, symmetric, linex, custom };

/// A user-supplied bowl-shaped loss. `name` identifies it in caches and output,
/// so distinct losses need distinct names.
struct CustomLoss {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
};

/// Scale-invariant loss L(t), t = estimate / estimand, with L(1) = L'(1) = 0.
class LossSpec {
 public:
  /// Quadratic loss (t − 1)².
  static LossSpec quadratic() { return LossSpec(LossKind::quadratic, 0.0); }
  /// Entropy (Stein) loss t − ln t − 1.
  static LossSpec entropy() { return LossSpec(LossKind::entropy, 0.0); }
  /// Symmetric loss t + 1/t − 2.
  static LossSpec symmetric() { return LossSpec(LossKind::symmetric, 0.0); }
  /// Linex loss e^{α(t−1)} − α(t−1) − 1; α must be nonzero.
  static LossSpec linex(double alpha);
  static LossSpec custom(std::shared_ptr<const CustomLoss> loss);

  /// Parses `squared|quadratic|entropy|symmetric|linex:<alpha>`.
  static LossSpec parse(std::string_view selector);

  LossKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }

  /// Selector string, e.g. "squared" or "linex:-1".
  std::string name() const;

  double eval(double t) const;
  double deriv(double t) const;

  /// Same computations as eval/deriv without the domain check, for hot loops
  /// whose arguments are positive by construction.
  double eval_unchecked(double t) const;
  double deriv_unchecked(double t) const;

  bool operator==(const LossSpec& other) const;

 private:
  LossSpec(LossKind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  LossKind kind_;
  double alpha_;
  std::shared_ptr<const CustomLoss> custom_;
};

double loss_eval(const LossSpec& spec, double t);
double loss_deriv(const LossSpec& spec, double t);

/// Checks that E[L'(c·Y^k)] with Y ~ Gamma(a, 1) has a convergent integrand.
/// Returns a diagnostic naming the violated condition, or nothing when valid.
std::optional<std::string> validate_loss_domain(const LossSpec& spec, double gamma_shape, double k);

/// Throws DomainError with the diagnostic from validate_loss_domain.
void require_loss_domain(const LossSpec& spec, double gamma_shape, double k);

}  // namespace ordexp
