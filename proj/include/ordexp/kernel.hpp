#pragma once

#include <functional>
#include <optional>

#include "ordexp/losses.hpp"
#include "ordexp/model.hpp"
#include "ordexp/numerics.hpp"

namespace ordexp {

/// Solve E[L'(c·Y^k)] = 0 for Y ~ Gamma(gamma_shape, 1).
struct MultiplierQuery {
  double gamma_shape = 1.0;
  double k = 1.0;
  LossSpec loss = LossSpec::quadratic();
};

/// The multiplier c. Uses the closed form for quadratic, entropy and
/// symmetric losses and the generic path otherwise. Results are cached per
/// (shape, k, loss); the cache is safe to use from several threads.
double psi_solve(const MultiplierQuery& query);

/// Closed-form multiplier, or nothing for linex and custom losses.
std::optional<double> psi_closed_form(const MultiplierQuery& query);

/// Always solves by quadrature plus Brent, whatever the loss.
double psi_solve_generic(const MultiplierQuery& query,
                         const numerics::QuadratureSpec& spec = {});

/// E[L'(c·Y^k)] with Y ~ Gamma(a, 1); zero at the solution.
double psi_residual(const MultiplierQuery& query, double c,
                    const numerics::QuadratureSpec& spec = {});

/// Root in c of ∫₀^∞ L'(c·v^k)·weight(v) dv = 0 for a nonnegative weight.
///
/// The equation is increasing in c because L' is. The root is searched in
/// ln c from [1e-10, B] with B grown ×4 until a sign change. `scale` is a
/// hint for where the weight has its mass. For linex with α > 0 and k = 1
/// the search stays below c = 1/α, where the integral diverges.
double solve_weighted_multiplier(const LossSpec& loss, double k,
                                 const std::function<double(double)>& weight, double scale,
                                 const numerics::QuadratureSpec& spec = {});

/// Best affine equivariant multiplier d₀ for a population of size p:
/// psi_solve at shape p + k − 1.
double baee_constant(int p, const EstimationConfig& cfg);

/// UMVUE multiplier Γ(p − 1) / Γ(p + k − 1).
double umvue_constant(int p, double k);

/// Drops every cached constant. Only tests need this.
void clear_constant_cache();

/// A constant that may be undefined for the configuration at hand. Holds
/// either the value or the diagnostic explaining why it is unavailable;
/// reading an unavailable constant throws DomainError.
class CheckedConstant {
 public:
  template <class F>
  static CheckedConstant compute(F&& f) {
    CheckedConstant out;
    try {
      out.value_ = f();
    } catch (const Error& e) {
      out.diagnostic_ = e.what();
    }
    return out;
  }

  bool ok() const noexcept { return value_.has_value(); }
  const std::string& diagnostic() const noexcept { return diagnostic_; }

  double value() const {
    if (!value_) throw DomainError(diagnostic_);
    return *value_;
  }

 private:
  std::optional<double> value_;
  std::string diagnostic_;
};

}  // namespace ordexp
