#pragma once

#include <span>
#include <string>

#include "dynint/core/fields.hpp"
#include "dynint/numerics/integrator.hpp"

namespace dynint {

// A residual together with the normalization it is judged against:
// scale = 1 + max of the magnitudes entering the identity.
struct Measured {
  Vector residual;
  double scale = 1.0;

  double max_abs() const { return norm_inf(residual); }
  double normalized() const { return max_abs() / scale; }
};

// [Xj, Xk](x) = DXk(x) Xj(x) - DXj(x) Xk(x).
Vector lie_bracket_residual(const VectorField& xj, const VectorField& xk, std::span<const double> x,
                            DerivativeMode mode = DerivativeMode::automatic);
Measured lie_bracket_measured(const VectorField& xj, const VectorField& xk, std::span<const double> x,
                              DerivativeMode mode = DerivativeMode::automatic);

// DF(x) . X(x)
double first_integral_residual(const ScalarField& F, const VectorField& X, std::span<const double> x,
                               DerivativeMode mode = DerivativeMode::automatic);
Measured first_integral_measured(const ScalarField& F, const VectorField& X, std::span<const double> x,
                                 DerivativeMode mode = DerivativeMode::automatic);

// F(f(x)) - F(x); throws GuardViolation when x or f(x) leaves the domain.
double map_invariance_residual(const ScalarField& F, const SmoothMap& f, std::span<const double> x);
Measured map_invariance_measured(const ScalarField& F, const SmoothMap& f, std::span<const double> x);

// Df(x) X(x) - X(f(x))
Vector infinitesimal_commutation_residual(const SmoothMap& f, const VectorField& X,
                                          std::span<const double> x,
                                          DerivativeMode mode = DerivativeMode::automatic);
Measured infinitesimal_commutation_measured(const SmoothMap& f, const VectorField& X,
                                            std::span<const double> x,
                                            DerivativeMode mode = DerivativeMode::automatic);

// Raised when one of the two trajectories of the flow check fails.
class FlowBranchError : public IntegrationError {
 public:
  FlowBranchError(const std::string& branch, const IntegrationError& cause);
  const std::string& branch() const { return branch_; }

 private:
  std::string branch_;
};

// f(phi^t(x)) - phi^t(f(x)), circle components folded to the shortest arc.
Vector flow_commutation_residual(const SmoothMap& f, const VectorField& X, std::span<const double> x,
                                 double t, const IntegratorConfig& cfg = {});
Measured flow_commutation_measured(const SmoothMap& f, const VectorField& X, std::span<const double> x,
                                   double t, const IntegratorConfig& cfg = {});

// Canonical bracket on z = (q_1..q_n, p_1..p_n):
// {F,G} = D_qF . D_pG - D_pF . D_qG.
double poisson_bracket(const ScalarField& F, const ScalarField& G, std::span<const double> z);
Measured poisson_bracket_measured(const ScalarField& F, const ScalarField& G, std::span<const double> z);

// J = [[0, I], [-I, 0]] on R^(2n).
DenseMatrix canonical_symplectic_form(std::size_t dim);

// Max-abs entry of M^T J M - J with M = Df(z).
double symplecticity_residual(const SmoothMap& f, std::span<const double> z);
Measured symplecticity_measured(const SmoothMap& f, std::span<const double> z);

}  // namespace dynint
