#include "dynint/certify/residuals.hpp"

#include <algorithm>
#include <cmath>

namespace dynint {
namespace {

double max_of(std::initializer_list<double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

void require_domain(const SmoothMap& f, std::span<const double> x, long step) {
  if (!f.in_domain(x)) throw GuardViolation(f.name() + ": point outside the domain", step);
}

Vector apply_map(const SmoothMap& f, std::span<const double> x, long step) {
  require_domain(f, x, step);
  Vector y;
  try {
    y = f(x);
  } catch (const DomainError& e) {
    throw GuardViolation(std::string(e.what()), step + 1);
  }
  require_domain(f, y, step + 1);
  return y;
}

void require_even(std::size_t dim, const char* what) {
  if (dim % 2 != 0) throw DimensionError(std::string(what) + " needs an even-dimensional phase space");
}

}  // namespace

Measured lie_bracket_measured(const VectorField& xj, const VectorField& xk, std::span<const double> x,
                              DerivativeMode mode) {
  if (xj.dim() != xk.dim() || xj.dim() != x.size()) throw DimensionError("lie bracket dimension mismatch");
  const Vector vj = xj(x), vk = xk(x);
  const DenseMatrix dj = xj.jacobian(x, mode), dk = xk.jacobian(x, mode);
  const Vector a = dk * vj;
  const Vector b = dj * vk;
  Measured m;
  m.residual.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m.residual[i] = a[i] - b[i];
  m.scale = 1.0 + max_of({norm_inf(x), norm_inf(vj), norm_inf(vk), dk.norm_inf() * norm_inf(vj),
                          dj.norm_inf() * norm_inf(vk)});
  return m;
}

Vector lie_bracket_residual(const VectorField& xj, const VectorField& xk, std::span<const double> x,
                            DerivativeMode mode) {
  return lie_bracket_measured(xj, xk, x, mode).residual;
}

Measured first_integral_measured(const ScalarField& F, const VectorField& X, std::span<const double> x,
                                 DerivativeMode mode) {
  if (F.dim() != X.dim() || F.dim() != x.size()) throw DimensionError("first integral dimension mismatch");
  const Vector g = F.gradient(x, mode);
  const Vector v = X(x);
  Measured m;
  m.residual = {dot(g, v)};
  m.scale = 1.0 + max_of({norm_inf(x), std::fabs(F(x)), norm_inf(v), norm_1(g) * norm_inf(v)});
  return m;
}

double first_integral_residual(const ScalarField& F, const VectorField& X, std::span<const double> x,
                               DerivativeMode mode) {
  return first_integral_measured(F, X, x, mode).residual[0];
}

Measured map_invariance_measured(const ScalarField& F, const SmoothMap& f, std::span<const double> x) {
  if (F.dim() != f.dim() || x.size() != f.dim()) throw DimensionError("map invariance dimension mismatch");
  const Vector y = apply_map(f, x, 0);
  const double fx = F(x), fy = F(y);
  Measured m;
  m.residual = {fy - fx};
  m.scale = 1.0 + max_of({norm_inf(x), norm_inf(y), std::fabs(fx), std::fabs(fy)});
  return m;
}

double map_invariance_residual(const ScalarField& F, const SmoothMap& f, std::span<const double> x) {
  return map_invariance_measured(F, f, x).residual[0];
}

Measured infinitesimal_commutation_measured(const SmoothMap& f, const VectorField& X,
                                            std::span<const double> x, DerivativeMode mode) {
  if (X.dim() != f.dim() || x.size() != f.dim()) throw DimensionError("commutation dimension mismatch");
  const Vector y = apply_map(f, x, 0);
  const DenseMatrix df = f.jacobian(x, mode);
  const Vector vx = X(x), vy = X(y);
  const Vector push = df * vx;
  Measured m;
  m.residual.resize(push.size());
  for (std::size_t i = 0; i < push.size(); ++i) m.residual[i] = push[i] - vy[i];
  m.scale = 1.0 + max_of({norm_inf(x), norm_inf(y), norm_inf(vx), norm_inf(vy),
                          df.norm_inf() * norm_inf(vx)});
  return m;
}

Vector infinitesimal_commutation_residual(const SmoothMap& f, const VectorField& X,
                                          std::span<const double> x, DerivativeMode mode) {
  return infinitesimal_commutation_measured(f, X, x, mode).residual;
}

FlowBranchError::FlowBranchError(const std::string& branch, const IntegrationError& cause)
    : IntegrationError(branch + ": " + cause.what(), cause.time_reached()), branch_(branch) {}

Measured flow_commutation_measured(const SmoothMap& f, const VectorField& X, std::span<const double> x,
                                   double t, const IntegratorConfig& cfg) {
  if (X.dim() != f.dim() || x.size() != f.dim()) throw DimensionError("flow commutation dimension mismatch");
  const auto rhs = [&X](std::span<const double> p, std::span<double> d) { X.rhs(p, d); };
  // Circle coordinates are integrated in the lift; the guard sees reduced points.
  const auto safe = [&f](std::span<const double> p) {
    Vector r(p.begin(), p.end());
    reduce(r, f.topology());
    return f.in_domain(r);
  };
  require_domain(f, x, 0);

  Vector flowed;
  try {
    flowed = integrate_flow(rhs, x, t, cfg, safe);
  } catch (const IntegrationError& e) {
    throw FlowBranchError("f(phi_t(x))", e);
  } catch (const DomainError& e) {
    throw FlowBranchError("f(phi_t(x))", IntegrationError(e.what(), 0.0));
  }
  reduce(flowed, f.topology());
  const Vector lhs = apply_map(f, flowed, 0);

  const Vector fx = apply_map(f, x, 0);
  Vector rhs_point;
  try {
    rhs_point = integrate_flow(rhs, fx, t, cfg, safe);
  } catch (const IntegrationError& e) {
    throw FlowBranchError("phi_t(f(x))", e);
  } catch (const DomainError& e) {
    throw FlowBranchError("phi_t(f(x))", IntegrationError(e.what(), 0.0));
  }
  reduce(rhs_point, f.topology());

  Measured m;
  m.residual = difference(lhs, rhs_point, f.topology());
  m.scale = 1.0 + max_of({norm_inf(x), norm_inf(fx), norm_inf(flowed), norm_inf(lhs), norm_inf(rhs_point)});
  return m;
}

Vector flow_commutation_residual(const SmoothMap& f, const VectorField& X, std::span<const double> x,
                                 double t, const IntegratorConfig& cfg) {
  return flow_commutation_measured(f, X, x, t, cfg).residual;
}

Measured poisson_bracket_measured(const ScalarField& F, const ScalarField& G, std::span<const double> z) {
  require_even(z.size(), "poisson bracket");
  if (F.dim() != z.size() || G.dim() != z.size()) throw DimensionError("poisson bracket dimension mismatch");
  const std::size_t n = z.size() / 2;
  const Vector gf = F.gradient(z), gg = G.gradient(z);
  const std::span<const double> fq(gf.data(), n), fp(gf.data() + n, n);
  const std::span<const double> gq(gg.data(), n), gp(gg.data() + n, n);
  Measured m;
  m.residual = {dot(fq, gp) - dot(fp, gq)};
  m.scale = 1.0 + max_of({norm_inf(z), norm_1(gf) * norm_inf(gg)});
  return m;
}

double poisson_bracket(const ScalarField& F, const ScalarField& G, std::span<const double> z) {
  return poisson_bracket_measured(F, G, z).residual[0];
}

DenseMatrix canonical_symplectic_form(std::size_t dim) {
  require_even(dim, "symplectic form");
  const std::size_t n = dim / 2;
  DenseMatrix j(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

Measured symplecticity_measured(const SmoothMap& f, std::span<const double> z) {
  require_even(f.dim(), "symplecticity check");
  require_domain(f, z, 0);
  const DenseMatrix m = f.jacobian(z);
  const DenseMatrix j = canonical_symplectic_form(f.dim());
  const DenseMatrix d = m.transpose() * j * m - j;
  Measured out;
  out.residual.assign(d.data().begin(), d.data().end());
  const double mn = m.norm_inf();
  out.scale = 1.0 + mn * mn;
  return out;
}

double symplecticity_residual(const SmoothMap& f, std::span<const double> z) {
  return symplecticity_measured(f, z).max_abs();
}

}  // namespace dynint
