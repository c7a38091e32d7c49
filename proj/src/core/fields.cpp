#include "dynint/core/fields.hpp"

#include <cmath>

namespace dynint {

VectorField::VectorField(VectorFunction fn) : fn_(std::move(fn)) {
  if (fn_.in_dim() != fn_.out_dim())
    throw DimensionError(fn_.name() + ": a vector field must map R^n to R^n");
}

ScalarField::ScalarField(std::string name, std::size_t dim, ScalarFn<double> eval,
                         ScalarFn<Jet1> eval_jet, ScalarFn<Jet2> eval_jet2,
                         GradientFn analytic_gradient)
    : name_(std::move(name)),
      dim_(dim),
      eval_(std::move(eval)),
      eval_jet_(std::move(eval_jet)),
      eval_jet2_(std::move(eval_jet2)),
      analytic_gradient_(std::move(analytic_gradient)) {
  if (!eval_) throw ConfigError(name_ + ": missing evaluator");
  if (dim_ > kMaxSeeds) throw DimensionError(name_ + ": dimension exceeds jet capacity");
}

Vector ScalarField::gradient(std::span<const double> x, DerivativeMode mode) const {
  if (x.size() != dim_) throw DimensionError(name_ + ": gradient at point of wrong dimension");
  if (mode == DerivativeMode::automatic && eval_jet_) {
    std::vector<Jet1> xj(dim_);
    for (std::size_t i = 0; i < dim_; ++i) xj[i] = Jet1::variable(x[i], dim_, i);
    const Jet1 v = eval_jet_(xj);
    Vector g(dim_);
    for (std::size_t i = 0; i < dim_; ++i) g[i] = v.d(i);
    return g;
  }
  if (mode == DerivativeMode::automatic && analytic_gradient_) return analytic_gradient_(x);
  if (mode == DerivativeMode::automatic)
    throw DerivativeUnavailable(name_ + " is a black box; request finite differences explicitly");
  const auto m = finite_difference_jacobian(
      [this](std::span<const double> p, std::span<double> o) { o[0] = eval_(p); }, 1, x);
  return Vector(m.row(0).begin(), m.row(0).end());
}

std::vector<Jet1> ScalarField::gradient(std::span<const Jet1> x) const {
  if (!eval_jet2_) throw DerivativeUnavailable(name_ + " has no second-order jet evaluator");
  std::vector<Jet2> xj(dim_);
  for (std::size_t i = 0; i < dim_; ++i) xj[i] = Jet2::variable(x[i], dim_, i);
  const Jet2 v = eval_jet2_(xj);
  std::vector<Jet1> g(dim_);
  for (std::size_t i = 0; i < dim_; ++i) g[i] = v.d(i);
  return g;
}

VectorFunction ScalarField::as_function() const {
  VecFn<Jet1> j1;
  VecFn<Jet2> j2;
  if (eval_jet_) j1 = [f = eval_jet_](std::span<const Jet1> x, std::span<Jet1> o) { o[0] = f(x); };
  if (eval_jet2_) j2 = [f = eval_jet2_](std::span<const Jet2> x, std::span<Jet2> o) { o[0] = f(x); };
  JacobianFn jac;
  if (analytic_gradient_)
    jac = [g = analytic_gradient_, n = dim_](std::span<const double> x) {
      DenseMatrix m(1, n);
      const auto v = g(x);
      for (std::size_t i = 0; i < n; ++i) m(0, i) = v[i];
      return m;
    };
  return VectorFunction(
      name_, dim_, 1, [f = eval_](std::span<const double> x, std::span<double> o) { o[0] = f(x); },
      std::move(j1), std::move(j2), std::move(jac));
}

SmoothMap::SmoothMap(VectorFunction forward, Topology topology, PointPredicate guard)
    : forward_(std::move(forward)), topology_(std::move(topology)), guard_(std::move(guard)) {
  if (forward_.in_dim() != forward_.out_dim())
    throw DimensionError(forward_.name() + ": a diffeomorphism must map R^n to R^n");
  if (topology_.empty()) topology_ = euclidean(forward_.in_dim());
  if (topology_.size() != forward_.in_dim())
    throw DimensionError(forward_.name() + ": topology has wrong dimension");
}

SmoothMap& SmoothMap::with_inverse(VectorFunction inverse) {
  if (inverse.in_dim() != dim() || inverse.out_dim() != dim())
    throw DimensionError(name() + ": inverse has wrong dimension");
  inverse_ = std::move(inverse);
  return *this;
}

SmoothMap& SmoothMap::with_invariant_region(bool declared) {
  invariant_region_ = declared;
  return *this;
}

bool SmoothMap::has_circle_coordinates() const {
  for (const auto& c : topology_)
    if (c.is_circle()) return true;
  return false;
}

bool SmoothMap::in_domain(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return !guard_ || guard_(x);
}

Vector SmoothMap::operator()(std::span<const double> x) const {
  Vector y = forward_(x);
  reduce(y, topology_);
  return y;
}

Vector SmoothMap::inverse(std::span<const double> x) const {
  if (!inverse_) throw ConfigError(name() + " has no inverse");
  Vector y = (*inverse_)(x);
  reduce(y, topology_);
  return y;
}

}  // namespace dynint
