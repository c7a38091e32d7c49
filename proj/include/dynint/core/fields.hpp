#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "dynint/core/function.hpp"
#include "dynint/core/topology.hpp"
#include "dynint/numerics/integrator.hpp"

namespace dynint {

using GradientFn = std::function<Vector(std::span<const double> x)>;

// X: R^n -> R^n.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(VectorFunction fn);

  template <class Fn>
  static VectorField generic(std::string name, std::size_t dim, Fn fn) {
    return VectorField(VectorFunction::generic(std::move(name), dim, dim, std::move(fn)));
  }

  const std::string& name() const { return fn_.name(); }
  std::size_t dim() const { return fn_.in_dim(); }
  bool black_box() const { return fn_.black_box(); }

  Vector operator()(std::span<const double> x) const { return fn_(x); }
  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    return fn_.eval<T>(x);
  }
  DenseMatrix jacobian(std::span<const double> x, DerivativeMode mode = DerivativeMode::automatic) const {
    return fn_.jacobian(x, mode);
  }
  const VectorFunction& function() const { return fn_; }

  // Right-hand side for integrate_flow.
  void rhs(std::span<const double> x, std::span<double> dx) const { fn_.eval<double>(x, dx); }

 private:
  VectorFunction fn_;
};

// F: R^n -> R.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::string name, std::size_t dim, ScalarFn<double> eval, ScalarFn<Jet1> eval_jet = {},
              ScalarFn<Jet2> eval_jet2 = {}, GradientFn analytic_gradient = {});

  template <class Fn>
  static ScalarField generic(std::string name, std::size_t dim, Fn fn) {
    return ScalarField(
        std::move(name), dim, [fn](std::span<const double> x) { return fn(x); },
        [fn](std::span<const Jet1> x) { return fn(x); },
        [fn](std::span<const Jet2> x) { return fn(x); });
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  bool black_box() const { return !eval_jet_; }

  double operator()(std::span<const double> x) const { return eval<double>(x); }

  template <class T>
  T eval(std::span<const T> x) const {
    if (x.size() != dim_)
      throw DimensionError(name_ + ": expected " + std::to_string(dim_) + " coordinates");
    if constexpr (std::is_same_v<T, double>) {
      return eval_(x);
    } else if constexpr (std::is_same_v<T, Jet1>) {
      if (!eval_jet_) throw DerivativeUnavailable(name_ + " is not evaluable on jets");
      return eval_jet_(x);
    } else {
      if (!eval_jet2_) throw DerivativeUnavailable(name_ + " has no second-order jet evaluator");
      return eval_jet2_(x);
    }
  }

  Vector gradient(std::span<const double> x, DerivativeMode mode = DerivativeMode::automatic) const;
  // Gradient at a jet point (second-order information).
  std::vector<Jet1> gradient(std::span<const Jet1> x) const;

  // View as a 1 x n vector function.
  VectorFunction as_function() const;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  ScalarFn<double> eval_;
  ScalarFn<Jet1> eval_jet_;
  ScalarFn<Jet2> eval_jet2_;
  GradientFn analytic_gradient_;
};

/// A diffeomorphism of a box-with-circles phase space, given as a total
/// formula plus a guard predicate marking where the formula is valid.
class SmoothMap {
 public:
  SmoothMap() = default;
  SmoothMap(VectorFunction forward, Topology topology = {}, PointPredicate guard = {});

  SmoothMap& with_inverse(VectorFunction inverse);
  // The forward image of a guarded point is again guarded.
  SmoothMap& with_invariant_region(bool declared = true);

  const std::string& name() const { return forward_.name(); }
  std::size_t dim() const { return forward_.in_dim(); }
  const Topology& topology() const { return topology_; }
  bool has_circle_coordinates() const;
  bool has_inverse() const { return inverse_.has_value(); }
  bool invariant_region_declared() const { return invariant_region_; }

  bool in_domain(std::span<const double> x) const;

  // f(x) with circle coordinates reduced.
  Vector operator()(std::span<const double> x) const;
  // Raw formula value: the lift for circle coordinates.
  Vector lift(std::span<const double> x) const { return forward_(x); }
  Vector inverse(std::span<const double> x) const;

  DenseMatrix jacobian(std::span<const double> x, DerivativeMode mode = DerivativeMode::automatic) const {
    return forward_.jacobian(x, mode);
  }

  const VectorFunction& forward() const { return forward_; }
  const std::optional<VectorFunction>& inverse_function() const { return inverse_; }
  const PointPredicate& guard() const { return guard_; }

 private:
  VectorFunction forward_;
  std::optional<VectorFunction> inverse_;
  Topology topology_;
  PointPredicate guard_;
  bool invariant_region_ = false;
};

}  // namespace dynint
