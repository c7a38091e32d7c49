#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynint/error.hpp"
#include "dynint/numerics/jet.hpp"
#include "dynint/numerics/matrix.hpp"

namespace dynint {

using Jet1 = Jet<double>;
using Jet2 = Jet<Jet<double>>;

template <class T>
using VecFn = std::function<void(std::span<const T> x, std::span<T> out)>;
template <class T>
using ScalarFn = std::function<T(std::span<const T> x)>;

using JacobianFn = std::function<DenseMatrix(std::span<const double> x)>;

enum class DerivativeMode {
  automatic,          // jets, else the analytic Jacobian
  finite_difference,  // explicit opt-in for black-box callables
};

/// An evaluable map R^in -> R^out.
///
/// The double evaluator is mandatory. The first-order jet evaluator makes
/// Jacobians exact; the nested one supplies second derivatives, which the
/// cotangent lift needs to differentiate Df. A function without a jet
/// evaluator is a black box and differentiates only through an analytic
/// Jacobian or the finite-difference opt-in.
class VectorFunction {
 public:
  VectorFunction() = default;
  VectorFunction(std::string name, std::size_t in_dim, std::size_t out_dim, VecFn<double> eval,
                 VecFn<Jet1> eval_jet = {}, VecFn<Jet2> eval_jet2 = {},
                 JacobianFn analytic_jacobian = {});

  // fn must accept (std::span<const T>, std::span<T>) for T in
  // {double, Jet1, Jet2}; a generic lambda does.
  template <class Fn>
  static VectorFunction generic(std::string name, std::size_t in_dim, std::size_t out_dim, Fn fn) {
    return VectorFunction(
        std::move(name), in_dim, out_dim,
        [fn](std::span<const double> x, std::span<double> o) { fn(x, o); },
        [fn](std::span<const Jet1> x, std::span<Jet1> o) { fn(x, o); },
        [fn](std::span<const Jet2> x, std::span<Jet2> o) { fn(x, o); });
  }

  const std::string& name() const { return name_; }
  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  bool has_jet() const { return static_cast<bool>(eval_jet_); }
  bool has_jet2() const { return static_cast<bool>(eval_jet2_); }
  bool has_analytic_jacobian() const { return static_cast<bool>(analytic_jacobian_); }
  bool black_box() const { return !has_jet(); }

  Vector operator()(std::span<const double> x) const;

  template <class T>
  void eval(std::span<const T> x, std::span<T> out) const {
    check_in(x.size());
    if (out.size() != out_dim_) throw DimensionError(name_ + ": output buffer has wrong size");
    if constexpr (std::is_same_v<T, double>) {
      eval_(x, out);
    } else if constexpr (std::is_same_v<T, Jet1>) {
      if (!eval_jet_) throw DerivativeUnavailable(name_ + " is not evaluable on jets");
      eval_jet_(x, out);
    } else {
      if (!eval_jet2_) throw DerivativeUnavailable(name_ + " has no second-order jet evaluator");
      eval_jet2_(x, out);
    }
  }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    std::vector<T> out(out_dim_);
    eval<T>(x, std::span<T>(out));
    return out;
  }

  DenseMatrix jacobian(std::span<const double> x,
                       DerivativeMode mode = DerivativeMode::automatic) const;

  // Row-major out_dim x in_dim Jacobian at a jet point: entries carry the
  // derivatives of Df with respect to the outer seeds.
  std::vector<Jet1> jacobian(std::span<const Jet1> x) const;

  const VecFn<double>& double_evaluator() const { return eval_; }
  const VecFn<Jet1>& jet_evaluator() const { return eval_jet_; }
  const VecFn<Jet2>& jet2_evaluator() const { return eval_jet2_; }
  const JacobianFn& analytic_jacobian() const { return analytic_jacobian_; }

 private:
  void check_in(std::size_t n) const {
    if (n != in_dim_)
      throw DimensionError(name_ + ": expected " + std::to_string(in_dim_) +
                           " coordinates, got " + std::to_string(n));
  }

  std::string name_;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  VecFn<double> eval_;
  VecFn<Jet1> eval_jet_;
  VecFn<Jet2> eval_jet2_;
  JacobianFn analytic_jacobian_;
};

// Central differences with h = eps^(1/3) * max(1, |x_i|); O(h^2) accurate.
DenseMatrix finite_difference_jacobian(const VecFn<double>& f, std::size_t out_dim,
                                       std::span<const double> x);

}  // namespace dynint
