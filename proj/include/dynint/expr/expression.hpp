#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynint/error.hpp"
#include "dynint/numerics/jet.hpp"

namespace dynint::expr {

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ConfigError(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Maps an identifier to a variable slot.
using VariableResolver = std::function<std::optional<std::size_t>(std::string_view)>;

// x1..xn on R^n; on a phase space R^(2n) also p1..pn for slots n..2n-1.
VariableResolver coordinate_resolver(std::size_t dim, bool phase_space);
// p1..pn only, slots 0..n-1 (a Hamiltonian of the momenta).
VariableResolver momentum_resolver(std::size_t n);

enum class Op { constant, variable, add, sub, mul, div, neg, pow, exp, log, sin, cos, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::constant;
  double value = 0.0;
  std::size_t slot = 0;
  NodePtr lhs;
  NodePtr rhs;
};

/// A parsed arithmetic expression over + - * / ^, pow, exp, log, sin, cos
/// and sqrt, compiled to a postfix program that evaluates on doubles or
/// jets of any nesting depth.
class Expression {
 public:
  Expression() = default;
  static Expression parse(std::string_view text, const VariableResolver& resolve);
  static Expression from_tree(NodePtr root);

  // Symbolic partial derivative with light constant folding.
  Expression derivative(std::size_t slot) const;

  // Largest referenced slot + 1 (0 for constants).
  std::size_t arity() const { return arity_; }
  std::string to_string() const;
  const NodePtr& root() const { return root_; }

  template <class T>
  T eval(std::span<const T> vars) const;

 private:
  struct Instr {
    Op op;
    double value;
    std::size_t slot;
  };
  void compile();

  NodePtr root_;
  std::vector<Instr> program_;
  std::size_t arity_ = 0;
};

template <class T>
T Expression::eval(std::span<const T> vars) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  if (vars.size() < arity_)
    throw DimensionError("expression needs " + std::to_string(arity_) + " variables");
  std::vector<T> stack;
  stack.reserve(program_.size());
  auto pop = [&stack]() {
    T v = std::move(stack.back());
    stack.pop_back();
    return v;
  };
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::constant:
        stack.emplace_back(ins.value);
        break;
      case Op::variable:
        stack.push_back(vars[ins.slot]);
        break;
      case Op::neg:
        stack.back() = -stack.back();
        break;
      case Op::exp:
        stack.back() = exp(stack.back());
        break;
      case Op::log:
        if (!(scalar_value(stack.back()) > 0.0)) throw DomainError("log of non-positive value");
        stack.back() = log(stack.back());
        break;
      case Op::sin:
        stack.back() = sin(stack.back());
        break;
      case Op::cos:
        stack.back() = cos(stack.back());
        break;
      case Op::sqrt:
        if (scalar_value(stack.back()) < 0.0) throw DomainError("sqrt of negative value");
        stack.back() = sqrt(stack.back());
        break;
      default: {
        T b = pop();
        T a = pop();
        switch (ins.op) {
          case Op::add:
            stack.push_back(a + b);
            break;
          case Op::sub:
            stack.push_back(a - b);
            break;
          case Op::mul:
            stack.push_back(a * b);
            break;
          case Op::div:
            if (scalar_value(b) == 0.0) throw DomainError("division by zero");
            stack.push_back(a / b);
            break;
          case Op::pow: {
            const double e = scalar_value(b);
            if (scalar_value(a) < 0.0 && e != std::floor(e))
              throw DomainError("non-integer power of negative value");
            if (scalar_value(a) == 0.0 && e < 0.0) throw DomainError("negative power of zero");
            stack.push_back(pow(a, b));
            break;
          }
          default:
            throw ConfigError("corrupt expression program");
        }
        break;
      }
    }
  }
  if (stack.size() != 1) throw ConfigError("corrupt expression program");
  return stack.back();
}

}  // namespace dynint::expr
