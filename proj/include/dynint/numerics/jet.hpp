#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>

#include "dynint/error.hpp"
#include "dynint/simd/kernels.hpp"

namespace dynint {

// Largest number of independent seeds a jet carries: a 16-dimensional base
// space lifted to its 32-dimensional cotangent bundle.
inline constexpr std::size_t kMaxSeeds = 32;

template <class T>
class Jet;

template <class T>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

inline double scalar_value(double x) { return x; }
template <class T>
double scalar_value(const Jet<T>& x) {
  return scalar_value(x.value());
}

// True when x carries no derivative information at any nesting level.
inline bool is_constant(double) { return true; }
template <class T>
bool is_constant(const Jet<T>& x) {
  return x.size() == 0 && is_constant(x.value());
}

namespace detail {

template <class T>
void lin_comb(T* out, const T& a, const T* x, const T& b, const T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    simd::active().axpby(out, a, x, b, y, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
  }
}

template <class T>
void scale(T* out, const T& a, const T* x, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    simd::active().scale(out, a, x, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
  }
}

template <class T>
void add(T* out, const T* x, const T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    simd::active().add(out, x, y, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
  }
}

template <class T>
void sub(T* out, const T* x, const T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    simd::active().sub(out, x, y, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
  }
}

}  // namespace detail

/// Forward-mode dual number: a value together with its partial derivatives
/// with respect to up to kMaxSeeds independent seeds.
///
/// Partials past size() are kept at zero, so constants carry no partials
/// and mixed-size operands combine over the longer prefix. Nesting
/// (Jet<Jet<double>>) yields second derivatives.
template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;
  Jet(double c) : value_(c) {}  // NOLINT(google-explicit-constructor)
  Jet(const T& c) requires(!std::is_same_v<T, double>) : value_(c) {}  // NOLINT

  static Jet variable(const T& value, std::size_t seeds, std::size_t index) {
    if (seeds > kMaxSeeds || index >= seeds)
      throw DimensionError("jet seed index " + std::to_string(index) + " outside " +
                           std::to_string(seeds) + " seeds (max " +
                           std::to_string(kMaxSeeds) + ")");
    Jet j(value);
    j.size_ = seeds;
    j.partials_[index] = T(1.0);
    return j;
  }

  const T& value() const { return value_; }
  T& value() { return value_; }
  std::size_t size() const { return size_; }
  const T& d(std::size_t i) const { return partials_[i]; }
  std::span<const T> partials() const { return {partials_.data(), size_}; }

  Jet operator-() const {
    Jet r(-value_);
    r.size_ = size_;
    detail::scale(r.partials_.data(), T(-1.0), partials_.data(), size_);
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.value_ + b.value_);
    r.size_ = std::max(a.size_, b.size_);
    detail::add(r.partials_.data(), a.partials_.data(), b.partials_.data(), r.size_);
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.value_ - b.value_);
    r.size_ = std::max(a.size_, b.size_);
    detail::sub(r.partials_.data(), a.partials_.data(), b.partials_.data(), r.size_);
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.value_ * b.value_);
    r.size_ = std::max(a.size_, b.size_);
    detail::lin_comb(r.partials_.data(), b.value_, a.partials_.data(), a.value_,
                     b.partials_.data(), r.size_);
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (scalar_value(b.value_) == 0.0) throw DomainError("jet division by zero");
    const T inv = T(1.0) / b.value_;
    const T q = a.value_ * inv;
    Jet r(q);
    r.size_ = std::max(a.size_, b.size_);
    detail::lin_comb(r.partials_.data(), inv, a.partials_.data(), -(q * inv),
                     b.partials_.data(), r.size_);
    return r;
  }

  // Mixed operations with plain constants skip the zero partials.
  friend Jet operator+(const Jet& a, double c) { Jet r = a; r.value_ = a.value_ + c; return r; }
  friend Jet operator+(double c, const Jet& a) { return a + c; }
  friend Jet operator-(const Jet& a, double c) { Jet r = a; r.value_ = a.value_ - c; return r; }
  friend Jet operator-(double c, const Jet& a) { Jet r = -a; r.value_ = c - a.value_; return r; }
  friend Jet operator*(const Jet& a, double c) {
    Jet r(a.value_ * c);
    r.size_ = a.size_;
    detail::scale(r.partials_.data(), T(c), a.partials_.data(), a.size_);
    return r;
  }
  friend Jet operator*(double c, const Jet& a) { return a * c; }
  friend Jet operator/(const Jet& a, double c) {
    if (c == 0.0) throw DomainError("jet division by zero");
    return a * (1.0 / c);
  }
  friend Jet operator/(double c, const Jet& a) { return Jet(c) / a; }

  // Chain rule for a unary function with value fx and derivative dfx at value().
  Jet chain(const T& fx, const T& dfx) const {
    Jet r(fx);
    r.size_ = size_;
    detail::scale(r.partials_.data(), dfx, partials_.data(), size_);
    return r;
  }

 private:
  T value_{};
  std::array<T, kMaxSeeds> partials_{};
  std::size_t size_ = 0;
};

// Comparisons look at the underlying value only.
template <class T>
bool operator<(const Jet<T>& a, const Jet<T>& b) { return scalar_value(a) < scalar_value(b); }
template <class T>
bool operator>(const Jet<T>& a, const Jet<T>& b) { return scalar_value(a) > scalar_value(b); }
template <class T>
bool operator<(const Jet<T>& a, double b) { return scalar_value(a) < b; }
template <class T>
bool operator>(const Jet<T>& a, double b) { return scalar_value(a) > b; }

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  const T e = exp(a.value());
  return a.chain(e, e);
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  if (!(scalar_value(a) > 0.0)) throw DomainError("log of non-positive value");
  return a.chain(log(a.value()), T(1.0) / a.value());
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
  using std::cos;
  using std::sin;
  return a.chain(sin(a.value()), cos(a.value()));
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
  using std::cos;
  using std::sin;
  return a.chain(cos(a.value()), -sin(a.value()));
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  const double v = scalar_value(a);
  if (v < 0.0 || (v == 0.0 && a.size() > 0)) throw DomainError("sqrt at non-positive value");
  const T s = sqrt(a.value());
  return a.chain(s, T(0.5) / s);
}

template <class T>
Jet<T> pow(const Jet<T>& a, double e) {
  using std::pow;
  const double v = scalar_value(a);
  const bool integral = e == std::floor(e);
  if (v < 0.0 && !integral) throw DomainError("non-integer power of negative value");
  if (v == 0.0 && e < 1.0 && e != 0.0) throw DomainError("power singular at zero");
  if (e == 0.0) return Jet<T>(1.0);
  return a.chain(pow(a.value(), e), T(e) * pow(a.value(), e - 1.0));
}

template <class T>
Jet<T> pow(const Jet<T>& a, const Jet<T>& b) {
  if (is_constant(b)) return pow(a, scalar_value(b));
  return exp(b * log(a));
}

}  // namespace dynint
