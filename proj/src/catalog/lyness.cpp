#include <algorithm>
#include <cmath>
#include <type_traits>
#include <sstream>

#include "dynint/catalog/catalog.hpp"
#include "dynint/certify/residuals.hpp"
#include "dynint/core/parallel.hpp"

namespace dynint {
namespace {

void check_n(std::size_t n) {
  if (n < 2 || n > 5) throw ConfigError("lyness needs n in [2, 5]");
}

template <class T>
T product_of(std::span<const T> x) {
  T p(1.0);
  for (const auto& v : x) p = p * v;
  return p;
}

template <class T>
T sum_range(std::span<const T> x, std::size_t from, std::size_t to) {
  // 1-based inclusive
  T s(0.0);
  for (std::size_t j = from; j <= to; ++j) s = s + x[j - 1];
  return s;
}

// prod (x_j + x_{j+1} + 1) over j in [from, to], 1-based, skipping `skip`.
template <class T>
T chain_product(std::span<const T> x, std::size_t from, std::size_t to, std::size_t skip_a = 0,
                std::size_t skip_b = 0) {
  T p(1.0);
  for (std::size_t j = from; j <= to; ++j) {
    if (j == skip_a || j == skip_b) continue;
    p = p * (x[j - 1] + x[j] + 1.0);
  }
  return p;
}

template <class T>
T f1(std::span<const T> x, double a) {
  const std::size_t n = x.size();
  T num = sum_range(x, 1, n) + a;
  for (const auto& v : x) num = num * (v + 1.0);
  return num / product_of(x);
}

template <class T>
T f2(std::span<const T> x, double a) {
  const std::size_t n = x.size();
  const T lead = sum_range(x, 1, n) + x[0] * x[n - 1] + a;
  return lead * chain_product(x, 1, lyness_f2_bound(n)) / product_of(x);
}

template <class T>
T f3(std::span<const T> x, double a) {
  const std::size_t n = x.size();
  const std::size_t k = (n - 1) / 2;
  T odd(1.0);
  for (std::size_t j = 0; j <= k; ++j) odd = odd * x[2 * j] * (x[2 * j] + 1.0);
  T even(1.0);
  for (std::size_t j = 1; j <= k; ++j) even = even * x[2 * j - 1] * (x[2 * j - 1] + 1.0);
  return (odd + (sum_range(x, 1, n) + a) * even) / product_of(x);
}

}  // namespace

std::size_t lyness_f2_bound(std::size_t n) { return n - 1; }

SmoothMap lyness_map(std::size_t n, double a) {
  check_n(n);
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("lyness needs a > 0");
  SmoothMap f(VectorFunction::generic("lyness", n, n, [n, a](auto x, auto out) {
    using T = std::decay_t<decltype(out[0])>;
    T s(a);
    for (std::size_t j = 1; j < n; ++j) s = s + x[j];
    const T last = s / x[0];
    for (std::size_t j = 0; j + 1 < n; ++j) out[j] = x[j + 1];
    out[n - 1] = last;
  }),
              euclidean(n), [](std::span<const double> x) {
                return std::all_of(x.begin(), x.end(), [](double v) { return v > 1e-3; });
              });
  f.with_inverse(VectorFunction::generic("lyness^-1", n, n, [n, a](auto x, auto out) {
    using T = std::decay_t<decltype(out[0])>;
    T s(a);
    for (std::size_t j = 0; j + 1 < n; ++j) s = s + x[j];
    const T first = s / x[n - 1];
    for (std::size_t j = n - 1; j > 0; --j) out[j] = x[j - 1];
    out[0] = first;
  }));
  return f;
}

std::vector<ScalarField> lyness_integrals(std::size_t n, double a) {
  check_n(n);
  std::vector<ScalarField> out;
  out.push_back(ScalarField::generic("F1", n, [a](auto x) { return f1(x, a); }));
  if (n >= 3) out.push_back(ScalarField::generic("F2", n, [a](auto x) { return f2(x, a); }));
  if (n % 2 == 1) out.push_back(ScalarField::generic("F3", n, [a](auto x) { return f3(x, a); }));
  return out;
}

double lyness_f3(std::size_t n, double a, std::span<const double> x) {
  if (n % 2 == 0) throw ConfigError("F3 exists only for odd n");
  if (x.size() != n) throw DimensionError("lyness point has wrong dimension");
  return f3(x, a);
}

std::vector<double> lyness_integral_values(std::size_t n, double a, std::span<const double> x) {
  check_n(n);
  if (x.size() != n) throw DimensionError("lyness point has wrong dimension");
  for (double v : x)
    if (!(v > 0.0)) throw DomainError("lyness integrals need a point in the positive orthant");
  std::vector<double> out{f1(x, a)};
  if (n >= 3) out.push_back(f2(x, a));
  if (n % 2 == 1) out.push_back(f3(x, a));
  return out;
}

std::string LynessVariant::describe() const {
  std::vector<std::string> parts;
  if (flip_first_product) parts.push_back("v11:+x2xn");
  if (flip_last_product) parts.push_back("v1n:+x1x(n-1)");
  if (flip_middle_product) parts.push_back("v1l:-x1xn");
  if (swap_middle_difference) parts.push_back("v1l:(x(l+1)-x(l-1))");
  if (first_sum_to_n) parts.push_back("v11:sum1..n");
  if (last_sum_from_1) parts.push_back("v1n:sum1..n-1");
  if (middle_sum_to_n) parts.push_back("v1l:sum1..n");
  if (parts.empty()) return "printed";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

VectorField lyness_symmetry(std::size_t n, const LynessVariant& v) {
  check_n(n);
  if (n < 3) throw ConfigError("the printed lyness symmetry needs n >= 3");
  return VectorField::generic("v1", n, [n, v](auto x, auto out) {
    using T = std::decay_t<decltype(out[0])>;
    const T den = product_of(x);
    {
      const T s = sum_range(x, 1, v.first_sum_to_n ? n : n - 1);
      const T t = v.flip_first_product ? s + x[1] * x[n - 1] : s - x[1] * x[n - 1];
      out[0] = (x[0] + 1.0) * t * chain_product(x, 2, n - 1) / den;
    }
    {
      const T s = sum_range(x, v.last_sum_from_1 ? 1 : 2, n - 1);
      const T t = v.flip_last_product ? s + x[0] * x[n - 2] : s - x[0] * x[n - 2];
      out[n - 1] = (x[n - 1] + 1.0) * t * chain_product(x, 1, n - 2) / den;
    }
    const T s = sum_range(x, 1, v.middle_sum_to_n ? n : n - 1);
    const T t = v.flip_middle_product ? s - x[0] * x[n - 1] : s + x[0] * x[n - 1];
    for (std::size_t l = 2; l <= n - 1; ++l) {
      const T diff = v.swap_middle_difference ? x[l] - x[l - 2] : x[l - 2] - x[l];
      out[l - 1] = (x[l - 1] + 1.0) * t * diff * chain_product(x, 1, n - 1, l - 1, l) / den;
    }
  });
}

VariantSearchReport lyness_variant_search(std::size_t n, double a, std::size_t max_variants,
                                          std::size_t points, std::uint64_t seed) {
  check_n(n);
  if (max_variants < 1 || max_variants > 128) throw ConfigError("variant count must be in [1, 128]");
  const SmoothMap f = lyness_map(n, a);
  SamplingRegion region{Vector(n, 0.1), Vector(n, 10.0), 0.0, f.guard(), points, seed};
  const auto xs = sample(region, points);

  VariantSearchReport rep;
  rep.n = n;
  rep.a = a;
  rep.points = points;
  rep.scores.resize(max_variants);
  parallel_for(max_variants, [&](std::size_t i) {
    LynessVariant v;
    v.flip_first_product = i & 1;
    v.flip_last_product = i & 2;
    v.flip_middle_product = i & 4;
    v.swap_middle_difference = i & 8;
    v.first_sum_to_n = i & 16;
    v.last_sum_from_1 = i & 32;
    v.middle_sum_to_n = i & 64;
    const VectorField field = lyness_symmetry(n, v);
    double worst = 0.0;
    for (const auto& x : xs) {
      const double r = infinitesimal_commutation_measured(f, field, x).normalized();
      if (!(r <= worst)) worst = r;
    }
    rep.scores[i] = {v, v.describe(), worst};
  });
  for (std::size_t i = 1; i < rep.scores.size(); ++i)
    if (rep.scores[i].max_residual < rep.scores[rep.best].max_residual) rep.best = i;
  return rep;
}

}  // namespace dynint
