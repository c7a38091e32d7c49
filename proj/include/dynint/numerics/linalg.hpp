#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dynint/error.hpp"
#include "dynint/numerics/jet.hpp"
#include "dynint/numerics/matrix.hpp"

namespace dynint {

inline constexpr double kDefaultRankThreshold = 1e-8;
inline constexpr double kHyperbolicityMargin = 1e-6;

struct RankEstimate {
  std::size_t rank = 0;
  std::vector<double> singular_values;  // descending
  double threshold = kDefaultRankThreshold;
};

// rank = number of singular values above threshold * largest.
RankEstimate numerical_rank(const DenseMatrix& m, double threshold = kDefaultRankThreshold);

// Moduli of all eigenvalues, descending. Closed form up to 2x2, shifted QR
// on the Hessenberg form beyond.
std::vector<double> eigen_moduli(const DenseMatrix& m);

// No modulus within kHyperbolicityMargin of one.
bool is_hyperbolic(std::span<const double> moduli, double margin = kHyperbolicityMargin);

// Solves A x = b (row-major n x n, any jet nesting) by Gaussian elimination
// with partial pivoting on the underlying values.
template <class T>
std::vector<T> solve_linear(std::vector<T> a, std::vector<T> b, std::size_t n) {
  if (a.size() != n * n || b.size() != n) throw DimensionError("solve_linear shape mismatch");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, std::fabs(scalar_value(v)));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(scalar_value(a[k * n + k]));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double c = std::fabs(scalar_value(a[r * n + k]));
      if (c > best) {
        best = c;
        piv = r;
      }
    }
    if (best <= 1e-300 || best <= 1e-14 * scale) throw DomainError("singular matrix in linear solve");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const T factor = a[r * n + k] / a[k * n + k];
      if (scalar_value(factor) == 0.0 && is_constant(factor)) continue;
      for (std::size_t c = k; c < n; ++c) a[r * n + c] = a[r * n + c] - factor * a[k * n + c];
      b[r] = b[r] - factor * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s = s - a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

DenseMatrix inverse(const DenseMatrix& m);

}  // namespace dynint
