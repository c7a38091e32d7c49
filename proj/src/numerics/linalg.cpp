#include "dynint/numerics/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>

namespace dynint {
namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

}  // namespace

RankEstimate numerical_rank(const DenseMatrix& m, double threshold) {
  if (m.empty()) throw DimensionError("numerical_rank of an empty matrix");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError("rank threshold must lie in (0,1)");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  RankEstimate est;
  est.threshold = threshold;
  est.singular_values.assign(sv.data(), sv.data() + sv.size());
  std::sort(est.singular_values.begin(), est.singular_values.end(), std::greater<>());
  const double largest = est.singular_values.front();
  if (largest > 0.0)
    for (double s : est.singular_values)
      if (s > threshold * largest) ++est.rank;
  return est;
}

std::vector<double> eigen_moduli(const DenseMatrix& m) {
  if (!m.square()) throw DimensionError("eigen_moduli needs a square matrix");
  const std::size_t n = m.rows();
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(std::fabs(m(0, 0)));
  } else if (n == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      // Avoid cancellation for the smaller root.
      const double big = tr / 2.0 + (tr >= 0.0 ? r : -r);
      const double small = big != 0.0 ? det / big : tr / 2.0 - (tr >= 0.0 ? r : -r);
      out = {std::fabs(big), std::fabs(small)};
    } else {
      const double mod = std::sqrt(std::fabs(det));
      out = {mod, mod};
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration did not converge");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()[i]));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool is_hyperbolic(std::span<const double> moduli, double margin) {
  return std::all_of(moduli.begin(), moduli.end(),
                     [margin](double mu) { return std::fabs(mu - 1.0) > margin; });
}

DenseMatrix inverse(const DenseMatrix& m) {
  if (!m.square()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  DenseMatrix inv(n, n);
  std::vector<double> a(m.data().begin(), m.data().end());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto x = solve_linear<double>(a, e, n);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
  }
  return inv;
}

}  // namespace dynint
