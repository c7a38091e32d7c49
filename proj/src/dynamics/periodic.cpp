#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "dynint/core/iterate.hpp"
#include "dynint/core/parallel.hpp"
#include "dynint/dynamics/dynamics.hpp"
#include "dynint/numerics/linalg.hpp"

namespace dynint {

std::string to_string(PeriodicClass c) {
  switch (c) {
    case PeriodicClass::hyperbolic: return "hyperbolic";
    case PeriodicClass::elliptic: return "elliptic";
    case PeriodicClass::parabolic: return "parabolic";
  }
  return "parabolic";
}

DenseMatrix iterate_jacobian(const SmoothMap& f, std::span<const double> x, long k) {
  if (k < 1) throw ConfigError("iterate_jacobian needs k >= 1");
  Vector y(x.begin(), x.end());
  DenseMatrix d = DenseMatrix::identity(f.dim());
  for (long j = 0; j < k; ++j) {
    d = f.jacobian(y) * d;
    y = f(y);
  }
  return d;
}

namespace {

double residual_norm(const SmoothMap& f, const Vector& x, long k) {
  const Vector y = iterate(f, x, k);
  return norm_inf(difference(y, x, f.topology())) / (1.0 + norm_inf(x));
}

std::optional<Vector> newton(const SmoothMap& f, long k, Vector x, const PeriodicSearch& opts) {
  const std::size_t n = f.dim();
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector g;
    DenseMatrix d;
    try {
      g = difference(iterate(f, x, k), x, f.topology());
      d = iterate_jacobian(f, x, k);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (norm_inf(g) <= opts.newton_tol * (1.0 + norm_inf(x))) return x;
    std::vector<double> a(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a[r * n + c] = d(r, c) - (r == c ? 1.0 : 0.0);
    for (auto& v : g) v = -v;
    std::vector<double> step;
    try {
      step = solve_linear<double>(std::move(a), std::move(g), n);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += step[i];
    reduce(x, f.topology());
    if (!f.in_domain(x)) return std::nullopt;
  }
  try {
    const Vector g = difference(iterate(f, x, k), x, f.topology());
    if (norm_inf(g) <= opts.newton_tol * (1.0 + norm_inf(x))) return x;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

std::vector<PeriodicPoint> find_periodic_points(const SmoothMap& f, long k, const SamplingRegion& region,
                                                std::size_t seed_count, const PeriodicSearch& opts) {
  if (k < 1) throw ConfigError("period must be at least 1");
  if (region.dim() != f.dim()) throw DimensionError("region and map dimensions differ");
  const auto seeds = sample(region, seed_count);
  std::vector<std::optional<Vector>> roots(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { roots[i] = newton(f, k, seeds[i], opts); });

  std::vector<PeriodicPoint> out;
  for (const auto& r : roots) {
    if (!r) continue;
    if (!region.contains(*r) && !f.has_circle_coordinates()) continue;
    bool duplicate = false;
    for (const auto& p : out)
      if (distance(p.x, *r, f.topology()) <= opts.dedup_radius) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    if (residual_norm(f, *r, k) > opts.accept_tol) continue;
    PeriodicPoint p;
    p.x = *r;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      const Coordinate& c = f.topology().at(i);
      if (c.is_circle() && c.circumference - p.x[i] <= 1e-12 * c.circumference) p.x[i] = 0.0;
    }
    p.period = k;
    p.minimal_period = k;
    for (long d = 1; d < k; ++d)
      if (k % d == 0 && residual_norm(f, *r, d) <= opts.accept_tol) {
        p.minimal_period = d;
        break;
      }
    p.multiplier_moduli = eigen_moduli(iterate_jacobian(f, *r, k));
    if (is_hyperbolic(p.multiplier_moduli)) {
      p.classification = PeriodicClass::hyperbolic;
    } else {
      bool all_unit = true;
      for (double m : p.multiplier_moduli) all_unit = all_unit && std::fabs(m - 1.0) <= kHyperbolicityMargin;
      p.classification = all_unit ? PeriodicClass::elliptic : PeriodicClass::parabolic;
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) { return a.x < b.x; });
  return out;
}

std::vector<double> lyapunov_spectrum(const SmoothMap& f, std::span<const double> x0, long n) {
  if (n < 100) throw ConfigError("lyapunov_spectrum needs N >= 100");
  const std::size_t dim = f.dim();
  Vector x(x0.begin(), x0.end());
  reduce(x, f.topology());
  if (!f.in_domain(x)) throw GuardViolation("orbit start outside the domain", 0);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(dim, dim);
  std::vector<double> sums(dim, 0.0);
  for (long k = 1; k <= n; ++k) {
    const DenseMatrix j = f.jacobian(x);
    Eigen::MatrixXd m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = j(r, c);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m * q);
    const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
    q = qr.householderQ();
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = rr(i, i);
      if (d == 0.0) throw DomainError("singular Jacobian along the orbit at step " + std::to_string(k));
      sums[i] += std::log(std::fabs(d));
    }
    try {
      x = f(x);
    } catch (const DomainError& e) {
      throw GuardViolation("evaluation failed at step " + std::to_string(k) + ": " + e.what(), k);
    }
    if (!f.in_domain(x)) throw GuardViolation("left the domain at step " + std::to_string(k), k);
  }
  for (auto& s : sums) s /= static_cast<double>(n);
  std::sort(sums.begin(), sums.end(), std::greater<>());
  return sums;
}

}  // namespace dynint
