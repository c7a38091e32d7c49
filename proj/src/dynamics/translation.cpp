#include <Eigen/Dense>
#include <cmath>

#include "dynint/dynamics/dynamics.hpp"

namespace dynint {

Vector composed_flow(const IntegrabilityStructure& s, std::span<const double> t, std::span<const double> x,
                     const IntegratorConfig& cfg, const PointPredicate& safe) {
  if (t.size() != s.fields.size()) throw DimensionError("one flow time per field is required");
  Vector y(x.begin(), x.end());
  for (std::size_t j = s.fields.size(); j-- > 0;) {
    const VectorField& v = s.fields[j];
    y = integrate_flow([&v](std::span<const double> z, std::span<double> dz) { v.rhs(z, dz); }, y, t[j], cfg, safe);
  }
  return y;
}

TranslationEstimate estimate_translation_vector(const SmoothMap& f, const IntegrabilityStructure& s,
                                                std::span<const double> x, const TranslationConfig& cfg) {
  if (s.fields.empty()) throw ConfigError("translation vector needs at least one field");
  if (s.dim != f.dim() || x.size() != f.dim()) throw DimensionError("translation vector dimension mismatch");
  cfg.integrator.validate();
  const std::size_t n = f.dim();
  const std::size_t m = s.fields.size();
  const Vector target = f.lift(x);
  const double scale = 1.0 + norm_inf(target);
  PointPredicate safe;
  if (f.guard()) safe = f.guard();

  auto residual = [&](const Vector& t) {
    Vector r = composed_flow(s, t, x, cfg.integrator, safe);
    for (std::size_t i = 0; i < n; ++i) r[i] -= target[i];
    return r;
  };

  TranslationEstimate est;
  est.t0.assign(m, 0.0);
  Vector r = residual(est.t0);
  try {
  for (int it = 0; it <= cfg.max_iterations; ++it) {
    est.residual = norm_inf(r);
    est.iterations = it;
    if (est.residual <= cfg.tolerance * scale) return est;
    if (it == cfg.max_iterations) break;
    Eigen::MatrixXd jac(n, m);
    for (std::size_t j = 0; j < m; ++j) {
      Vector tp = est.t0;
      tp[j] += cfg.fd_step;
      const Vector rp = residual(tp);
      for (std::size_t i = 0; i < n; ++i) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rp[i] - r[i]) / cfg.fd_step;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    if (qr.rank() < static_cast<Eigen::Index>(m)) throw ConvergenceError("singular shooting Jacobian");
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = -r[i];
    const Eigen::VectorXd step = qr.solve(rhs);
    for (std::size_t j = 0; j < m; ++j) est.t0[j] += step(static_cast<Eigen::Index>(j));
    r = residual(est.t0);
  }
  } catch (const IntegrationError& e) {
    throw ConvergenceError(std::string("translation search left the integrable range: ") + e.what());
  }
  throw ConvergenceError("translation vector did not converge in " + std::to_string(cfg.max_iterations) +
                         " iterations (residual " + std::to_string(est.residual) + ")");
}

}  // namespace dynint
