#include <cmath>
#include <numbers>

#include "dynint/dynamics/dynamics.hpp"

namespace dynint {

Orbit compute_orbit(const SmoothMap& f, std::span<const double> x0, long n) {
  if (n < 1) throw ConfigError("orbit length must be at least 1");
  if (x0.size() != f.dim()) throw DimensionError("orbit start has wrong dimension");
  Orbit orbit;
  orbit.map_name = f.name();
  orbit.x0.assign(x0.begin(), x0.end());
  orbit.requested = n;
  Vector x = orbit.x0;
  reduce(x, f.topology());
  if (!f.in_domain(x)) throw GuardViolation("orbit start outside the domain", 0);
  orbit.points.reserve(static_cast<std::size_t>(n) + 1);
  orbit.points.push_back(x);
  for (long k = 1; k <= n; ++k) {
    Vector y;
    try {
      y = f(x);
    } catch (const DomainError& e) {
      orbit.guard_failures = 1;
      orbit.note = "evaluation failed at step " + std::to_string(k) + ": " + e.what();
      break;
    }
    if (!f.in_domain(y)) {
      orbit.guard_failures = 1;
      orbit.note = "left the domain at step " + std::to_string(k);
      break;
    }
    orbit.points.push_back(y);
    x = std::move(y);
  }
  return orbit;
}

RotationEstimate rotation_number(const SmoothMap& f, double x0, long n, std::size_t windows) {
  if (f.dim() != 1 || !f.topology().at(0).is_circle())
    throw ConfigError("rotation_number needs a one-dimensional circle map");
  if (windows < 1 || n < static_cast<long>(windows)) throw ConfigError("rotation_number needs n >= windows >= 1");
  const double c = f.topology()[0].circumference;
  RotationEstimate est;
  constexpr int kProbe = 256;
  for (int i = 0; i < kProbe; ++i) {
    const double x = c * i / kProbe;
    const DenseMatrix d = f.jacobian(std::span<const double>(&x, 1));
    if (!(d(0, 0) > 0.0)) throw DomainError("map is not monotone (f' <= 0 at x = " + std::to_string(x) + ")");
  }
  double x = reduce_angle(x0, c);
  const long per = n / static_cast<long>(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    double moved = 0.0;
    for (long k = 0; k < per; ++k) {
      const Vector y = f.lift(std::span<const double>(&x, 1));
      moved += y[0] - x;
      x = reduce_angle(y[0], c);
    }
    est.window_estimates.push_back(moved / (c * static_cast<double>(per)));
  }
  double mean = 0.0;
  for (double v : est.window_estimates) mean += v;
  mean /= static_cast<double>(windows);
  for (double a : est.window_estimates)
    for (double b : est.window_estimates) est.dispersion = std::max(est.dispersion, std::fabs(a - b));
  est.value = mean - std::floor(mean);
  if (est.value >= 1.0) est.value = 0.0;
  return est;
}

RotationEstimate angular_rotation(const SmoothMap& f, std::span<const double> x0, std::span<const double> centre,
                                  long n, std::size_t windows, std::size_t i, std::size_t j) {
  if (centre.size() != f.dim() || x0.size() != f.dim()) throw DimensionError("angular_rotation dimension mismatch");
  if (i >= f.dim() || j >= f.dim() || i == j) throw ConfigError("angular_rotation needs two distinct coordinates");
  if (windows < 1 || n < static_cast<long>(windows)) throw ConfigError("angular_rotation needs n >= windows >= 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto angle = [&](const Vector& x) { return std::atan2(x[j] - centre[j], x[i] - centre[i]); };
  RotationEstimate est;
  Vector x(x0.begin(), x0.end());
  if (!f.in_domain(x)) throw GuardViolation("orbit start outside the domain", 0);
  double theta = angle(x);
  int sign = 0;
  const long per = n / static_cast<long>(windows);
  long step = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    double turned = 0.0;
    for (long k = 0; k < per; ++k) {
      ++step;
      x = f(x);
      if (!f.in_domain(x)) throw GuardViolation("left the domain at step " + std::to_string(step), step);
      const double next = angle(x);
      double d = std::remainder(next - theta, two_pi);
      const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (sign == 0) sign = s;
      else if (s != 0 && s != sign) est.monotone = false;
      turned += d;
      theta = next;
    }
    est.window_estimates.push_back(turned / (two_pi * static_cast<double>(per)));
  }
  double mean = 0.0;
  for (double v : est.window_estimates) mean += v;
  est.value = mean / static_cast<double>(windows);
  for (double a : est.window_estimates)
    for (double b : est.window_estimates) est.dispersion = std::max(est.dispersion, std::fabs(a - b));
  return est;
}

DriftReport level_set_drift(const SmoothMap& f, const std::vector<ScalarField>& integrals,
                            std::span<const double> x0, long n) {
  if (n < 0) throw ConfigError("drift needs n >= 0");
  DriftReport out;
  for (const auto& F : integrals) {
    if (F.dim() != f.dim()) throw DimensionError("integral " + F.name() + " has wrong dimension");
    out.names.push_back(F.name());
  }
  Vector x(x0.begin(), x0.end());
  reduce(x, f.topology());
  if (!f.in_domain(x)) throw GuardViolation("drift start outside the domain", 0);
  std::vector<double> start;
  for (const auto& F : integrals) start.push_back(F(x));
  out.drift.assign(integrals.size(), 0.0);
  for (long k = 1; k <= n; ++k) {
    try {
      x = f(x);
    } catch (const DomainError& e) {
      throw GuardViolation("evaluation failed at step " + std::to_string(k) + ": " + e.what(), k);
    }
    if (!f.in_domain(x)) throw GuardViolation("left the domain at step " + std::to_string(k), k);
    for (std::size_t i = 0; i < integrals.size(); ++i)
    {
      const double d = std::fabs(integrals[i](x) - start[i]);
      if (!(d <= out.drift[i])) out.drift[i] = d;
    }
    out.iterates = k;
  }
  return out;
}

}  // namespace dynint
