#include "dynint/numerics/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "dynint/error.hpp"

namespace dynint {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the fifth- and fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(std::span<const double> err, std::span<const double> y0,
                  std::span<const double> y1, const IntegratorConfig& cfg) {
  double s = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

// Hairer-Norsett-Wanner starting step heuristic.
double initial_step(const RhsFn& rhs, std::span<const double> x, std::span<const double> f0,
                    double direction, const IntegratorConfig& cfg) {
  const std::size_t n = x.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::fabs(x[i]);
    d0 += (x[i] / sc) * (x[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  Vector x1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) x1[i] = x[i] + direction * h0 * f0[i];
  rhs(x1, f1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::fabs(x[i]);
    d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min(100.0 * h0, h1);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  if (max_steps < 1) throw ConfigError("integrator max_steps must be at least 1");
}

Vector integrate_flow(const RhsFn& rhs, std::span<const double> x0, double t,
                      const IntegratorConfig& cfg, const PointPredicate& safe, FlowStats* stats) {
  cfg.validate();
  if (!std::isfinite(t)) throw ConfigError("flow time must be finite");
  const std::size_t n = x0.size();
  Vector y(x0.begin(), x0.end());
  if (t == 0.0) return y;
  if (safe && !safe(y)) throw IntegrationError("initial point outside the safe region", 0.0);

  const double dir = t > 0.0 ? 1.0 : -1.0;
  const double span = std::fabs(t);
  std::array<Vector, 7> k;
  for (auto& v : k) v.resize(n);
  Vector tmp(n), y1(n), err(n);

  rhs(y, k[0]);
  double h = cfg.initial_step > 0.0 ? cfg.initial_step : initial_step(rhs, y, k[0], dir, cfg);
  h = std::min(h, span);
  double done = 0.0;
  std::size_t steps = 0;
  FlowStats local;

  while (done < span) {
    if (++steps > cfg.max_steps) {
      std::ostringstream os;
      os << "integrator exhausted " << cfg.max_steps << " steps at t=" << dir * done;
      throw IntegrationError(os.str(), dir * done);
    }
    const bool last = done + h >= span;
    if (last) h = span - done;
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a21 * k[0][i]);
    rhs(tmp, k[1]);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k[0][i] + a32 * k[1][i]);
    rhs(tmp, k[2]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    rhs(tmp, k[3]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    rhs(tmp, k[4]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                            a65 * k[4][i]);
    rhs(tmp, k[5]);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + hs * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                           b6 * k[5][i]);
    rhs(y1, k[6]);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = hs * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                     e7 * k[6][i]);

    const double en = error_norm(err, y, y1, cfg);
    if (!std::isfinite(en)) {
      ++local.rejected;
      h *= 0.2;
      if (h < 1e-14 * std::max(1.0, span))
        throw IntegrationError("step size underflow (non-finite field values)", dir * done);
      continue;
    }
    if (en <= 1.0) {
      if (safe && !safe(y1)) {
        std::ostringstream os;
        os << "trajectory left the safe region between t=" << dir * done << " and t="
           << dir * (done + h);
        throw IntegrationError(os.str(), dir * done);
      }
      done = last ? span : done + h;
      y.swap(y1);
      std::swap(k[0], k[6]);  // first-same-as-last
      ++local.accepted;
      const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= factor;
    } else {
      ++local.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0);
      if (h < 1e-14 * std::max(1.0, span))
        throw IntegrationError("step size underflow", dir * done);
    }
  }
  if (stats) *stats = local;
  return y;
}

}  // namespace dynint
