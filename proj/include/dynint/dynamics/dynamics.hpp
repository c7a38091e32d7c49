#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dynint/core/sampling.hpp"
#include "dynint/core/structure.hpp"

namespace dynint {

struct Orbit {
  std::string map_name;
  Vector x0;
  std::vector<Vector> points;  // points[0] = x0 reduced
  std::size_t guard_failures = 0;
  long requested = 0;
  std::string note;

  long length() const { return static_cast<long>(points.size()) - 1; }
};

// Stops at the first guard failure and records it. Throws GuardViolation
// when x0 itself is outside the domain.
Orbit compute_orbit(const SmoothMap& f, std::span<const double> x0, long n);

enum class PeriodicClass { hyperbolic, elliptic, parabolic };
std::string to_string(PeriodicClass c);

struct PeriodicPoint {
  Vector x;
  long period = 1;
  long minimal_period = 1;
  std::vector<double> multiplier_moduli;  // descending
  PeriodicClass classification = PeriodicClass::parabolic;
};

struct PeriodicSearch {
  double newton_tol = 1e-12;
  int max_iterations = 50;
  double dedup_radius = 1e-6;
  double accept_tol = 1e-10;
};

// D(f^k)(x) by chaining Jacobians along the orbit.
DenseMatrix iterate_jacobian(const SmoothMap& f, std::span<const double> x, long k);

// Newton on f^k(x) - x from seed_count starts drawn from the region.
// Results are sorted lexicographically and do not depend on the worker count.
std::vector<PeriodicPoint> find_periodic_points(const SmoothMap& f, long k, const SamplingRegion& region,
                                                std::size_t seed_count, const PeriodicSearch& opts = {});

// Descending exponents from QR re-orthonormalisation at every step.
std::vector<double> lyapunov_spectrum(const SmoothMap& f, std::span<const double> x0, long n);

struct RotationEstimate {
  double value = 0.0;
  std::vector<double> window_estimates;
  double dispersion = 0.0;
  bool monotone = true;
};

// Circle map with one coordinate: per-window (F^len(x) - x) / (c len) of the
// lift, value reduced into [0, 1). Throws DomainError when f' <= 0 somewhere.
RotationEstimate rotation_number(const SmoothMap& f, double x0, long n, std::size_t windows = 2);

// Planar angle of (x_i - c_i, x_j - c_j) around a centre, increments folded
// to (-pi, pi]. Each window reports the mean increment divided by 2 pi.
RotationEstimate angular_rotation(const SmoothMap& f, std::span<const double> x0, std::span<const double> centre,
                                  long n, std::size_t windows = 2, std::size_t i = 0, std::size_t j = 1);

struct DriftReport {
  std::vector<std::string> names;
  std::vector<double> drift;
  long iterates = 0;
};

DriftReport level_set_drift(const SmoothMap& f, const std::vector<ScalarField>& integrals,
                            std::span<const double> x0, long n);

struct TranslationConfig {
  IntegratorConfig integrator{1e-12, 1e-12, 1'000'000, 0.0};
  double fd_step = 1e-6;
  int max_iterations = 50;
  double tolerance = 1e-9;  // relative to 1 + |f(x)|
};

struct TranslationEstimate {
  Vector t0;
  double residual = 0.0;
  int iterations = 0;
};

// phi_1^{t1} o ... o phi_m^{tm}(x) with every flow run on the lift.
Vector composed_flow(const IntegrabilityStructure& s, std::span<const double> t, std::span<const double> x,
                     const IntegratorConfig& cfg, const PointPredicate& safe = {});

// Gauss-Newton on t -> phi^t(x) - f(x) from t = 0. Throws ConvergenceError.
TranslationEstimate estimate_translation_vector(const SmoothMap& f, const IntegrabilityStructure& s,
                                                std::span<const double> x, const TranslationConfig& cfg = {});

}  // namespace dynint
