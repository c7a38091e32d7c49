#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "dynint/numerics/matrix.hpp"

namespace dynint {

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  // Non-positive selects an automatic first step.
  double initial_step = 0.0;

  void validate() const;
};

using RhsFn = std::function<void(std::span<const double> x, std::span<double> dx)>;
using PointPredicate = std::function<bool(std::span<const double> x)>;

struct FlowStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Approximates the time-t flow of dx/dt = rhs(x) from x0 with the
// Dormand-Prince 5(4) embedded pair and adaptive steps. Returns x0 exactly
// for t == 0. Negative t integrates backwards. When `safe` is given every
// accepted state must satisfy it; otherwise IntegrationError carries the
// last time reached inside the region.
Vector integrate_flow(const RhsFn& rhs, std::span<const double> x0, double t,
                      const IntegratorConfig& cfg = {}, const PointPredicate& safe = {},
                      FlowStats* stats = nullptr);

}  // namespace dynint
