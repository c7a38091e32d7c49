#include "dynint/core/iterate.hpp"

#include <cstdlib>

namespace dynint {

Vector iterate(const SmoothMap& f, std::span<const double> x0, long k) {
  if (x0.size() != f.dim()) throw DimensionError("iterate: starting point has wrong dimension");
  if (k < 0 && !f.has_inverse()) throw ConfigError(f.name() + ": negative iterates need an inverse");
  Vector x(x0.begin(), x0.end());
  reduce(x, f.topology());
  if (!f.in_domain(x)) throw GuardViolation("starting point outside the domain", 0);
  const long steps = std::labs(k);
  for (long j = 1; j <= steps; ++j) {
    try {
      x = k > 0 ? f(x) : f.inverse(x);
    } catch (const DomainError& e) {
      throw GuardViolation(std::string("evaluation failed at step ") + std::to_string(j) + ": " + e.what(), j);
    }
    if (!f.in_domain(x)) throw GuardViolation("left the domain at step " + std::to_string(j), j);
  }
  return x;
}

}  // namespace dynint
