#pragma once

#include <span>

#include "dynint/core/fields.hpp"

namespace dynint {

// f^k(x0) with circle reduction after every application; k < 0 uses the
// inverse. Throws GuardViolation naming the first step that left the domain.
Vector iterate(const SmoothMap& f, std::span<const double> x0, long k);

}  // namespace dynint
