#include <sstream>

#include "dynint/constructions/constructions.hpp"

namespace dynint {

VectorField affine1d_symmetry(double a, double b) {
  if (a == 0.0) throw ConfigError("a = 0 does not define a diffeomorphism");
  if (a == 1.0)
    return VectorField::generic("v1", 1, [](auto, auto out) { out[0] = 1.0; });
  const double shift = b / (a - 1.0);
  return VectorField::generic("v1", 1, [shift](auto x, auto out) { out[0] = x[0] + shift; });
}

SmoothMap affine1d_map(double a, double b) {
  if (a == 0.0) throw ConfigError("a = 0 does not define a diffeomorphism");
  SmoothMap f(VectorFunction::generic("affine1d", 1, 1, [a, b](auto x, auto out) { out[0] = a * x[0] + b; }));
  f.with_inverse(VectorFunction::generic("affine1d^-1", 1, 1,
                                         [a, b](auto x, auto out) { out[0] = (x[0] - b) / a; }));
  return f;
}

}  // namespace dynint
