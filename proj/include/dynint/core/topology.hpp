#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynint/numerics/matrix.hpp"

namespace dynint {

// Phase space is a box of lines and circles; circle coordinates live in [0, c).
struct Coordinate {
  enum class Kind { line, circle };
  Kind kind = Kind::line;
  double circumference = 0.0;

  static Coordinate line() { return {}; }
  static Coordinate circle(double c) { return {Kind::circle, c}; }
  bool is_circle() const { return kind == Kind::circle; }
};

using Topology = std::vector<Coordinate>;

inline Topology euclidean(std::size_t n) { return Topology(n); }

// Reduces x into [0, c).
double reduce_angle(double x, double c);
// Difference folded into [-c/2, c/2).
double wrap_difference(double d, double c);

void reduce(std::span<double> x, const Topology& topology);
// a - b with circle components folded to the shortest arc.
Vector difference(std::span<const double> a, std::span<const double> b, const Topology& topology);
// Max-norm distance using arc distance on circle coordinates.
double distance(std::span<const double> a, std::span<const double> b, const Topology& topology);

}  // namespace dynint
