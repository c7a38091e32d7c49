#include "dynint/core/topology.hpp"

#include <cmath>

#include "dynint/error.hpp"

namespace dynint {

double reduce_angle(double x, double c) {
  double r = std::fmod(x, c);
  if (r < 0.0) r += c;
  if (r >= c) r -= c;  // -tiny + c rounds to c
  return r;
}

double wrap_difference(double d, double c) {
  double r = std::fmod(d + 0.5 * c, c);
  if (r < 0.0) r += c;
  return r - 0.5 * c;
}

void reduce(std::span<double> x, const Topology& topology) {
  if (topology.empty()) return;
  if (topology.size() != x.size()) throw DimensionError("topology/point dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (topology[i].is_circle()) x[i] = reduce_angle(x[i], topology[i].circumference);
}

Vector difference(std::span<const double> a, std::span<const double> b, const Topology& topology) {
  if (a.size() != b.size()) throw DimensionError("difference of points of unequal dimension");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = a[i] - b[i];
    if (!topology.empty() && topology[i].is_circle())
      d[i] = wrap_difference(d[i], topology[i].circumference);
  }
  return d;
}

double distance(std::span<const double> a, std::span<const double> b, const Topology& topology) {
  return norm_inf(difference(a, b, topology));
}

}  // namespace dynint
