#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynint/core/fields.hpp"

namespace dynint {

struct SamplingRegion {
  Vector lo;
  Vector hi;
  double margin = 0.0;
  PointPredicate guard;
  std::size_t sample_count = 1000;
  std::uint64_t seed = 42;

  std::size_t dim() const { return lo.size(); }
  void validate() const;
  bool contains(std::span<const double> x) const;
};

// Uniform samples on the margin-shrunk box that satisfy the guard. Point i
// draws from its own substream of the seed, so the result does not depend
// on the worker count. Fails once 1000 * count candidates were rejected.
std::vector<Vector> sample(const SamplingRegion& region, std::size_t count);
inline std::vector<Vector> sample(const SamplingRegion& region) {
  return sample(region, region.sample_count);
}

// Counter-based generator: splitmix64 over (seed, stream, counter).
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace dynint
