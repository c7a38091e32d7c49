#include "dynint/core/sampling.hpp"

#include <sstream>

#include "dynint/core/parallel.hpp"

namespace dynint {
namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix(splitmix(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t SubstreamRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SubstreamRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void SamplingRegion::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError("sampling box bounds have mismatched dimensions");
  if (!(margin >= 0.0)) throw ConfigError("sampling margin must be non-negative");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] + margin < hi[i] - margin)) {
      std::ostringstream os;
      os << "sampling box coordinate " << i + 1 << " is empty after the margin";
      throw ConfigError(os.str());
    }
}

bool SamplingRegion::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
  return !guard || guard(x);
}

std::vector<Vector> sample(const SamplingRegion& region, std::size_t count) {
  region.validate();
  const std::size_t n = region.dim();
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  std::vector<Vector> points(count, Vector(n));
  std::vector<std::size_t> rejections(count, 0);
  parallel_for(count, [&](std::size_t i) {
    SubstreamRng rng(region.seed, i);
    Vector& x = points[i];
    for (;;) {
      for (std::size_t c = 0; c < n; ++c) {
        const double a = region.lo[c] + region.margin;
        const double b = region.hi[c] - region.margin;
        x[c] = a + (b - a) * rng.uniform();
      }
      if (!region.guard || region.guard(x)) return;
      if (++rejections[i] > budget) return;
    }
  });
  std::size_t total = 0;
  for (auto r : rejections) total += r;
  if (total > budget)
    throw ConfigError("sampling guard rejected " + std::to_string(total) +
                      " candidates; region misconfigured");
  return points;
}

}  // namespace dynint
