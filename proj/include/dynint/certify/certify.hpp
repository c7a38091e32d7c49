#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynint/core/sampling.hpp"
#include "dynint/core/structure.hpp"
#include "dynint/numerics/integrator.hpp"
#include "dynint/numerics/linalg.hpp"

namespace dynint {

inline constexpr const char* kCaveat = "numerical evidence, not proof";

struct Tolerances {
  double algebraic_tol = 1e-9;
  double flow_tol = 1e-7;
  double rank_threshold = kDefaultRankThreshold;
  double ae_fraction = 0.99;

  void validate() const;
};

enum class ConditionKind { residual, rank };

/// Statistics of one certified condition over the sample points.
///
/// Residual conditions are normalized point by point (|r| / scale, see
/// Measured), so max_abs, mean_abs and p99_abs are relative residuals and
/// `scale` is the normalization at the worst point; pass <=> max_abs <=
/// tolerance. Rank conditions record the rank shortfall per point and pass
/// when the full-rank fraction reaches the a.e. fraction.
struct ResidualStats {
  std::string name;
  std::string anchor;
  ConditionKind kind = ConditionKind::residual;
  std::size_t count = 0;
  std::size_t skipped = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double p99_abs = 0.0;
  Vector worst_point;
  double scale = 1.0;
  double tolerance = 0.0;
  double full_rank_fraction = 1.0;
  bool pass = true;
  std::string note;
};

// One normalized residual at one point; invalid when the point was skipped.
struct PointSample {
  bool valid = false;
  double value = 0.0;
  double scale = 1.0;
};

ResidualStats aggregate_residual(std::string name, std::string anchor, double tolerance,
                                 std::span<const PointSample> samples, std::span<const Vector> points);

struct RankSample {
  bool valid = false;
  std::size_t shortfall = 0;
  // Smallest singular value relative to the largest.
  double relative_gap = 0.0;
};

ResidualStats aggregate_rank(std::string name, std::string anchor, double ae_fraction,
                             std::span<const RankSample> samples, std::span<const Vector> points);

// Rank of the column-normalized matrix whose columns are the given vectors.
RankSample column_rank(std::span<const Vector> columns, double threshold);

struct RankSummary {
  std::size_t columns = 0;
  std::size_t count = 0;
  std::size_t full_rank = 0;
  double full_rank_fraction = 0.0;
  std::vector<Vector> deficient_points;
  ResidualStats stats;
};

RankSummary independence_rank_stats(std::span<const VectorField> fields, const SamplingRegion& region,
                                    std::size_t count, const Tolerances& tol = {});
RankSummary gradient_rank_stats(std::span<const ScalarField> integrals, const SamplingRegion& region,
                                std::size_t count, const Tolerances& tol = {});

enum class Verdict { pass, fail, unverified };
std::string to_string(Verdict v);

struct StructureSummary {
  std::size_t dim = 0;
  std::size_t m = 0;
  std::size_t integrals = 0;
  bool partial = false;
  bool unverified = false;
  std::vector<std::string> field_names;
  std::vector<std::string> integral_names;
  std::string note;
};

StructureSummary summarize(const IntegrabilityStructure& s);

struct CertificationOptions {
  std::vector<double> flow_times{-1.0, 0.5, 1.0};
  IntegratorConfig integrator;
  DerivativeMode mode = DerivativeMode::automatic;
  bool skip_flow = false;
};

struct CertificationReport {
  std::string map_name;
  std::vector<std::pair<std::string, std::string>> params;
  StructureSummary structure;
  std::vector<ResidualStats> conditions;
  std::vector<std::string> empty_sections;
  std::vector<std::string> skipped_sections;
  Verdict verdict = Verdict::unverified;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Tolerances tolerances;
  std::vector<double> flow_times;
  // Sample points rejected by the map's domain guard.
  std::size_t guard_skipped = 0;
  std::vector<std::string> notes;

  const ResidualStats* find(const std::string& name) const;
  std::vector<const ResidualStats*> failing() const;
};

// Runs every condition of (m, n-m)-integrability over the sampled region:
// pairwise brackets and field rank, first integrals of the fields and
// gradient rank, infinitesimal commutation, invariance of the integrals
// and flow commutation at each time in options.flow_times.
CertificationReport certify_structure(const SmoothMap& f, const IntegrabilityStructure& s,
                                      const SamplingRegion& region, const Tolerances& tol = {},
                                      const CertificationOptions& options = {});

// Symplectic integrability checks on a 2n-dimensional map: symplecticity,
// invariance of each integral, pairwise Poisson brackets and gradient rank.
CertificationReport certify_involution(const SmoothMap& f, std::span<const ScalarField> integrals,
                                       const SamplingRegion& region, const Tolerances& tol = {});

// PASS iff every condition passed and nothing was skipped by configuration.
Verdict decide(const std::vector<ResidualStats>& conditions, bool skipped_by_config);

}  // namespace dynint
