#include "dynint/certify/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "dynint/certify/residuals.hpp"
#include "dynint/core/parallel.hpp"
#include "dynint/simd/kernels.hpp"

namespace dynint {
namespace {

constexpr const char* kAnchorBracket = "[X_j,X_k](x) = DX_k(x)X_j(x) - DX_j(x)X_k(x) = 0";
constexpr const char* kAnchorFieldRank = "X_1..X_m linearly independent a.e.";
constexpr const char* kAnchorFirstIntegral = "DF_k(x).X_j(x) = 0";
constexpr const char* kAnchorGradientRank = "DF_1..DF_(n-m) linearly independent a.e.";
constexpr const char* kAnchorCommutation = "Df(x)X(x) = X(f(x))";
constexpr const char* kAnchorInvariance = "F(f(x)) = F(x)";
constexpr const char* kAnchorFlow = "f(phi_t(x)) = phi_t(f(x))";
constexpr const char* kAnchorSymplectic = "Df^T J Df = J";
constexpr const char* kAnchorPoisson = "{F_j,F_k} = D_qF_j.D_pF_k - D_pF_j.D_qF_k = 0";

std::string format_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

// Evaluates one residual condition, mapping expected per-point failures
// (domain, guard, integration) to a skipped sample.
PointSample guarded(const std::function<Measured()>& fn) {
  try {
    const Measured m = fn();
    return {true, m.normalized(), m.scale};
  } catch (const DomainError&) {
  } catch (const GuardViolation&) {
  } catch (const IntegrationError&) {
  }
  return {};
}

struct Job {
  Job(std::string n, std::string a, ConditionKind k, double tol)
      : name(std::move(n)), anchor(std::move(a)), kind(k), tolerance(tol) {}

  std::string name;
  std::string anchor;
  ConditionKind kind = ConditionKind::residual;
  double tolerance = 0.0;
  bool flow = false;
  std::function<PointSample(const Vector&)> residual;
  std::function<RankSample(const Vector&)> rank;
};

std::vector<ResidualStats> run_jobs(const std::vector<Job>& jobs, const std::vector<Vector>& points,
                                    const std::vector<char>& usable, double ae_fraction) {
  const std::size_t np = points.size();
  std::vector<std::vector<PointSample>> res(jobs.size(), std::vector<PointSample>(np));
  std::vector<std::vector<RankSample>> ranks(jobs.size(), std::vector<RankSample>(np));
  parallel_for(np, [&](std::size_t p) {
    if (!usable[p]) return;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].kind == ConditionKind::residual)
        res[j][p] = jobs[j].residual(points[p]);
      else
        ranks[j][p] = jobs[j].rank(points[p]);
    }
  });
  std::vector<ResidualStats> out;
  out.reserve(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].kind == ConditionKind::residual) {
      auto stats = aggregate_residual(jobs[j].name, jobs[j].anchor, jobs[j].tolerance, res[j], points);
      if (jobs[j].flow && stats.skipped * 2 > stats.count + stats.skipped) {
        stats.pass = false;
        stats.note = "more than half of the trajectories left the domain";
      }
      out.push_back(std::move(stats));
    } else {
      out.push_back(aggregate_rank(jobs[j].name, jobs[j].anchor, ae_fraction, ranks[j], points));
    }
  }
  return out;
}

std::vector<Vector> gradients_at(std::span<const ScalarField> integrals, const Vector& x) {
  std::vector<Vector> cols;
  cols.reserve(integrals.size());
  for (const auto& F : integrals) cols.push_back(F.gradient(x));
  return cols;
}

RankSample guarded_rank(const std::function<std::vector<Vector>()>& columns, double threshold) {
  try {
    return column_rank(columns(), threshold);
  } catch (const DomainError&) {
  } catch (const GuardViolation&) {
  }
  return {};
}

}  // namespace

void Tolerances::validate() const {
  if (!(algebraic_tol > 0.0) || !(flow_tol > 0.0) || !(rank_threshold > 0.0))
    throw ConfigError("tolerances must be positive");
  if (!(ae_fraction > 0.5 && ae_fraction <= 1.0)) throw ConfigError("ae_fraction must lie in (0.5, 1]");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::unverified:
      return "UNVERIFIED";
  }
  return "UNVERIFIED";
}

ResidualStats aggregate_residual(std::string name, std::string anchor, double tolerance,
                                 std::span<const PointSample> samples, std::span<const Vector> points) {
  ResidualStats s;
  s.name = std::move(name);
  s.anchor = std::move(anchor);
  s.kind = ConditionKind::residual;
  s.tolerance = tolerance;
  std::vector<double> values;
  values.reserve(samples.size());
  std::size_t worst = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].valid) {
      ++s.skipped;
      continue;
    }
    const double v = samples[i].value;
    values.push_back(v);
    if (worst == samples.size() || std::isnan(v) || v > samples[worst].value) {
      if (worst == samples.size() || !std::isnan(samples[worst].value)) worst = i;
    }
  }
  s.count = values.size();
  if (s.count == 0) return s;
  const auto& k = simd::active();
  s.max_abs = k.max_abs(values.data(), values.size());
  s.mean_abs = k.sum(values.data(), values.size()) / static_cast<double>(s.count);
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end(), [](double a, double b) {
    if (std::isnan(a)) return false;
    if (std::isnan(b)) return true;
    return a < b;
  });
  const std::size_t rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(s.count)));
  s.p99_abs = sorted[std::max<std::size_t>(rank, 1) - 1];
  // Rounding can push the lane-ordered mean a hair past a constant maximum.
  s.mean_abs = std::min(s.mean_abs, s.p99_abs);
  s.worst_point = points[worst];
  s.scale = samples[worst].scale;
  s.pass = s.max_abs <= tolerance;
  return s;
}

ResidualStats aggregate_rank(std::string name, std::string anchor, double ae_fraction,
                             std::span<const RankSample> samples, std::span<const Vector> points) {
  ResidualStats s;
  s.name = std::move(name);
  s.anchor = std::move(anchor);
  s.kind = ConditionKind::rank;
  s.tolerance = ae_fraction;
  std::vector<double> shortfall;
  std::size_t full = 0;
  std::size_t worst = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].valid) {
      ++s.skipped;
      continue;
    }
    shortfall.push_back(static_cast<double>(samples[i].shortfall));
    if (samples[i].shortfall == 0) ++full;
    if (worst == samples.size() || samples[i].relative_gap < samples[worst].relative_gap) worst = i;
  }
  s.count = shortfall.size();
  if (s.count == 0) {
    s.full_rank_fraction = 0.0;
    s.pass = false;
    s.note = "no point could be evaluated";
    return s;
  }
  const auto& k = simd::active();
  s.max_abs = k.max_abs(shortfall.data(), shortfall.size());
  s.mean_abs = k.sum(shortfall.data(), shortfall.size()) / static_cast<double>(s.count);
  std::vector<double> sorted = shortfall;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(s.count)));
  s.p99_abs = sorted[std::max<std::size_t>(rank, 1) - 1];
  s.mean_abs = std::min(s.mean_abs, s.p99_abs);
  s.worst_point = points[worst];
  s.full_rank_fraction = static_cast<double>(full) / static_cast<double>(s.count);
  s.pass = s.full_rank_fraction >= ae_fraction;
  if (full != s.count) {
    std::ostringstream os;
    os << s.count - full << " rank-deficient points (measure-zero set expected)";
    s.note = os.str();
  }
  return s;
}

RankSample column_rank(std::span<const Vector> columns, double threshold) {
  RankSample r;
  if (columns.empty()) return r;
  std::vector<Vector> normalized(columns.begin(), columns.end());
  for (auto& c : normalized) {
    const double nrm = norm_2(c);
    if (!std::isfinite(nrm)) return r;
    if (nrm > 0.0)
      for (auto& v : c) v /= nrm;
  }
  const DenseMatrix m = DenseMatrix::from_columns(normalized);
  const auto est = numerical_rank(m, threshold);
  r.valid = true;
  r.shortfall = columns.size() - std::min(est.rank, columns.size());
  const double largest = est.singular_values.front();
  const std::size_t k = std::min(columns.size(), est.singular_values.size());
  r.relative_gap = largest > 0.0 ? est.singular_values[k - 1] / largest : 0.0;
  return r;
}

namespace {

RankSummary rank_summary(std::size_t columns, const SamplingRegion& region, std::size_t count,
                         const Tolerances& tol, const std::string& name, const std::string& anchor,
                         const std::function<std::vector<Vector>(const Vector&)>& at) {
  if (columns == 0) throw ConfigError("rank statistics need at least one column");
  tol.validate();
  const auto points = sample(region, count);
  std::vector<RankSample> samples(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    samples[i] = guarded_rank([&] { return at(points[i]); }, tol.rank_threshold);
  });
  RankSummary out;
  out.columns = columns;
  out.stats = aggregate_rank(name, anchor, tol.ae_fraction, samples, points);
  out.count = out.stats.count;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].valid) continue;
    if (samples[i].shortfall == 0)
      ++out.full_rank;
    else
      out.deficient_points.push_back(points[i]);
  }
  out.full_rank_fraction = out.stats.full_rank_fraction;
  return out;
}

}  // namespace

RankSummary independence_rank_stats(std::span<const VectorField> fields, const SamplingRegion& region,
                                    std::size_t count, const Tolerances& tol) {
  return rank_summary(fields.size(), region, count, tol, "field_rank", kAnchorFieldRank,
                      [fields](const Vector& x) {
                        std::vector<Vector> cols;
                        for (const auto& X : fields) cols.push_back(X(x));
                        return cols;
                      });
}

RankSummary gradient_rank_stats(std::span<const ScalarField> integrals, const SamplingRegion& region,
                                std::size_t count, const Tolerances& tol) {
  return rank_summary(integrals.size(), region, count, tol, "gradient_rank", kAnchorGradientRank,
                      [integrals](const Vector& x) { return gradients_at(integrals, x); });
}

StructureSummary summarize(const IntegrabilityStructure& s) {
  StructureSummary out;
  out.dim = s.dim;
  out.m = s.m();
  out.integrals = s.integrals.size();
  out.partial = s.partial;
  out.unverified = s.unverified;
  out.note = s.note;
  for (const auto& f : s.fields) out.field_names.push_back(f.name());
  for (const auto& g : s.integrals) out.integral_names.push_back(g.name());
  return out;
}

const ResidualStats* CertificationReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<const ResidualStats*> CertificationReport::failing() const {
  std::vector<const ResidualStats*> out;
  for (const auto& c : conditions)
    if (!c.pass) out.push_back(&c);
  return out;
}

Verdict decide(const std::vector<ResidualStats>& conditions, bool skipped_by_config) {
  for (const auto& c : conditions)
    if (!c.pass) return Verdict::fail;
  if (skipped_by_config || conditions.empty()) return Verdict::unverified;
  return Verdict::pass;
}

CertificationReport certify_structure(const SmoothMap& f, const IntegrabilityStructure& s,
                                      const SamplingRegion& region, const Tolerances& tol,
                                      const CertificationOptions& options) {
  tol.validate();
  s.validate();
  if (s.dim != f.dim()) throw DimensionError("structure and map dimensions differ");
  if (region.dim() != f.dim()) throw DimensionError("sampling region and map dimensions differ");

  CertificationReport report;
  report.map_name = f.name();
  report.structure = summarize(s);
  report.seed = region.seed;
  report.samples = region.sample_count;
  report.tolerances = tol;
  report.flow_times = options.skip_flow ? std::vector<double>{} : options.flow_times;

  const auto& fields = s.fields;
  const auto& integrals = s.integrals;
  const auto mode = options.mode;
  std::vector<Job> jobs;

  // Fields pairwise commute; ordered pairs reported per unordered pair.
  for (std::size_t j = 0; j < fields.size(); ++j)
    for (std::size_t k = j + 1; k < fields.size(); ++k) {
      Job job{"bracket[" + fields[j].name() + "," + fields[k].name() + "]", kAnchorBracket,
              ConditionKind::residual, tol.algebraic_tol};
      job.residual = [&, j, k, mode](const Vector& x) {
        const PointSample a = guarded([&] { return lie_bracket_measured(fields[j], fields[k], x, mode); });
        const PointSample b = guarded([&] { return lie_bracket_measured(fields[k], fields[j], x, mode); });
        if (!a.valid || !b.valid) return PointSample{};
        return b.value > a.value ? b : a;
      };
      jobs.push_back(std::move(job));
    }
  if (!fields.empty()) {
    Job job{"field_rank", kAnchorFieldRank, ConditionKind::rank, tol.ae_fraction};
    job.rank = [&](const Vector& x) {
      return guarded_rank(
          [&] {
            std::vector<Vector> cols;
            for (const auto& X : fields) cols.push_back(X(x));
            return cols;
          },
          tol.rank_threshold);
    };
    jobs.push_back(std::move(job));
  }

  // Integrals are first integrals of every field and independent.
  for (std::size_t k = 0; k < integrals.size(); ++k)
    for (std::size_t j = 0; j < fields.size(); ++j) {
      Job job{"first_integral[" + integrals[k].name() + "," + fields[j].name() + "]",
              kAnchorFirstIntegral, ConditionKind::residual, tol.algebraic_tol};
      job.residual = [&, j, k, mode](const Vector& x) {
        return guarded([&] { return first_integral_measured(integrals[k], fields[j], x, mode); });
      };
      jobs.push_back(std::move(job));
    }
  if (!integrals.empty()) {
    Job job{"gradient_rank", kAnchorGradientRank, ConditionKind::rank, tol.ae_fraction};
    job.rank = [&](const Vector& x) {
      return guarded_rank([&] { return gradients_at(integrals, x); }, tol.rank_threshold);
    };
    jobs.push_back(std::move(job));
  }

  // Compatibility with the map.
  for (std::size_t j = 0; j < fields.size(); ++j) {
    Job job{"commutation[" + fields[j].name() + "]", kAnchorCommutation, ConditionKind::residual,
            tol.algebraic_tol};
    job.residual = [&, j, mode](const Vector& x) {
      return guarded([&] { return infinitesimal_commutation_measured(f, fields[j], x, mode); });
    };
    jobs.push_back(std::move(job));
  }
  for (std::size_t k = 0; k < integrals.size(); ++k) {
    Job job{"invariance[" + integrals[k].name() + "]", kAnchorInvariance, ConditionKind::residual,
            tol.algebraic_tol};
    job.residual = [&, k](const Vector& x) {
      return guarded([&] { return map_invariance_measured(integrals[k], f, x); });
    };
    jobs.push_back(std::move(job));
  }
  if (!options.skip_flow)
    for (std::size_t j = 0; j < fields.size(); ++j)
      for (double t : options.flow_times) {
        Job job{"flow_commutation[" + fields[j].name() + ",t=" + format_time(t) + "]", kAnchorFlow,
                ConditionKind::residual, tol.flow_tol};
        job.flow = true;
        job.residual = [&, j, t](const Vector& x) {
          return guarded([&] { return flow_commutation_measured(f, fields[j], x, t, options.integrator); });
        };
        jobs.push_back(std::move(job));
      }

  if (fields.empty()) {
    report.empty_sections = {"brackets", "field_rank", "first_integrals", "commutation", "flow_commutation"};
    if (integrals.empty()) report.empty_sections.push_back("gradient_rank");
    if (integrals.empty()) report.empty_sections.push_back("invariance");
  } else if (integrals.empty()) {
    report.empty_sections = {"first_integrals", "gradient_rank", "invariance"};
  }
  if (fields.size() == 1) report.empty_sections.insert(report.empty_sections.begin(), "brackets");
  if (options.skip_flow && !fields.empty()) report.skipped_sections.push_back("flow_commutation");

  const auto points = sample(region);
  std::vector<char> usable(points.size(), 1);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!f.in_domain(points[i])) {
      usable[i] = 0;
      ++report.guard_skipped;
    }

  report.conditions = run_jobs(jobs, points, usable, tol.ae_fraction);
  report.verdict = decide(report.conditions, !report.skipped_sections.empty());
  if (s.partial) report.notes.push_back("partial structure: certified condition by condition only");
  if (s.unverified) report.notes.push_back("structure formulas flagged unverified");
  return report;
}

CertificationReport certify_involution(const SmoothMap& f, std::span<const ScalarField> integrals,
                                       const SamplingRegion& region, const Tolerances& tol) {
  tol.validate();
  if (f.dim() % 2 != 0) throw DimensionError("involution checks need an even-dimensional map");
  for (const auto& F : integrals)
    if (F.dim() != f.dim()) throw DimensionError("integral " + F.name() + " has the wrong dimension");
  if (integrals.size() > f.dim() / 2) throw DimensionError("more than n integrals on a 2n-dimensional space");

  CertificationReport report;
  report.map_name = f.name();
  report.structure.dim = f.dim();
  report.structure.integrals = integrals.size();
  report.structure.partial = integrals.size() < f.dim() / 2;
  for (const auto& F : integrals) report.structure.integral_names.push_back(F.name());
  report.seed = region.seed;
  report.samples = region.sample_count;
  report.tolerances = tol;

  std::vector<Job> jobs;
  {
    Job job{"symplecticity", kAnchorSymplectic, ConditionKind::residual, tol.algebraic_tol};
    job.residual = [&](const Vector& z) { return guarded([&] { return symplecticity_measured(f, z); }); };
    jobs.push_back(std::move(job));
  }
  for (std::size_t k = 0; k < integrals.size(); ++k) {
    Job job{"invariance[" + integrals[k].name() + "]", kAnchorInvariance, ConditionKind::residual,
            tol.algebraic_tol};
    job.residual = [&, k](const Vector& z) {
      return guarded([&] { return map_invariance_measured(integrals[k], f, z); });
    };
    jobs.push_back(std::move(job));
  }
  for (std::size_t j = 0; j < integrals.size(); ++j)
    for (std::size_t k = j; k < integrals.size(); ++k) {
      Job job{"poisson[" + integrals[j].name() + "," + integrals[k].name() + "]", kAnchorPoisson,
              ConditionKind::residual, tol.algebraic_tol};
      job.residual = [&, j, k](const Vector& z) {
        return guarded([&] { return poisson_bracket_measured(integrals[j], integrals[k], z); });
      };
      jobs.push_back(std::move(job));
    }
  if (!integrals.empty()) {
    Job job{"gradient_rank", kAnchorGradientRank, ConditionKind::rank, tol.ae_fraction};
    job.rank = [&](const Vector& z) {
      return guarded_rank([&] { return gradients_at(integrals, z); }, tol.rank_threshold);
    };
    jobs.push_back(std::move(job));
  }

  const auto points = sample(region);
  std::vector<char> usable(points.size(), 1);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!f.in_domain(points[i])) {
      usable[i] = 0;
      ++report.guard_skipped;
    }
  report.conditions = run_jobs(jobs, points, usable, tol.ae_fraction);
  report.verdict = decide(report.conditions, false);
  if (report.structure.partial)
    report.notes.push_back("checks restricted to the supplied integrals (fewer than n)");
  return report;
}

}  // namespace dynint
