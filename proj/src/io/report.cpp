#include "dynint/io/report.hpp"

#include <cmath>
#include <cstdio>

namespace dynint {

std::string version() { return DYNINT_VERSION; }

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json to_json(const Tolerances& t) {
  return Json{{"algebraic_tol", t.algebraic_tol},
              {"flow_tol", t.flow_tol},
              {"rank_threshold", t.rank_threshold},
              {"ae_fraction", t.ae_fraction}};
}

Json to_json(const StructureSummary& s) {
  Json j;
  j["dim"] = s.dim;
  j["m"] = s.m;
  j["integrals"] = s.integrals;
  j["fields"] = s.field_names;
  j["integral_names"] = s.integral_names;
  j["partial"] = s.partial;
  j["unverified"] = s.unverified;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

Json to_json(const ResidualStats& s) {
  Json j;
  j["name"] = s.name;
  j["paper_anchor"] = s.anchor;
  j["kind"] = s.kind == ConditionKind::rank ? "rank" : "residual";
  j["count"] = s.count;
  j["skipped"] = s.skipped;
  j["max_abs"] = number(s.max_abs);
  j["mean_abs"] = number(s.mean_abs);
  j["p99_abs"] = number(s.p99_abs);
  j["worst_point"] = s.worst_point.empty() ? Json(nullptr) : numbers(s.worst_point);
  j["scale"] = number(s.scale);
  j["tolerance"] = number(s.tolerance);
  if (s.kind == ConditionKind::rank) j["full_rank_fraction"] = number(s.full_rank_fraction);
  j["pass"] = s.pass;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

Json to_json(const CertificationReport& r) {
  Json j;
  j["map"] = r.map_name;
  j["structure"] = to_json(r.structure);
  Json conds = Json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  j["conditions"] = conds;
  j["empty_sections"] = r.empty_sections;
  j["skipped_sections"] = r.skipped_sections;
  j["guard_skipped"] = r.guard_skipped;
  j["notes"] = r.notes;
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json to_json(const PeriodicPoint& p) {
  Json j;
  j["x"] = numbers(p.x);
  j["period"] = p.period;
  j["minimal_period"] = p.minimal_period;
  j["multiplier_moduli"] = numbers(p.multiplier_moduli);
  j["classification"] = to_string(p.classification);
  return j;
}

Json to_json(const RotationEstimate& r) {
  Json j;
  j["value"] = number(r.value);
  j["window_estimates"] = numbers(r.window_estimates);
  j["dispersion"] = number(r.dispersion);
  j["monotone"] = r.monotone;
  return j;
}

Json to_json(const DriftReport& d) {
  Json j;
  j["iterates"] = d.iterates;
  Json items = Json::array();
  for (std::size_t i = 0; i < d.names.size(); ++i) items.push_back(Json{{"integral", d.names[i]}, {"drift", number(d.drift[i])}});
  j["drift"] = items;
  return j;
}

Json to_json(const TranslationEstimate& t) {
  return Json{{"t0", numbers(t.t0)}, {"residual", number(t.residual)}, {"iterations", t.iterations}};
}

Json to_json(const VariantSearchReport& r) {
  Json j;
  j["n"] = r.n;
  j["a"] = r.a;
  j["points"] = r.points;
  j["variants"] = r.scores.size();
  j["printed_residual"] = r.scores.empty() ? Json(nullptr) : number(r.scores[0].max_residual);
  j["best"] = r.scores.empty() ? Json(nullptr)
                               : Json{{"variant", r.scores[r.best].description},
                                      {"max_residual", number(r.scores[r.best].max_residual)}};
  Json all = Json::array();
  for (const auto& s : r.scores) all.push_back(Json{{"variant", s.description}, {"max_residual", number(s.max_residual)}});
  j["scores"] = all;
  return j;
}

Json catalog_json() {
  Json out = Json::array();
  for (const auto& e : catalog()) {
    Json j;
    j["name"] = e.name;
    j["summary"] = e.summary;
    Json ps = Json::array();
    for (const auto& p : e.params)
      ps.push_back(Json{{"name", p.name},
                        {"type", p.type},
                        {"default", p.default_value},
                        {"range", p.range},
                        {"description", p.description}});
    j["params"] = ps;
    j["structure"] = e.structure_status;
    j["expected_verdict"] = e.expected_verdict;
    j["expected_facts"] = e.expected_facts;
    if (!e.remark.empty()) j["remark"] = e.remark;
    out.push_back(j);
  }
  return out;
}

Json envelope(const Json& config, const Json& body, std::optional<double> wall_time_ms) {
  Json j;
  j["version"] = version();
  j["caveat"] = kCaveat;
  j["config"] = config;
  for (const auto& [k, v] : body.items()) j[k] = v;
  j["wall_time_ms"] = wall_time_ms ? number(*wall_time_ms) : Json(0);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
  std::vector<std::string> header{"k"};
  const std::size_t n = orbit.x0.size();
  for (std::size_t i = 0; i < n; ++i) header.push_back("x" + std::to_string(i + 1));
  write_csv_row(os, header);
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (double v : orbit.points[k]) row.push_back(format_double(v));
    write_csv_row(os, row);
  }
}

void write_spectrum_csv(std::ostream& os, std::span<const double> exponents) {
  write_csv_row(os, {"index", "exponent"});
  for (std::size_t i = 0; i < exponents.size(); ++i)
    write_csv_row(os, {std::to_string(i + 1), format_double(exponents[i])});
}

void write_conditions_csv(std::ostream& os, const CertificationReport& r) {
  write_csv_row(os, {"name", "paper_anchor", "count", "max_abs", "mean_abs", "p99_abs", "worst_point", "scale", "pass"});
  for (const auto& c : r.conditions) {
    std::string worst;
    for (std::size_t i = 0; i < c.worst_point.size(); ++i) worst += (i ? " " : "") + format_double(c.worst_point[i]);
    write_csv_row(os, {c.name, c.anchor, std::to_string(c.count), format_double(c.max_abs), format_double(c.mean_abs),
                       format_double(c.p99_abs), worst, format_double(c.scale), c.pass ? "true" : "false"});
  }
}

void write_periodic_csv(std::ostream& os, const std::vector<PeriodicPoint>& points) {
  write_csv_row(os, {"x", "period", "minimal_period", "multiplier_moduli", "classification"});
  for (const auto& p : points) {
    std::string x, m;
    for (std::size_t i = 0; i < p.x.size(); ++i) x += (i ? " " : "") + format_double(p.x[i]);
    for (std::size_t i = 0; i < p.multiplier_moduli.size(); ++i)
      m += (i ? " " : "") + format_double(p.multiplier_moduli[i]);
    write_csv_row(os, {x, std::to_string(p.period), std::to_string(p.minimal_period), m, to_string(p.classification)});
  }
}

}  // namespace dynint
