#include "dynint/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dynint/catalog/catalog.hpp"
#include "dynint/constructions/constructions.hpp"
#include "dynint/io/report.hpp"
#include "dynint/io/structure_file.hpp"

namespace dynint::cli {
namespace {

struct RunConfig {
  std::string command;
  std::string map;
  std::vector<std::string> param_args;
  std::map<std::string, std::string> params;
  std::string structure_file;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::vector<double> flow_times{-1.0, 0.5, 1.0};
  long n = 10000;
  std::string x0_text;
  std::string centre_text;
  long period = 1;
  std::size_t seeds = 200;
  std::size_t windows = 2;
  Tolerances tol;
  bool skip_flow = false;
  bool finite_difference = false;
  std::string corrupt;
  std::string config_file;
  std::string output;
  std::string format = "json";
  bool timing = false;
};

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a finite number");
    }
  }
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

void merge_config_file(RunConfig& cfg, const CLI::App& sub) {
  std::ifstream in(cfg.config_file);
  if (!in) throw ConfigError("cannot open config file " + cfg.config_file);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  auto given = [&](const std::string& opt) { return sub.count(opt) > 0; };
  try {
    for (const auto& [k, v] : doc.items()) {
      if (k == "map") {
        if (!given("--map")) cfg.map = v.get<std::string>();
      } else if (k == "params") {
        for (const auto& [pk, pv] : v.items())
          if (!cfg.params.count(pk)) cfg.params[pk] = pv.is_string() ? pv.get<std::string>() : pv.dump();
      } else if (k == "structure") {
        if (!given("--structure")) cfg.structure_file = v.get<std::string>();
      } else if (k == "samples") {
        if (!given("--samples")) cfg.samples = v.get<std::size_t>();
      } else if (k == "seed") {
        if (!given("--seed")) cfg.seed = v.get<std::uint64_t>();
      } else if (k == "flow_times") {
        if (!given("--flow-times")) cfg.flow_times = v.get<std::vector<double>>();
      } else if (k == "N") {
        if (!given("-N")) cfg.n = v.get<long>();
      } else if (k == "x0") {
        if (!given("--x0")) cfg.x0_text = join_doubles(v.get<std::vector<double>>());
      } else if (k == "format") {
        if (!given("--format")) cfg.format = v.get<std::string>();
      } else if (k == "output") {
        if (!given("--output")) cfg.output = v.get<std::string>();
      } else if (k == "tolerances") {
        if (!given("--algebraic-tol")) cfg.tol.algebraic_tol = v.value("algebraic_tol", cfg.tol.algebraic_tol);
        if (!given("--flow-tol")) cfg.tol.flow_tol = v.value("flow_tol", cfg.tol.flow_tol);
        if (!given("--rank-threshold")) cfg.tol.rank_threshold = v.value("rank_threshold", cfg.tol.rank_threshold);
        if (!given("--ae-fraction")) cfg.tol.ae_fraction = v.value("ae_fraction", cfg.tol.ae_fraction);
      } else {
        throw ConfigError("unknown config key '" + k + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config file: ") + e.what());
  }
}

Json config_json(const RunConfig& cfg, const BuiltSystem* sys) {
  Json j;
  j["command"] = cfg.command;
  j["map"] = cfg.map;
  Json p = Json::object();
  if (sys)
    for (const auto& [k, v] : sys->params) p[k] = v;
  j["params"] = p;
  j["structure_source"] = cfg.structure_file.empty() ? "catalog" : "file:" + cfg.structure_file;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerances"] = to_json(cfg.tol);
  j["flow_times"] = cfg.flow_times;
  j["N"] = cfg.n;
  j["x0"] = cfg.x0_text;
  j["format"] = cfg.format;
  if (cfg.command == "periodic") {
    j["period"] = cfg.period;
    j["seeds"] = cfg.seeds;
  }
  if (cfg.command == "rotation") {
    j["windows"] = cfg.windows;
    j["centre"] = cfg.centre_text;
  }
  if (!cfg.corrupt.empty()) j["corrupt"] = cfg.corrupt;
  if (cfg.skip_flow) j["skip_flow"] = true;
  if (cfg.finite_difference) j["derivatives"] = "finite_difference";
  return j;
}

Vector start_point(const RunConfig& cfg, const BuiltSystem& sys) {
  if (!cfg.x0_text.empty()) {
    Vector x = parse_doubles(cfg.x0_text, "--x0");
    if (x.size() != sys.map.dim())
      throw ConfigError("--x0 needs " + std::to_string(sys.map.dim()) + " coordinates");
    return x;
  }
  Vector x(sys.region.dim());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * (sys.region.lo[i] + sys.region.hi[i]);
  return x;
}

IntegrabilityStructure resolve_structure(const RunConfig& cfg, const BuiltSystem& sys, bool required) {
  IntegrabilityStructure s;
  if (!cfg.structure_file.empty()) {
    s = load_structure(cfg.structure_file);
    if (s.dim != sys.map.dim()) throw ConfigError("structure file dimension does not match the map");
  } else if (sys.structure) {
    s = *sys.structure;
  } else if (required) {
    throw ConfigError(cfg.map + " ships without a structure; pass --structure");
  }
  if (!cfg.corrupt.empty()) {
    long j = 0, c = 0, src = 0;
    char d1 = 0, d2 = 0;
    std::istringstream is(cfg.corrupt);
    if (!(is >> j >> d1 >> c >> d2 >> src) || d1 != ':' || d2 != ':' || j < 1 || c < 1 || src < 1 ||
        static_cast<std::size_t>(j) > s.fields.size())
      throw ConfigError("--corrupt expects J:C:S with a valid field index");
    auto& field = s.fields[static_cast<std::size_t>(j - 1)];
    field = leak_component(field, static_cast<std::size_t>(c - 1), static_cast<std::size_t>(src - 1));
  }
  return s;
}

std::optional<Vector> default_centre(const BuiltSystem& sys) {
  if (sys.name != "lyness") return std::nullopt;
  double n = 0.0, a = 0.0;
  for (const auto& [k, v] : sys.params) {
    if (k == "n") n = std::stod(v);
    if (k == "a") a = std::stod(v);
  }
  const double fixed = ((n - 1.0) + std::sqrt((n - 1.0) * (n - 1.0) + 4.0 * a)) / 2.0;
  return Vector(static_cast<std::size_t>(n), fixed);
}

struct Emitted {
  Json body;
  std::string csv;
  int code = kOk;
};

Emitted do_certify(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  SamplingRegion region = sys.region;
  region.sample_count = cfg.samples;
  region.seed = cfg.seed;
  const bool have_structure = sys.structure.has_value() || !cfg.structure_file.empty();
  if (!have_structure) {
    CertificationReport r;
    r.map_name = sys.map.name();
    r.params = sys.params;
    r.verdict = Verdict::unverified;
    r.seed = cfg.seed;
    r.samples = cfg.samples;
    r.tolerances = cfg.tol;
    r.structure.dim = sys.map.dim();
    r.notes.push_back(sys.label.empty() ? "no structure certified" : sys.label);
    e.body = to_json(r);
    e.body["label"] = sys.label.empty() ? "no structure certified" : sys.label;
    std::ostringstream os;
    write_conditions_csv(os, r);
    e.csv = os.str();
    return e;
  }
  const IntegrabilityStructure s = resolve_structure(cfg, sys, true);
  CertificationOptions opts;
  opts.flow_times = cfg.flow_times;
  opts.skip_flow = cfg.skip_flow;
  if (cfg.finite_difference) opts.mode = DerivativeMode::finite_difference;
  const CertificationReport r = certify_structure(sys.map, s, region, cfg.tol, opts);
  e.body = to_json(r);
  if (!sys.label.empty()) e.body["label"] = sys.label;
  if (s.unverified && r.verdict == Verdict::fail && sys.name == "lyness") {
    std::size_t n = s.dim;
    double a = 0.0;
    for (const auto& [k, v] : sys.params)
      if (k == "a") a = std::stod(v);
    e.body["variant_search"] = to_json(lyness_variant_search(n, a, 128, 50, cfg.seed));
  }
  std::ostringstream os;
  write_conditions_csv(os, r);
  e.csv = os.str();
  e.code = r.verdict == Verdict::fail ? kFail : kOk;
  return e;
}

Emitted do_lift_certify(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const IntegrabilityStructure s = resolve_structure(cfg, sys, true);
  const LiftedStructure lifted = lift_structure(sys.map, s);
  const std::size_t n = sys.map.dim();
  SamplingRegion region = sys.region;
  region.lo.resize(2 * n, -1.0);
  region.hi.resize(2 * n, 1.0);
  if (sys.region.guard) region.guard = [g = sys.region.guard, n](std::span<const double> z) { return g(z.first(n)); };
  region.sample_count = cfg.samples;
  region.seed = cfg.seed;
  const CertificationReport r = certify_involution(lifted.map.lifted, lifted.integrals, region, cfg.tol);
  e.body = to_json(r);
  std::ostringstream os;
  write_conditions_csv(os, r);
  e.csv = os.str();
  e.code = r.verdict == Verdict::fail ? kFail : kOk;
  return e;
}

Emitted do_orbit(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const Orbit orbit = compute_orbit(sys.map, start_point(cfg, sys), cfg.n);
  Json o;
  o["map"] = orbit.map_name;
  o["x0"] = numbers(orbit.x0);
  o["length"] = orbit.length();
  o["guard_failures"] = orbit.guard_failures;
  if (!orbit.note.empty()) o["note"] = orbit.note;
  Json pts = Json::array();
  for (const auto& p : orbit.points) pts.push_back(numbers(p));
  o["points"] = pts;
  e.body["orbit"] = o;
  std::ostringstream os;
  write_orbit_csv(os, orbit);
  e.csv = os.str();
  return e;
}

Emitted do_lyapunov(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const auto ex = lyapunov_spectrum(sys.map, start_point(cfg, sys), cfg.n);
  e.body["exponents"] = numbers(ex);
  if (!sys.label.empty()) e.body["label"] = sys.label;
  std::ostringstream os;
  write_spectrum_csv(os, ex);
  e.csv = os.str();
  return e;
}

Emitted do_rotation(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const Vector x0 = start_point(cfg, sys);
  RotationEstimate r;
  if (sys.map.dim() == 1 && sys.map.topology()[0].is_circle()) {
    r = rotation_number(sys.map, x0[0], cfg.n, cfg.windows);
    e.body["method"] = "circle lift";
  } else {
    std::optional<Vector> centre;
    if (!cfg.centre_text.empty()) centre = parse_doubles(cfg.centre_text, "--centre");
    else centre = default_centre(sys);
    if (!centre) throw ConfigError("rotation on " + cfg.map + " needs --centre");
    if (centre->size() != sys.map.dim()) throw ConfigError("--centre has wrong dimension");
    r = angular_rotation(sys.map, x0, *centre, cfg.n, cfg.windows);
    e.body["method"] = "angle around centre (experimental)";
    e.body["centre"] = numbers(*centre);
  }
  e.body["rotation"] = to_json(r);
  std::ostringstream os;
  write_csv_row(os, {"window", "estimate"});
  for (std::size_t i = 0; i < r.window_estimates.size(); ++i)
    write_csv_row(os, {std::to_string(i + 1), format_double(r.window_estimates[i])});
  e.csv = os.str();
  return e;
}

Emitted do_periodic(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  SamplingRegion region = sys.region;
  region.seed = cfg.seed;
  const auto pts = find_periodic_points(sys.map, cfg.period, region, cfg.seeds);
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  e.body["periodic_points"] = a;
  if (!sys.label.empty()) e.body["label"] = sys.label;
  std::ostringstream os;
  write_periodic_csv(os, pts);
  e.csv = os.str();
  return e;
}

Emitted do_drift(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const IntegrabilityStructure s = resolve_structure(cfg, sys, true);
  const DriftReport d = level_set_drift(sys.map, s.integrals, start_point(cfg, sys), cfg.n);
  e.body["drift"] = to_json(d);
  std::ostringstream os;
  write_csv_row(os, {"integral", "drift"});
  for (std::size_t i = 0; i < d.names.size(); ++i) write_csv_row(os, {d.names[i], format_double(d.drift[i])});
  e.csv = os.str();
  return e;
}

Emitted do_translation(const RunConfig& cfg, const BuiltSystem& sys) {
  Emitted e;
  const IntegrabilityStructure s = resolve_structure(cfg, sys, true);
  const TranslationEstimate t = estimate_translation_vector(sys.map, s, start_point(cfg, sys));
  e.body["translation"] = to_json(t);
  std::ostringstream os;
  write_csv_row(os, {"field", "t0"});
  for (std::size_t i = 0; i < t.t0.size(); ++i) write_csv_row(os, {s.fields[i].name(), format_double(t.t0[i])});
  e.csv = os.str();
  return e;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  Json j;
  j["error"] = Json{{"kind", kind}, {"message", message}, {"exit_code", code}};
  err << j.dump() << '\n';
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_map) {
  auto* m = sub->add_option("--map", cfg.map, "catalog map name");
  if (needs_map) m->required(false);
  sub->add_option("--param", cfg.param_args, "map parameter k=v (repeatable)");
  sub->add_option("--structure", cfg.structure_file, "structure JSON file");
  sub->add_option("--samples", cfg.samples, "sample count");
  sub->add_option("--seed", cfg.seed, "sampling seed");
  sub->add_option("--flow-times", cfg.flow_times, "comma-separated flow times")->delimiter(',');
  sub->add_option("-N", cfg.n, "orbit length");
  sub->add_option("--x0", cfg.x0_text, "starting point, comma-separated");
  sub->add_option("--algebraic-tol", cfg.tol.algebraic_tol, "algebraic residual tolerance");
  sub->add_option("--flow-tol", cfg.tol.flow_tol, "flow residual tolerance");
  sub->add_option("--rank-threshold", cfg.tol.rank_threshold, "relative singular value threshold");
  sub->add_option("--ae-fraction", cfg.tol.ae_fraction, "required full-rank fraction");
  sub->add_option("--config", cfg.config_file, "JSON config merged under explicit flags");
  sub->add_option("--output", cfg.output, "report path (stdout when omitted)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--timing", cfg.timing, "record wall time in the report");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical certification of integrable diffeomorphisms", "dynint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"list", "list catalog maps as JSON"},
      {"certify", "check commuting fields and first integrals at sampled points"},
      {"lift-certify", "cotangent lift, then symplecticity, invariance and involution checks"},
      {"orbit", "iterate the map"},
      {"lyapunov", "Lyapunov spectrum along an orbit"},
      {"rotation", "rotation number estimate"},
      {"periodic", "Newton search for periodic points"},
      {"drift", "conservation drift of the first integrals"},
      {"translation", "translation vector of the commuting flows"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    if (name != "list") add_common(sub, cfg, true);
  }
  subs["list"]->add_option("--output", cfg.output, "output path");
  subs["certify"]->add_flag("--skip-flow", cfg.skip_flow, "skip flow commutation (verdict becomes UNVERIFIED)");
  subs["certify"]->add_flag("--fd", cfg.finite_difference, "finite-difference derivatives");
  for (const char* name : {"certify", "lift-certify", "drift", "translation"})
    subs[name]->add_option("--corrupt", cfg.corrupt, "J:C:S replaces component C of field J by X_C - X_S");
  subs["periodic"]->add_option("-k,--period", cfg.period, "period");
  subs["periodic"]->add_option("--seeds", cfg.seeds, "number of Newton starts");
  subs["rotation"]->add_option("--windows", cfg.windows, "number of windows");
  subs["rotation"]->add_option("--centre", cfg.centre_text, "centre for the angular observable");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "ConfigError", e.what(), kConfigError);
    return kConfigError;
  }

  CLI::App* sub = nullptr;
  for (const auto& [name, s] : subs)
    if (s->parsed()) {
      cfg.command = name;
      sub = s;
    }

  const auto t_start = std::chrono::steady_clock::now();
  try {
    if (cfg.command == "list") {
      Json body;
      body["maps"] = catalog_json();
      const std::string text = dump(envelope(Json{{"command", "list"}}, body, std::nullopt));
      if (cfg.output.empty()) out << text;
      else std::ofstream(cfg.output, std::ios::binary) << text;
      return kOk;
    }
    for (const auto& p : cfg.param_args) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects k=v, got '" + p + "'");
      cfg.params[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (!cfg.config_file.empty()) merge_config_file(cfg, *sub);
    if (cfg.map.empty()) throw ConfigError("--map is required");
    cfg.tol.validate();
    if (cfg.samples < 1) throw ConfigError("--samples must be positive");
    if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");

    const BuiltSystem sys = build(cfg.map, cfg.params);
    Emitted e;
    if (cfg.command == "certify") e = do_certify(cfg, sys);
    else if (cfg.command == "lift-certify") e = do_lift_certify(cfg, sys);
    else if (cfg.command == "orbit") e = do_orbit(cfg, sys);
    else if (cfg.command == "lyapunov") e = do_lyapunov(cfg, sys);
    else if (cfg.command == "rotation") e = do_rotation(cfg, sys);
    else if (cfg.command == "periodic") e = do_periodic(cfg, sys);
    else if (cfg.command == "drift") e = do_drift(cfg, sys);
    else if (cfg.command == "translation") e = do_translation(cfg, sys);

    std::optional<double> wall;
    if (cfg.timing)
      wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    const std::string text = cfg.format == "csv" ? e.csv : dump(envelope(config_json(cfg, &sys), e.body, wall));
    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + cfg.output);
      f << text;
    }
    return e.code;
  } catch (const ConfigError& e) {
    write_error(err, e.kind(), e.what(), kConfigError);
    return kConfigError;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what(), kRuntimeError);
    return kRuntimeError;
  } catch (const std::exception& e) {
    write_error(err, "Error", e.what(), kRuntimeError);
    return kRuntimeError;
  }
}

}  // namespace dynint::cli
