// One line per acceptance criterion; exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "dynint/catalog/catalog.hpp"
#include "dynint/certify/certify.hpp"
#include "dynint/certify/residuals.hpp"
#include "dynint/cli/cli.hpp"
#include "dynint/constructions/constructions.hpp"
#include "dynint/core/iterate.hpp"
#include "dynint/dynamics/dynamics.hpp"
#include "dynint/io/report.hpp"

using namespace dynint;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

bool is_flow(const ResidualStats& s) { return s.name.rfind("flow_commutation", 0) == 0; }

std::string cli_out(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str() + err.str();
}

Outcome twist_certification() {
  Outcome o;
  int code = 0;
  const Json j = Json::parse(cli_out({"certify", "--map", "twist", "--samples", "1000", "--seed", "42"}, &code));
  o.require(code == 0 && j["verdict"] == "PASS", "twist verdict " + j["verdict"].get<std::string>());
  double alg = 0.0, flow = 0.0;
  for (const auto& c : j["conditions"]) {
    if (c["kind"] != "residual") continue;
    const double v = c["max_abs"].get<double>();
    if (c["name"].get<std::string>().rfind("flow", 0) == 0) flow = std::max(flow, v);
    else alg = std::max(alg, v);
  }
  o.require(alg <= 1e-12, "algebraic max " + sci(alg));
  o.require(flow <= 1e-7, "flow max " + sci(flow));
  const Json bad = Json::parse(cli_out({"certify", "--map", "twist", "--samples", "1000", "--corrupt", "1:3:1"}, &code));
  o.require(code == 1 && bad["verdict"] == "FAIL", "corrupted structure not rejected");
  std::string first_failing;
  for (const auto& c : bad["conditions"])
    if (!c["pass"].get<bool>() && first_failing.empty()) {
      first_failing = c["name"];
      o.require(c["worst_point"].is_array() && c["worst_point"].size() == 4, "worst point missing");
    }
  o.require(!first_failing.empty(), "no named failing condition");
  o.detail = "algebraic " + sci(alg) + ", flow " + sci(flow) + ", corrupted fails at " + first_failing +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome linear_families() {
  Outcome o;
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  double brackets = 0, comm = 0, flow = 0, rank = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    JordanBlockSpec spec;
    const std::size_t n = 1 + g() % 6;
    std::size_t used = 0;
    while (used < n) {
      const std::size_t size = std::min<std::size_t>(1 + g() % 4, n - used);
      double l = 0.0;
      while (l == 0.0) l = lam(g);
      spec.blocks.push_back({l, size});
      used += size;
    }
    const auto s = linear_commutative_family(spec);
    SamplingRegion region{Vector(n, -1.0), Vector(n, 1.0), 0.0, {}, 500, 42 + static_cast<std::uint64_t>(trial)};
    Tolerances tol;
    tol.algebraic_tol = 1e-12;
    tol.flow_tol = 1e-7;
    CertificationOptions opts;
    opts.flow_times = {-1.0, 0.7};
    const auto rep = certify_structure(linear_map(spec.matrix()), s, region, tol, opts);
    for (const auto& c : rep.conditions) {
      if (c.name.rfind("bracket", 0) == 0) brackets = std::max(brackets, c.max_abs);
      if (c.name.rfind("commutation", 0) == 0) comm = std::max(comm, c.max_abs);
      if (is_flow(c)) flow = std::max(flow, c.max_abs);
      if (c.name == "field_rank") rank = std::min(rank, c.full_rank_fraction);
    }
    o.require(s.fields.size() == n, "family size for " + spec.to_string());
    o.require(rep.verdict == Verdict::pass, "verdict " + to_string(rep.verdict) + " for " + spec.to_string());
  }
  o.require(brackets <= 1e-12 && comm <= 1e-12 && flow <= 1e-7 && rank >= 0.99, "bounds");
  o.detail = "brackets " + sci(brackets) + ", commutation " + sci(comm) + ", flow " + sci(flow) +
             ", min full-rank fraction " + std::to_string(rank) + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome affine_1d() {
  Outcome o;
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(-3.0, 3.0);
  double inf = 0, flow = 0;
  for (int i = 0; i < 50; ++i) {
    double a = 0.0;
    while (a == 0.0) a = ua(g);
    const double b = ub(g);
    const auto f = affine1d_map(a, b);
    IntegrabilityStructure s;
    s.dim = 1;
    s.fields.push_back(affine1d_symmetry(a, b));
    SamplingRegion region{{-5.0}, {5.0}, 0.0, {}, 100, 42 + static_cast<std::uint64_t>(i)};
    Tolerances tol;
    tol.algebraic_tol = 1e-12;
    tol.flow_tol = 1e-9;
    CertificationOptions opts;
    opts.flow_times = {-1.0, 0.5, 2.0};
    const auto rep = certify_structure(f, s, region, tol, opts);
    for (const auto& c : rep.conditions) {
      if (c.name.rfind("commutation", 0) == 0) inf = std::max(inf, c.max_abs);
      if (is_flow(c)) flow = std::max(flow, c.max_abs);
    }
  }
  o.require(inf <= 1e-12, "infinitesimal " + sci(inf));
  o.require(flow <= 1e-9, "flow " + sci(flow));
  const auto sys = build("affine1d", {{"a", "2"}, {"b", "3"}});
  const std::vector<double> x{1.0};
  const auto t = estimate_translation_vector(sys.map, *sys.structure, x);
  const double err = std::fabs(t.t0[0] - std::log(2.0));
  o.require(err <= 1e-8, "t0 error " + sci(err));
  o.detail = "infinitesimal " + sci(inf) + ", flow " + sci(flow) + ", |t0 - ln 2| " + sci(err) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome lyness_integrals_check() {
  Outcome o;
  std::string info;
  for (int n = 2; n <= 5; ++n) {
    for (int a : {1, 2}) {
      const auto sys = build("lyness", {{"n", std::to_string(n)}, {"a", std::to_string(a)}, {"symmetry", "0"}});
      SamplingRegion region = sys.region;
      region.sample_count = 1000;
      Tolerances tol;
      tol.algebraic_tol = 1e-10;
      const auto rep = certify_structure(sys.map, *sys.structure, region, tol);
      double inv = 0.0;
      for (const auto& c : rep.conditions)
        if (c.name.rfind("invariance", 0) == 0) inv = std::max(inv, c.max_abs);
      const ResidualStats* rank = rep.find("gradient_rank");
      const std::string tag = "n=" + std::to_string(n) + ",a=" + std::to_string(a);
      o.require(inv <= 1e-10, tag + " invariance " + sci(inv));
      o.require(rank && rank->pass,
                tag + " gradient rank full at " + std::to_string(rank ? rank->full_rank_fraction : 0.0) + " of points (" +
                    std::to_string(sys.structure->integrals.size()) + " integrals)");
      if (n == 2 && a == 1) info = "invariance " + sci(inv);
    }
  }
  o.detail = info + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome lyness_periodicity() {
  Outcome o;
  const auto f = lyness_map(2, 1.0);
  SamplingRegion region{Vector(2, 0.1), Vector(2, 10.0), 0.0, f.guard(), 100, 42};
  double worst = 0.0;
  for (const auto& x : sample(region)) {
    const auto y = iterate(f, x, 5);
    for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::fabs(y[i] - x[i]) / std::fabs(x[i]));
  }
  o.require(worst <= 1e-9, "f^5 error " + sci(worst));
  const std::vector<double> x0{1, 2};
  const Orbit orbit = compute_orbit(f, x0, 5);
  const std::vector<std::vector<double>> expect{{1, 2}, {2, 3}, {3, 2}, {2, 1}, {1, 1}, {1, 2}};
  o.require(orbit.points == expect, "orbit of (1,2) is not the exact 5-cycle");
  o.detail = "max relative f^5 error " + sci(worst) + ", exact 5-cycle" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome lyness_dynamics() {
  Outcome o;
  const auto sys = build("lyness", {{"n", "2"}, {"a", "2"}});
  const std::vector<double> x0{1, 2};
  const auto drift = level_set_drift(sys.map, sys.structure->integrals, x0, 10000);
  o.require(drift.drift[0] <= 1e-6, "F1 drift " + sci(drift.drift[0]));
  const double c = (1 + std::sqrt(1 + 4 * 2.0)) / 2;
  const std::vector<double> centre{c, c};
  const auto rot = angular_rotation(sys.map, x0, centre, 10000, 2);
  o.require(rot.monotone, "angle increments change sign");
  o.require(rot.dispersion <= 1e-3, "window dispersion " + sci(rot.dispersion));
  o.detail = "F1 drift " + sci(drift.drift[0]) + ", windows " + std::to_string(rot.window_estimates[0]) + " / " +
             std::to_string(rot.window_estimates[1]) + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome cat_map_chaos() {
  Outcome o;
  const auto sys = build("cat_map");
  const std::vector<double> x0{0.3, 0.7};
  const auto ex = lyapunov_spectrum(sys.map, x0, 100000);
  const double expect = std::log((3 + std::sqrt(5.0)) / 2);
  o.require(std::fabs(ex[0] - expect) <= 5e-3, "lambda1 " + std::to_string(ex[0]));
  const auto pts = find_periodic_points(sys.map, 2, sys.region, 200);
  const std::vector<double> target{0.2, 0.4};
  bool found = false;
  for (const auto& p : pts) {
    if (distance(p.x, target, sys.map.topology()) > 1e-9) continue;
    found = true;
    o.require(p.classification == PeriodicClass::hyperbolic, "(0.2,0.4) not hyperbolic");
    o.require(std::fabs(p.multiplier_moduli[0] - (7 + 3 * std::sqrt(5.0)) / 2) <= 1e-6 &&
                  std::fabs(p.multiplier_moduli[1] - (7 - 3 * std::sqrt(5.0)) / 2) <= 1e-6,
              "multiplier moduli");
  }
  o.require(found, "(0.2,0.4) not found");
  const Json rep = Json::parse(cli_out({"certify", "--map", "cat_map"}));
  o.require(rep["label"] == "no structure certified", "label missing");
  o.detail = "lambda1 " + std::to_string(ex[0]) + ", " + std::to_string(pts.size()) + " period-2 points, label '" +
             rep["label"].get<std::string>() + "'" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome warned_circle() {
  Outcome o;
  const auto sys = build("warned_circle", {{"k", "2"}, {"eps", "0.3"}});
  const std::vector<double> zero{0.0};
  const Orbit orbit = compute_orbit(sys.map, zero, 4);
  double endpoint = 0.0;
  for (int j = 0; j < 4; ++j) endpoint = std::max(endpoint, std::fabs(orbit.points[j][0] - j * kPi / 2));
  endpoint = std::max(endpoint, std::fabs(wrap_difference(orbit.points[4][0], 2 * kPi)));
  o.require(endpoint <= 1e-12, "orbit endpoints off by " + sci(endpoint));
  bool minimal = true;
  for (int j = 1; j < 4; ++j) minimal = minimal && std::fabs(wrap_difference(orbit.points[j][0], 2 * kPi)) > 0.1;
  o.require(minimal, "period shorter than 4");
  double x = 0.1, prev = 0.1;
  bool increasing = true, bounded = true;
  for (int j = 1; j <= 10000; ++j) {
    x = sys.map.lift(std::span<const double>(&x, 1))[0];
    const double d = x - j * kPi / 2;
    increasing = increasing && d > prev;
    bounded = bounded && d < kPi / 2;
    prev = d;
  }
  o.require(increasing && bounded, "drift sequence not increasing and bounded");
  const auto rot = rotation_number(sys.map, 0.1, 10000);
  o.require(std::fabs(rot.value - 0.25) <= 1e-3, "rotation number " + std::to_string(rot.value));
  o.detail = "endpoint error " + sci(endpoint) + ", rotation number " + std::to_string(rot.value) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome cotangent_lift_battery() {
  Outcome o;
  Tolerances tol;
  tol.algebraic_tol = 1e-10;
  {
    JordanBlockSpec spec{{{2.0, 3}}};
    const auto ls = lift_structure(linear_map(spec.matrix()), linear_commutative_family(spec));
    SamplingRegion region{Vector(6, -1.0), Vector(6, 1.0), 0.0, {}, 100, 42};
    const auto rep = certify_involution(ls.map.lifted, ls.integrals, region, tol);
    double sym = 0, inv = 0, poi = 0;
    for (const auto& c : rep.conditions) {
      if (c.name == "symplecticity") sym = c.max_abs;
      if (c.name.rfind("invariance", 0) == 0) inv = std::max(inv, c.max_abs);
      if (c.name.rfind("poisson", 0) == 0) poi = std::max(poi, c.max_abs);
    }
    o.require(ls.integrals.size() == 3, "expected three lifted integrals");
    o.require(rep.verdict == Verdict::pass, "linear lift verdict " + to_string(rep.verdict));
    o.detail = "linear: symplectic " + sci(sym) + ", invariance " + sci(inv) + ", poisson " + sci(poi);
  }
  {
    const auto sys = build("lyness", {{"n", "2"}, {"a", "1"}});
    const auto ls = lift_structure(sys.map, *sys.structure);
    SamplingRegion region{{0.1, 0.1, -1.0, -1.0}, {10.0, 10.0, 1.0, 1.0}, 0.0,
                          [g = sys.map.guard()](std::span<const double> z) { return g(z.first(2)); }, 100, 42};
    const auto rep = certify_involution(ls.map.lifted, ls.integrals, region, tol);
    o.require(rep.verdict == Verdict::pass, "lyness lift verdict " + to_string(rep.verdict));
    o.detail += "; lyness n=2 lift " + to_string(rep.verdict);
  }
  return o;
}

Outcome lyness_symmetry_handling() {
  Outcome o;
  int code = -1;
  const std::string text = cli_out({"certify", "--map", "lyness", "--param", "n=3", "--param", "a=1"}, &code);
  Json rep;
  try {
    rep = Json::parse(text);
  } catch (const std::exception&) {
    o.require(false, "certify did not produce a report (exit " + std::to_string(code) + ")");
    return o;
  }
  const std::string verdict = rep.value("verdict", "");
  o.require(verdict == "PASS" || verdict == "FAIL", "no recorded verdict");
  o.require(rep["structure"]["unverified"] == true, "report does not flag the structure");
  if (verdict == "FAIL") o.require(rep.contains("variant_search"), "variant-search report missing on FAIL");
  const Json list = Json::parse(cli_out({"list"}));
  bool flagged = false;
  for (const auto& m : list["maps"])
    if (m["name"] == "lyness") flagged = m["structure"] == "unverified";
  o.require(flagged, "catalog listing does not flag lyness as unverified");
  o.detail = "verdict " + verdict;
  if (rep.contains("variant_search"))
    o.detail += ", printed residual " + sci(rep["variant_search"]["printed_residual"].get<double>()) + ", best variant '" +
                rep["variant_search"]["best"]["variant"].get<std::string>() + "' " +
                sci(rep["variant_search"]["best"]["max_residual"].get<double>());
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> runs{
      {"certify", "--map", "twist", "--samples", "1000"},
      {"certify", "--map", "twist", "--samples", "1000", "--corrupt", "1:3:1"},
      {"certify", "--map", "linear", "--param", "blocks=-1.5:2,0.5:2,3:1", "--samples", "500", "--flow-times", "-1,0.7"},
      {"certify", "--map", "affine1d", "--param", "a=-2.5", "--param", "b=1", "--flow-times", "-1,0.5,2"},
      {"translation", "--map", "affine1d", "--x0", "1"},
      {"certify", "--map", "lyness", "--param", "n=5", "--param", "a=2", "--param", "symmetry=0"},
      {"orbit", "--map", "lyness", "--x0", "1,2", "-N", "5"},
      {"drift", "--map", "lyness", "--param", "a=2", "--x0", "1,2"},
      {"rotation", "--map", "lyness", "--param", "a=2", "--x0", "1,2"},
      {"lyapunov", "--map", "cat_map", "--x0", "0.3,0.7", "-N", "100000"},
      {"periodic", "--map", "cat_map", "-k", "2"},
      {"certify", "--map", "cat_map"},
      {"orbit", "--map", "warned_circle", "--x0", "0", "-N", "4"},
      {"rotation", "--map", "warned_circle", "--x0", "0.1"},
      {"lift-certify", "--map", "linear", "--param", "blocks=2:3", "--samples", "100"},
      {"lift-certify", "--map", "lyness", "--samples", "100"},
      {"certify", "--map", "lyness", "--param", "n=3"},
  };
  std::size_t compared = 0;
  for (const auto& args : runs) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4", "4", "1"}) {
      setenv("DYNINT_THREADS", threads, 1);
      outputs.push_back(cli_out(args));
    }
    bool same = true;
    for (const auto& s : outputs) same = same && s == outputs[0];
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    o.require(same, "differs: " + joined);
    ++compared;
  }
  unsetenv("DYNINT_THREADS");
  o.detail = std::to_string(compared) + " commands byte-identical across DYNINT_THREADS 1 and 4" +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"twist certification", twist_certification},
      {"linear commuting families", linear_families},
      {"affine 1-D symmetry and translation time", affine_1d},
      {"lyness first integrals", lyness_integrals_check},
      {"lyness 5-periodicity", lyness_periodicity},
      {"lyness conservation dynamics", lyness_dynamics},
      {"cat map chaos evidence", cat_map_chaos},
      {"warned circle map", warned_circle},
      {"cotangent lift involution", cotangent_lift_battery},
      {"lyness symmetry discrepancy handling", lyness_symmetry_handling},
      {"determinism across worker counts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL")
         << " (" << secs << " s) " << o.detail;
    std::cout << line.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
