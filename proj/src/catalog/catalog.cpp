#include "dynint/catalog/catalog.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "dynint/constructions/constructions.hpp"

namespace dynint {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"affine1d",
               "f(x) = a x + b on the line with v(x) = x + b/(a-1), or v = 1 when a = 1",
               {{"a", "real", "2", "a != 0", "slope"}, {"b", "real", "3", "any", "offset"}},
               "PASS",
               {"translation time ln(a) along v when a > 0 and a != 1"},
               "verified",
               ""});
  c.push_back({"rigid_rotation",
               "f(x) = x + a on the circle of length 2 pi with v = 1",
               {{"a", "real", "1", "any", "rotation angle"}},
               "PASS",
               {"rotation number a/(2 pi) mod 1", "Lyapunov exponent 0"},
               "verified",
               ""});
  c.push_back({"warned_circle",
               "f(x) = x + pi/k + eps sin^2(k x) on the circle of length 2 pi",
               {{"k", "int", "2", "k >= 1", "frequency"}, {"eps", "real", "0.3", "0 < eps < 1/k", "amplitude"}},
               "none",
               {"periodic orbit of period 2k through the multiples of pi/k",
                "f^j(x0) - j pi/k increasing and bounded by pi/k", "rotation number 1/(2k)"},
               "none",
               "not C^1 integrable although near-identity; ships without a structure"});
  c.push_back({"linear",
               "f(x) = A x with A in real Jordan form given as eigenvalue:size blocks",
               {{"blocks", "string", "2:3", "comma-separated eigenvalue:size, eigenvalues != 0, n <= 16",
                 "Jordan blocks"}},
               "PASS",
               {"n commuting linear fields, no integrals"},
               "verified",
               "several blocks of size >= 2 use per-block generators"});
  c.push_back({"cat_map",
               "f(x) = A x mod 1 with A = [[2,1],[1,1]] on the torus",
               {},
               "none",
               {"largest Lyapunov exponent ln((3+sqrt 5)/2)", "hyperbolic periodic points of every period"},
               "none",
               "no structure certified; not C^1 integrable"});
  c.push_back({"lyness",
               "f(x) = (x2, ..., xn, (x2 + ... + xn + a)/x1) on the positive orthant",
               {{"n", "int", "2", "2 <= n <= 5", "dimension"},
                {"a", "real", "1", "a > 0", "parameter"},
                {"symmetry", "bool", "1", "0 or 1", "include the printed symmetry v1 (n >= 3)"}},
               "PASS for the integrals",
               {"F1, F2 (n >= 3, product over j = 1..n-1) and F3 (odd n) invariant",
                "n = 2, a = 1: f^5 = id"},
               "unverified",
               "the printed v1 is shipped as found and does not commute with f numerically"});
  c.push_back({"twist",
               "(q, p) -> (q + grad H(p), p) with fields d/dq_j and integrals p_j",
               {{"n", "int", "2", "1 <= n <= 8", "degrees of freedom"},
                {"H", "string", "p1^2/2+p1*p2", "expression in p1..pn", "Hamiltonian"}},
               "PASS",
               {"translation vector grad H(p)", "Lyapunov exponents 0"},
               "verified",
               ""});
  return c;
}

struct Params {
  const CatalogEntry& entry;
  std::map<std::string, std::string> values;
  ParamList resolved;

  Params(const CatalogEntry& e, const std::map<std::string, std::string>& given) : entry(e), values(given) {
    std::set<std::string> known;
    for (const auto& p : e.params) known.insert(p.name);
    for (const auto& [k, v] : given)
      if (!known.count(k)) throw ConfigError(e.name + ": unknown parameter '" + k + "'");
    for (const auto& p : e.params) {
      auto it = values.find(p.name);
      if (it == values.end()) values[p.name] = p.default_value;
      resolved.emplace_back(p.name, values[p.name]);
    }
  }

  const std::string& text(const std::string& name) const { return values.at(name); }

  double real(const std::string& name) const {
    const std::string& s = text(name);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(entry.name + ": parameter " + name + " must be a finite number, got '" + s + "'");
  }

  long integer(const std::string& name) const {
    const std::string& s = text(name);
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(entry.name + ": parameter " + name + " must be an integer, got '" + s + "'");
  }

  bool flag(const std::string& name) const {
    const std::string& s = text(name);
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ConfigError(entry.name + ": parameter " + name + " must be 0 or 1, got '" + s + "'");
  }
};

SamplingRegion box(std::size_t n, double lo, double hi, PointPredicate guard = {}) {
  return SamplingRegion{Vector(n, lo), Vector(n, hi), 0.0, std::move(guard), 1000, 42};
}


}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = make_catalog();
  return entries;
}

const CatalogEntry& find_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw ConfigError("unknown map '" + name + "'");
}

BuiltSystem build(const std::string& name, const std::map<std::string, std::string>& given) {
  const CatalogEntry& entry = find_entry(name);
  Params p(entry, given);
  BuiltSystem sys;
  sys.name = name;

  if (name == "affine1d") {
    const double a = p.real("a"), b = p.real("b");
    if (a == 0.0) throw ConfigError("affine1d: a = 0 does not define a diffeomorphism");
    sys.map = affine1d_map(a, b);
    IntegrabilityStructure s;
    s.dim = 1;
    s.fields.push_back(affine1d_symmetry(a, b));
    sys.structure = s;
    sys.region = box(1, -5.0, 5.0);
  } else if (name == "rigid_rotation") {
    const double a = p.real("a");
    SmoothMap f(VectorFunction::generic("rigid_rotation", 1, 1, [a](auto x, auto o) { o[0] = x[0] + a; }),
                Topology{Coordinate::circle(2 * kPi)});
    f.with_inverse(VectorFunction::generic("rigid_rotation^-1", 1, 1, [a](auto x, auto o) { o[0] = x[0] - a; }));
    sys.map = f;
    IntegrabilityStructure s;
    s.dim = 1;
    s.fields.push_back(VectorField::generic("v1", 1, [](auto, auto o) { o[0] = 1.0; }));
    sys.structure = s;
    sys.region = box(1, 0.0, 2 * kPi);
  } else if (name == "warned_circle") {
    const long k = p.integer("k");
    const double eps = p.real("eps");
    if (k < 1) throw ConfigError("warned_circle: k must be a positive integer");
    if (!(eps > 0.0 && eps < 1.0 / static_cast<double>(k)))
      throw ConfigError("warned_circle: 0 < eps < 1/k required");
    const double kk = static_cast<double>(k);
    const double shift = kPi / kk;
    SmoothMap f(VectorFunction::generic("warned_circle", 1, 1, [kk, shift, eps](auto x, auto o) {
                  using std::sin;
                  const auto s = sin(x[0] * kk);
                  o[0] = x[0] + shift + eps * s * s;
                }),
                Topology{Coordinate::circle(2 * kPi)});
    sys.map = f;
    sys.region = box(1, 0.0, 2 * kPi);
    sys.label = "no structure certified";
  } else if (name == "linear") {
    const JordanBlockSpec spec = JordanBlockSpec::parse(p.text("blocks"));
    sys.map = linear_map(spec.matrix());
    sys.structure = linear_commutative_family(spec);
    sys.region = box(spec.dim(), -1.0, 1.0);
  } else if (name == "cat_map") {
    SmoothMap f(VectorFunction::generic("cat_map", 2, 2,
                                        [](auto x, auto o) {
                                          o[0] = 2.0 * x[0] + x[1];
                                          o[1] = x[0] + x[1];
                                        }),
                Topology{Coordinate::circle(1.0), Coordinate::circle(1.0)});
    f.with_inverse(VectorFunction::generic("cat_map^-1", 2, 2, [](auto x, auto o) {
      o[0] = x[0] - x[1];
      o[1] = 2.0 * x[1] - x[0];
    }));
    sys.map = f;
    sys.region = box(2, 0.0, 1.0);
    sys.label = "no structure certified";
  } else if (name == "lyness") {
    const long n = p.integer("n");
    const double a = p.real("a");
    if (n < 2 || n > 5) throw ConfigError("lyness: n must be in [2, 5]");
    if (!(a > 0.0)) throw ConfigError("lyness: a > 0 required");
    const std::size_t nn = static_cast<std::size_t>(n);
    sys.map = lyness_map(nn, a);
    IntegrabilityStructure s;
    s.dim = nn;
    s.integrals = lyness_integrals(nn, a);
    if (nn >= 3 && p.flag("symmetry")) {
      s.fields.push_back(lyness_symmetry(nn));
      s.unverified = true;
      s.note = "v1 transcribed as printed; unverified";
      // (1, 2) for n = 3: the symmetry replaces the third integral.
      if (nn == 3) s.integrals.pop_back();
    }
    s.partial = !s.complete();
    sys.structure = s;
    sys.region = box(nn, 0.1, 10.0, sys.map.guard());
  } else if (name == "twist") {
    const long n = p.integer("n");
    if (n < 1 || n > 8) throw ConfigError("twist: n must be in [1, 8]");
    TwistSystem t = twist_system(p.text("H"), static_cast<std::size_t>(n));
    sys.map = t.map;
    sys.structure = t.structure;
    sys.region = box(2 * static_cast<std::size_t>(n), -2.0, 2.0);
  }
  sys.params = p.resolved;
  sys.map.with_invariant_region(true);
  return sys;
}

}  // namespace dynint
