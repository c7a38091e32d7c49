#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynint/core/sampling.hpp"
#include "dynint/core/structure.hpp"

namespace dynint {

struct ParamSpec {
  std::string name;
  std::string type;  // real | int | bool | string
  std::string default_value;
  std::string range;
  std::string description;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::string expected_verdict;  // PASS, or "none" when no structure ships
  std::vector<std::string> expected_facts;
  std::string structure_status;  // verified | unverified | none
  std::string remark;
};

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct BuiltSystem {
  std::string name;
  ParamList params;  // resolved, schema order
  SmoothMap map;
  std::optional<IntegrabilityStructure> structure;
  SamplingRegion region;
  std::string label;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& find_entry(const std::string& name);

// Unknown names, unknown or malformed parameters and out-of-range values
// raise ConfigError.
BuiltSystem build(const std::string& name, const std::map<std::string, std::string>& params = {});

// Lyness map on (0, inf)^n.
SmoothMap lyness_map(std::size_t n, double a);
// F2's product runs over j = 1..B.
std::size_t lyness_f2_bound(std::size_t n);
std::vector<ScalarField> lyness_integrals(std::size_t n, double a);
// Values of F1, F2 (n >= 3) and F3 (odd n) at x.
std::vector<double> lyness_integral_values(std::size_t n, double a, std::span<const double> x);
double lyness_f3(std::size_t n, double a, std::span<const double> x);

// One combination of sign and index-range perturbations of the printed v1.
struct LynessVariant {
  bool flip_first_product = false;   // -x2 xn -> +x2 xn in v_11
  bool flip_last_product = false;    // -x1 x_{n-1} -> + in v_1n
  bool flip_middle_product = false;  // +x1 xn -> - in v_1l
  bool swap_middle_difference = false;
  bool first_sum_to_n = false;   // v_11 sum over 1..n
  bool last_sum_from_1 = false;  // v_1n sum over 1..n-1
  bool middle_sum_to_n = false;  // v_1l sum over 1..n
  std::string describe() const;
};

VectorField lyness_symmetry(std::size_t n, const LynessVariant& variant = {});

struct VariantScore {
  LynessVariant variant;
  std::string description;
  double max_residual = 0.0;  // normalized infinitesimal commutation residual
};

struct VariantSearchReport {
  std::size_t n = 0;
  double a = 0.0;
  std::size_t points = 0;
  std::vector<VariantScore> scores;  // enumeration order, variant 0 is the printed form
  std::size_t best = 0;
};

VariantSearchReport lyness_variant_search(std::size_t n, double a, std::size_t max_variants = 100,
                                          std::size_t points = 50, std::uint64_t seed = 42);

// Twist map (q, p) -> (q + grad H(p), p), H written in p1..pn.
struct TwistSystem {
  SmoothMap map;
  IntegrabilityStructure structure;
  std::vector<std::string> gradient;  // symbolic dH/dp_i
};
TwistSystem twist_system(const std::string& hamiltonian, std::size_t n);

// Replaces component c of X by X_c - X_s (0-based); used to build
// deliberately broken structures.
VectorField leak_component(const VectorField& X, std::size_t c, std::size_t s);

}  // namespace dynint
