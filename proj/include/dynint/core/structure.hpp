#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dynint/core/fields.hpp"

namespace dynint {

/// m commuting vector fields plus first integrals claimed for a map on R^n.
///
/// A complete structure has m + (number of integrals) == n. A partial one
/// carries fewer objects; it is certified condition by condition but never
/// claims (m, n-m)-integrability.
struct IntegrabilityStructure {
  std::size_t dim = 0;
  std::vector<VectorField> fields;
  std::vector<ScalarField> integrals;
  bool partial = false;
  // Formulas not confirmed by the certifier (shipped as found).
  bool unverified = false;
  std::string note;

  std::size_t m() const { return fields.size(); }
  bool complete() const { return fields.size() + integrals.size() == dim; }

  // Throws DimensionError on inconsistent dimensions or counts.
  void validate() const;
};

}  // namespace dynint
