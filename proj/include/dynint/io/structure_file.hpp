#pragma once

#include <string>

#include "dynint/core/structure.hpp"

namespace dynint {

/// Reads a structure from JSON:
///
///   {"dim": 2, "phase_space": false,
///    "fields": [{"name": "v1", "components": ["x1", "1"]}],
///    "integrals": [{"name": "F1", "expr": "x1*x2"}],
///    "partial": false}
///
/// Components and integrals use x1..xn; with "phase_space": true the
/// dimension is 2n and p1..pn name the last n coordinates. Fields may also be
/// given as bare arrays of strings and integrals as bare strings.
IntegrabilityStructure parse_structure(const std::string& json_text);
IntegrabilityStructure load_structure(const std::string& path);

}  // namespace dynint
