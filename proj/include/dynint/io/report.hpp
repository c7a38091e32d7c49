#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynint/catalog/catalog.hpp"
#include "dynint/certify/certify.hpp"
#include "dynint/dynamics/dynamics.hpp"

namespace dynint {

using Json = nlohmann::ordered_json;

std::string version();

// NaN and infinities become null.
Json number(double v);
Json numbers(std::span<const double> v);

Json to_json(const Tolerances& t);
Json to_json(const StructureSummary& s);
Json to_json(const ResidualStats& s);
Json to_json(const CertificationReport& r);
Json to_json(const PeriodicPoint& p);
Json to_json(const RotationEstimate& r);
Json to_json(const DriftReport& d);
Json to_json(const TranslationEstimate& t);
Json to_json(const VariantSearchReport& r);
Json catalog_json();

// {version, caveat, config, <body keys>, wall_time_ms}. The body is an
// object whose keys are spliced in order.
Json envelope(const Json& config, const Json& body, std::optional<double> wall_time_ms);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

// %.17g
std::string format_double(double v);
// RFC 4180 quoting: fields holding a comma, quote, CR or LF are quoted with
// inner quotes doubled. Records end in LF.
std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

void write_orbit_csv(std::ostream& os, const Orbit& orbit);
void write_spectrum_csv(std::ostream& os, std::span<const double> exponents);
void write_conditions_csv(std::ostream& os, const CertificationReport& r);
void write_periodic_csv(std::ostream& os, const std::vector<PeriodicPoint>& points);

}  // namespace dynint
