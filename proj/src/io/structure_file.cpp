#include "dynint/io/structure_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dynint/expr/expression.hpp"

namespace dynint {
namespace {

using nlohmann::json;

VectorField field_from(const std::string& name, const std::vector<expr::Expression>& comps, std::size_t dim) {
  return VectorField::generic(name, dim, [comps](auto x, auto out) {
    using T = std::decay_t<decltype(out[0])>;
    for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].template eval<T>(x);
  });
}

ScalarField integral_from(const std::string& name, const expr::Expression& e, std::size_t dim) {
  return ScalarField::generic(name, dim, [e](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return e.template eval<T>(x);
  });
}

}  // namespace

IntegrabilityStructure parse_structure(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("structure file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("structure file must hold a JSON object");
  try {
    IntegrabilityStructure s;
    const bool phase = doc.value("phase_space", false);
    const long dim = doc.at("dim").get<long>();
    if (dim < 1 || dim > static_cast<long>(kMaxSeeds / 2) || (phase && dim % 2 != 0))
      throw ConfigError("structure dim out of range");
    s.dim = static_cast<std::size_t>(dim);
    const auto resolve = expr::coordinate_resolver(s.dim, phase);
    s.partial = doc.value("partial", false);
    s.note = doc.value("note", std::string());

    std::size_t idx = 0;
    for (const auto& f : doc.value("fields", json::array())) {
      ++idx;
      std::string name = "v" + std::to_string(idx);
      json comps = f;
      if (f.is_object()) {
        name = f.value("name", name);
        comps = f.at("components");
      }
      if (!comps.is_array() || comps.size() != s.dim)
        throw ConfigError("field " + name + " needs " + std::to_string(s.dim) + " components");
      std::vector<expr::Expression> exprs;
      for (const auto& c : comps) exprs.push_back(expr::Expression::parse(c.get<std::string>(), resolve));
      s.fields.push_back(field_from(name, exprs, s.dim));
    }
    idx = 0;
    for (const auto& f : doc.value("integrals", json::array())) {
      ++idx;
      std::string name = "F" + std::to_string(idx);
      std::string src;
      if (f.is_object()) {
        name = f.value("name", name);
        src = f.at("expr").get<std::string>();
      } else {
        src = f.get<std::string>();
      }
      s.integrals.push_back(integral_from(name, expr::Expression::parse(src, resolve), s.dim));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed structure file: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("inconsistent structure file: ") + e.what());
  }
}

IntegrabilityStructure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open structure file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_structure(ss.str());
}

}  // namespace dynint
