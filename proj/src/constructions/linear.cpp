#include <charconv>
#include <sstream>

#include "dynint/constructions/constructions.hpp"
#include "dynint/numerics/linalg.hpp"

namespace dynint {

std::size_t JordanBlockSpec::dim() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size;
  return n;
}

void JordanBlockSpec::validate() const {
  if (blocks.empty()) throw ConfigError("Jordan block spec is empty (n = 0)");
  for (const auto& b : blocks) {
    if (b.size < 1) throw ConfigError("Jordan blocks must have size >= 1");
    if (b.eigenvalue == 0.0) throw ConfigError("zero eigenvalue: A is not invertible");
    if (!std::isfinite(b.eigenvalue)) throw ConfigError("non-finite eigenvalue");
  }
  if (dim() > kMaxSeeds / 2) throw ConfigError("linear maps are limited to n <= 16");
}

DenseMatrix JordanBlockSpec::matrix() const {
  validate();
  DenseMatrix a(dim(), dim());
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t k = 0; k < b.size; ++k) {
      a(offset + k, offset + k) = b.eigenvalue;
      if (k + 1 < b.size) a(offset + k + 1, offset + k) = 1.0;
    }
    offset += b.size;
  }
  return a;
}

JordanBlockSpec JordanBlockSpec::parse(const std::string& text) {
  JordanBlockSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    JordanBlock b;
    const std::string ev = item.substr(0, colon);
    try {
      std::size_t used = 0;
      b.eigenvalue = std::stod(ev, &used);
      if (used != ev.size()) throw std::invalid_argument(ev);
      if (colon != std::string::npos) {
        const std::string sz = item.substr(colon + 1);
        const long v = std::stol(sz, &used);
        if (used != sz.size() || v < 1) throw std::invalid_argument(sz);
        b.size = static_cast<std::size_t>(v);
      }
    } catch (const std::exception&) {
      throw ConfigError("malformed Jordan block '" + item + "' (expected eigenvalue:size)");
    }
    spec.blocks.push_back(b);
  }
  spec.validate();
  return spec;
}

std::string JordanBlockSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) os << ',';
    os << blocks[i].eigenvalue << ':' << blocks[i].size;
  }
  return os.str();
}

VectorField linear_field(std::string name, const DenseMatrix& m) {
  if (!m.square()) throw DimensionError("linear field needs a square matrix");
  struct Entry {
    std::size_t r, c;
    double v;
  };
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) entries.push_back({r, c, m(r, c)});
  const std::size_t n = m.rows();
  return VectorField::generic(std::move(name), n, [entries](auto x, auto out) {
    for (auto& o : out) o = 0.0;
    for (const auto& e : entries) out[e.r] = out[e.r] + e.v * x[e.c];
  });
}

SmoothMap linear_map(const DenseMatrix& a, std::string name) {
  const VectorField f = linear_field(std::move(name), a);
  SmoothMap map(f.function());
  map.with_inverse(linear_field(f.name() + "^-1", inverse(a)).function());
  return map;
}

namespace {

// The j-th power of the subdiagonal shift restricted to a block.
DenseMatrix block_shift(std::size_t n, std::size_t offset, std::size_t size, std::size_t j) {
  DenseMatrix s(n, n);
  for (std::size_t k = 0; k + j < size; ++k) s(offset + k + j, offset + k) = 1.0;
  return s;
}

}  // namespace

IntegrabilityStructure linear_commutative_family(const JordanBlockSpec& spec) {
  spec.validate();
  const std::size_t n = spec.dim();
  const DenseMatrix a = spec.matrix();
  IntegrabilityStructure s;
  s.dim = n;

  std::size_t nontrivial = 0;
  for (const auto& b : spec.blocks)
    if (b.size >= 2) ++nontrivial;

  std::vector<DenseMatrix> generators;
  if (nontrivial == 1 || n == 1) generators.push_back(a);
  std::size_t offset = 0;
  for (const auto& b : spec.blocks) {
    if (b.size >= 2) {
      if (nontrivial > 1) {
        DenseMatrix restricted(n, n);
        for (std::size_t r = 0; r < b.size; ++r)
          for (std::size_t c = 0; c < b.size; ++c) restricted(offset + r, offset + c) = a(offset + r, offset + c);
        generators.push_back(restricted);
      }
      for (std::size_t j = 1; j < b.size; ++j) generators.push_back(block_shift(n, offset, b.size, j));
    }
    offset += b.size;
  }
  offset = 0;
  for (const auto& b : spec.blocks) {
    if (b.size == 1 && n > 1) {
      DenseMatrix e(n, n);
      e(offset, offset) = 1.0;
      generators.push_back(e);
    }
    offset += b.size;
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    s.fields.push_back(linear_field("v" + std::to_string(i + 1), generators[i]));
  s.validate();
  return s;
}

}  // namespace dynint
