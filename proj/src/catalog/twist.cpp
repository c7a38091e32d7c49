#include "dynint/catalog/catalog.hpp"

#include <type_traits>
#include "dynint/expr/expression.hpp"

namespace dynint {

using expr::Expression;
using expr::momentum_resolver;

TwistSystem twist_system(const std::string& hamiltonian, std::size_t n) {
  if (n < 1 || 2 * n > kMaxSeeds / 2) throw ConfigError("twist needs n in [1, 8]");
  const Expression h = Expression::parse(hamiltonian, momentum_resolver(n));
  std::vector<Expression> grad;
  TwistSystem sys;
  for (std::size_t i = 0; i < n; ++i) {
    grad.push_back(h.derivative(i));
    sys.gradient.push_back(grad.back().to_string());
  }
  auto step = [grad, n](double sign) {
    return [grad, n, sign](auto z, auto out) {
      using T = std::decay_t<decltype(out[0])>;
      const auto p = z.subspan(n);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = z[i] + sign * grad[i].template eval<T>(p);
        out[n + i] = z[n + i];
      }
    };
  };
  sys.map = SmoothMap(VectorFunction::generic("twist", 2 * n, 2 * n, step(1.0)));
  sys.map.with_inverse(VectorFunction::generic("twist^-1", 2 * n, 2 * n, step(-1.0)));

  sys.structure.dim = 2 * n;
  for (std::size_t j = 0; j < n; ++j) {
    sys.structure.fields.push_back(VectorField::generic("d/dq" + std::to_string(j + 1), 2 * n, [j](auto, auto out) {
      for (auto& o : out) o = 0.0;
      out[j] = 1.0;
    }));
  }
  for (std::size_t j = 0; j < n; ++j)
    sys.structure.integrals.push_back(
        ScalarField::generic("p" + std::to_string(j + 1), 2 * n, [j, n](auto z) { return z[n + j]; }));
  sys.structure.validate();
  return sys;
}

VectorField leak_component(const VectorField& X, std::size_t c, std::size_t s) {
  if (c >= X.dim() || s >= X.dim()) throw ConfigError("corrupted component out of range");
  return VectorField::generic(X.name() + "'", X.dim(), [X, c, s](auto x, auto out) {
    using T = std::decay_t<decltype(out[0])>;
    const auto v = X.template eval<T>(x);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    out[c] = v[c] - v[s];
  });
}

}  // namespace dynint
