#include "dynint/constructions/constructions.hpp"
#include "dynint/numerics/linalg.hpp"

namespace dynint {
namespace {

// q = Df^{-T} p, i.e. solve Df^T q = p. Entries row-major n x n.
template <class T>
std::vector<T> inverse_transpose_apply(const std::vector<T>& df, std::span<const T> p, std::size_t n) {
  std::vector<T> dft(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) dft[c * n + r] = df[r * n + c];
  return solve_linear<T>(std::move(dft), std::vector<T>(p.begin(), p.end()), n);
}

}  // namespace

LiftedMap cotangent_lift(const SmoothMap& f) {
  const std::size_t n = f.dim();
  if (2 * n > kMaxSeeds) throw DimensionError("cotangent lift exceeds jet capacity");
  const VectorFunction base = f.forward();

  VecFn<double> eval = [base, n](std::span<const double> z, std::span<double> out) {
    const auto x = z.first(n);
    const auto y = base(x);
    const DenseMatrix df = base.jacobian(x);
    const std::vector<double> dfv(df.data().begin(), df.data().end());
    const auto q = inverse_transpose_apply<double>(dfv, z.subspan(n), n);
    std::copy(y.begin(), y.end(), out.begin());
    std::copy(q.begin(), q.end(), out.begin() + n);
  };
  VecFn<Jet1> eval_jet;
  if (base.has_jet2())
    eval_jet = [base, n](std::span<const Jet1> z, std::span<Jet1> out) {
      const auto x = z.first(n);
      const auto y = base.eval<Jet1>(x);
      const auto df = base.jacobian(x);
      const auto q = inverse_transpose_apply<Jet1>(df, z.subspan(n), n);
      std::copy(y.begin(), y.end(), out.begin());
      std::copy(q.begin(), q.end(), out.begin() + n);
    };

  Topology topo = f.topology();
  for (std::size_t i = 0; i < n; ++i) topo.push_back(Coordinate::line());
  PointPredicate guard;
  if (f.guard())
    guard = [g = f.guard(), n](std::span<const double> z) { return g(z.first(n)); };

  LiftedMap out{f, SmoothMap(VectorFunction("T*" + f.name(), 2 * n, 2 * n, eval, eval_jet), topo, guard)};
  if (f.invariant_region_declared()) out.lifted.with_invariant_region();
  if (f.has_inverse()) {
    const VectorFunction inv = *f.inverse_function();
    out.lifted.with_inverse(VectorFunction(
        "T*" + f.name() + "^-1", 2 * n, 2 * n, [base, inv, n](std::span<const double> z, std::span<double> o) {
          const auto x = inv(z.first(n));
          const DenseMatrix df = base.jacobian(x);
          const auto p = z.subspan(n);
          for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += df(r, i) * p[r];
            o[n + i] = s;
          }
          std::copy(x.begin(), x.end(), o.begin());
        }));
  }
  return out;
}

ScalarField lift_integral(const VectorField& v) {
  const std::size_t n = v.dim();
  const VectorFunction fn = v.function();
  auto make = [fn, n]<class T>(std::span<const T> z) {
    const auto vx = fn.eval<T>(z.first(n));
    T s(0.0);
    for (std::size_t i = 0; i < n; ++i) s = s + z[n + i] * vx[i];
    return s;
  };
  ScalarFn<Jet1> j1;
  ScalarFn<Jet2> j2;
  if (fn.has_jet()) j1 = [make](std::span<const Jet1> z) { return make(z); };
  if (fn.has_jet2()) j2 = [make](std::span<const Jet2> z) { return make(z); };
  return ScalarField(
      "G[" + v.name() + "]", 2 * n, [make](std::span<const double> z) { return make(z); }, j1, j2);
}

ScalarField lift_base_integral(const ScalarField& F) {
  const std::size_t n = F.dim();
  ScalarFn<Jet1> j1;
  ScalarFn<Jet2> j2;
  if (!F.black_box()) {
    j1 = [F, n](std::span<const Jet1> z) { return F.eval<Jet1>(z.first(n)); };
    j2 = [F, n](std::span<const Jet2> z) { return F.eval<Jet2>(z.first(n)); };
  }
  return ScalarField(
      F.name(), 2 * n, [F, n](std::span<const double> z) { return F(z.first(n)); }, j1, j2);
}

LiftedStructure lift_structure(const SmoothMap& f, const IntegrabilityStructure& s) {
  s.validate();
  if (s.dim != f.dim()) throw DimensionError("structure and map dimensions differ");
  LiftedStructure out{cotangent_lift(f), {}};
  for (const auto& F : s.integrals) out.integrals.push_back(lift_base_integral(F));
  for (const auto& v : s.fields) out.integrals.push_back(lift_integral(v));
  return out;
}

}  // namespace dynint
