#include "dynint/core/function.hpp"

#include <cmath>
#include <limits>

namespace dynint {

VectorFunction::VectorFunction(std::string name, std::size_t in_dim, std::size_t out_dim,
                               VecFn<double> eval, VecFn<Jet1> eval_jet, VecFn<Jet2> eval_jet2,
                               JacobianFn analytic_jacobian)
    : name_(std::move(name)),
      in_dim_(in_dim),
      out_dim_(out_dim),
      eval_(std::move(eval)),
      eval_jet_(std::move(eval_jet)),
      eval_jet2_(std::move(eval_jet2)),
      analytic_jacobian_(std::move(analytic_jacobian)) {
  if (!eval_) throw ConfigError(name_ + ": missing evaluator");
  if (in_dim_ > kMaxSeeds) throw DimensionError(name_ + ": dimension exceeds jet capacity");
}

Vector VectorFunction::operator()(std::span<const double> x) const { return eval<double>(x); }

DenseMatrix VectorFunction::jacobian(std::span<const double> x, DerivativeMode mode) const {
  check_in(x.size());
  if (mode == DerivativeMode::finite_difference) return finite_difference_jacobian(eval_, out_dim_, x);
  if (eval_jet_) {
    std::vector<Jet1> xj(in_dim_);
    for (std::size_t i = 0; i < in_dim_; ++i) xj[i] = Jet1::variable(x[i], in_dim_, i);
    std::vector<Jet1> out(out_dim_);
    eval_jet_(xj, out);
    DenseMatrix m(out_dim_, in_dim_);
    for (std::size_t r = 0; r < out_dim_; ++r)
      for (std::size_t c = 0; c < in_dim_; ++c) m(r, c) = out[r].d(c);
    return m;
  }
  if (analytic_jacobian_) {
    DenseMatrix m = analytic_jacobian_(x);
    if (m.rows() != out_dim_ || m.cols() != in_dim_)
      throw DimensionError(name_ + ": analytic Jacobian has wrong shape");
    return m;
  }
  throw DerivativeUnavailable(name_ + " is a black box; request finite differences explicitly");
}

std::vector<Jet1> VectorFunction::jacobian(std::span<const Jet1> x) const {
  check_in(x.size());
  if (!eval_jet2_) throw DerivativeUnavailable(name_ + " has no second-order jet evaluator");
  std::vector<Jet2> xj(in_dim_);
  for (std::size_t i = 0; i < in_dim_; ++i) xj[i] = Jet2::variable(x[i], in_dim_, i);
  std::vector<Jet2> out(out_dim_);
  eval_jet2_(xj, out);
  std::vector<Jet1> m(out_dim_ * in_dim_);
  for (std::size_t r = 0; r < out_dim_; ++r)
    for (std::size_t c = 0; c < in_dim_; ++c) m[r * in_dim_ + c] = out[r].d(c);
  return m;
}

DenseMatrix finite_difference_jacobian(const VecFn<double>& f, std::size_t out_dim,
                                       std::span<const double> x) {
  const std::size_t n = x.size();
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  DenseMatrix m(out_dim, n);
  Vector xp(x.begin(), x.end()), xm(x.begin(), x.end()), fp(out_dim), fm(out_dim);
  for (std::size_t c = 0; c < n; ++c) {
    const double h = base * std::max(1.0, std::fabs(x[c]));
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    const double width = xp[c] - xm[c];
    f(xp, fp);
    f(xm, fm);
    for (std::size_t r = 0; r < out_dim; ++r) m(r, c) = (fp[r] - fm[r]) / width;
    xp[c] = xm[c] = x[c];
  }
  return m;
}

}  // namespace dynint
