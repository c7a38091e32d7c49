#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dynint/core/structure.hpp"

namespace dynint {

struct JordanBlock {
  double eigenvalue = 1.0;
  std::size_t size = 1;
};

// Real Jordan form: each block has its eigenvalue on the diagonal and ones
// on the subdiagonal.
struct JordanBlockSpec {
  std::vector<JordanBlock> blocks;

  std::size_t dim() const;
  DenseMatrix matrix() const;
  void validate() const;
  // "2:3,0.5:1" -> blocks (eigenvalue:size), comma separated.
  static JordanBlockSpec parse(const std::string& text);
  std::string to_string() const;
};

// f(x) = A x.
SmoothMap linear_map(const DenseMatrix& a, std::string name = "linear");
// v(x) = M x, evaluable at every jet level.
VectorField linear_field(std::string name, const DenseMatrix& m);

/// n commuting linear fields for f(x) = A x, A in the given Jordan form.
///
/// A single nontrivial block yields v1 = A x and the shift fields
/// v_{j+1}(x) = sum_k x_{i+k} e_{i+k+j} of that block; size-one blocks
/// contribute coordinate scaling fields x_i e_i. With several nontrivial
/// blocks each one contributes its own restricted A_b x_b plus shifts.
IntegrabilityStructure linear_commutative_family(const JordanBlockSpec& spec);

// v(x) = 1 when a == 1, else v(x) = x + b / (a - 1); requires a != 0.
VectorField affine1d_symmetry(double a, double b);
SmoothMap affine1d_map(double a, double b);

struct LiftedMap {
  SmoothMap base;
  SmoothMap lifted;  // (x, p) -> (f(x), Df(x)^{-T} p) on R^(2n)
};

// Cotangent lift. The lifted Jacobian is exact when the base map has a
// second-order jet evaluator; the lifted inverse exists when the base one does.
LiftedMap cotangent_lift(const SmoothMap& f);

// G(x, p) = p . v(x) on R^(2n).
ScalarField lift_integral(const VectorField& v);
// F(x) viewed on R^(2n), independent of p.
ScalarField lift_base_integral(const ScalarField& F);

struct LiftedStructure {
  LiftedMap map;
  // Base integrals first, then p . v_j for each field.
  std::vector<ScalarField> integrals;
};

LiftedStructure lift_structure(const SmoothMap& f, const IntegrabilityStructure& s);

}  // namespace dynint
