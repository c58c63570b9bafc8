#pragma once

#include <optional>

#include "aaflow/exterior.hpp"

// Almost-abelian Lie algebras in dimension 6: an abelian ideal n =
// span{e1..e5} and a distinguished generator e6 acting on n by
//   ad_{e6}|_n = [ a  0 ]
//               [ v  A ]
// in the splitting n = R e1 + span{e2..e5}. The fixed complex structure J
// sends e1 -> e6, e2 -> e5, e3 -> e4 (and back with a sign), and the
// reference Hermitian form is omega = e^{16} + e^{25} + e^{34}.

namespace aaflow {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

struct AlmostAbelianStructure {
  double a = 0.0;
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
};

// the six-parameter family of balanced structures with trivial canonical
// bundle: a = 0, v = 0 and A in the pattern below (equivalently: A commutes
// with J restricted to span{e2..e5}, tr A = 0 and tr(JA) = 0)
struct BalancedParams {
  double A22 = 0.0, A23 = 0.0, A24 = 0.0, A25 = 0.0, A32 = 0.0, A35 = 0.0;

  Eigen::Matrix4d to_matrix() const;
  AlmostAbelianStructure to_structure() const;

  // inverse of to_matrix, empty when the matrix is outside the pattern
  static std::optional<BalancedParams> from_matrix(const Eigen::Matrix4d& M, double tol = 1e-12);
};

// matrix of J on the frame (column j holds the image of e_j)
const Matrix6d& complex_structure_matrix();

// J restricted to span{e2..e5}
const Eigen::Matrix4d& restricted_complex_structure();

// omega = e^{16} + e^{25} + e^{34}
const KForm& fundamental_form();

// Psi = k zeta^1 ^ zeta^2 ^ zeta^3 with zeta^j = e^j + i e^{7-j}
ComplexForm holomorphic_volume(std::complex<double> k = 1.0);

// d coefficients of the coframe: de^1 = a e^{16}, de^m = v_m e^{16} +
// sum_j A_mj e^{j6} for m = 2..5, de^6 = 0
StructureConstants structure_constants(const AlmostAbelianStructure& s);

// worst violation of the Jacobi identity over all frame triples, sup norm of
// the cyclic sum [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej]
double jacobi_residual(const StructureConstants& sc);

// || [A, J|_{span e2..e5}] ||_inf; zero iff J is integrable on the structure
double integrability_residual(const AlmostAbelianStructure& s);

// || d Psi ||_inf; zero iff the canonical bundle is trivialized by Psi
double canonical_residual(const AlmostAbelianStructure& s);

// || d(omega ^ omega) ||_inf; zero iff the structure is balanced
double balanced_residual(const AlmostAbelianStructure& s);

// || d omega ||_inf; zero iff the structure is Kahler
double kahler_residual(const AlmostAbelianStructure& s);

// codifferential of omega as a 1-form on the frame,
// (d* omega)(X) = tr ad_{JX} + 1/2 sum_i omega(ad_{J e_i} e_i, JX);
// vanishes exactly when the structure is balanced
Vector6d omega_codifferential(const AlmostAbelianStructure& s);

// symmetric / antisymmetric split A = plus + minus
struct MatrixParts {
  Eigen::Matrix4d plus;
  Eigen::Matrix4d minus;
};
MatrixParts matrix_parts(const Eigen::Matrix4d& A);

// J-compatible positive metric, exchangeable between the 6x6 Gram form g,
// the Hermitian 2-form nu = g(J., .) and the 3x3 complex Gram matrix
class HermitianMetric {
 public:
  static HermitianMetric from_metric(const Matrix6d& g, double tol = 1e-12);
  static HermitianMetric from_two_form(const KForm& nu, double tol = 1e-12);
  // g = 2 Id, nu = 2 omega, complex Gram = Id
  static HermitianMetric canonical();

  const Matrix6d& metric() const { return g_; }
  KForm two_form() const;
  Eigen::Matrix3cd gram() const;

  // squared norm of the holomorphic volume: |k|^2 / det(gram)
  double psi_norm_sq(std::complex<double> k = 1.0) const;

 private:
  explicit HermitianMetric(const Matrix6d& g) : g_(g) {}
  Matrix6d g_;
};

}  // namespace aaflow
