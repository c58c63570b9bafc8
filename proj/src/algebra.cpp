#include "aaflow/algebra.hpp"

namespace aaflow {

namespace {

// bilinear evaluation of a 2-form on frame-coefficient vectors
double eval_pair(const KForm& two_form, const Vector6d& u, const Vector6d& w) {
  double out = 0.0;
  for (int a = 1; a <= kDim; ++a) {
    for (int b = a + 1; b <= kDim; ++b) {
      const double c = evaluate(two_form, {a, b});
      if (c == 0.0) continue;
      out += c * (u(a - 1) * w(b - 1) - u(b - 1) * w(a - 1));
    }
  }
  return out;
}

// ad matrices of the frame: ad[i] column j holds [e_{i+1}, e_{j+1}]
std::array<Matrix6d, kDim> ad_matrices(const StructureConstants& sc) {
  std::array<Matrix6d, kDim> ad;
  for (int i = 1; i <= kDim; ++i) {
    ad[i - 1].setZero();
    for (int j = 1; j <= kDim; ++j)
      for (int k = 1; k <= kDim; ++k) ad[i - 1](k - 1, j - 1) = sc.bracket_coeff(k, i, j);
  }
  return ad;
}

}  // namespace

Eigen::Matrix4d BalancedParams::to_matrix() const {
  Eigen::Matrix4d M;
  M << A22, A23, A24, A25,
       A32, -A22, -A25, A35,
       -A35, A25, -A22, A32,
       -A25, -A24, A23, A22;
  return M;
}

AlmostAbelianStructure BalancedParams::to_structure() const {
  AlmostAbelianStructure s;
  s.A = to_matrix();
  return s;
}

std::optional<BalancedParams> BalancedParams::from_matrix(const Eigen::Matrix4d& M, double tol) {
  BalancedParams p;
  p.A22 = M(0, 0);
  p.A23 = M(0, 1);
  p.A24 = M(0, 2);
  p.A25 = M(0, 3);
  p.A32 = M(1, 0);
  p.A35 = M(1, 3);
  const double scale = std::max(1.0, M.lpNorm<Eigen::Infinity>());
  if ((p.to_matrix() - M).lpNorm<Eigen::Infinity>() > tol * scale) return std::nullopt;
  return p;
}

const Matrix6d& complex_structure_matrix() {
  static const Matrix6d J = [] {
    Matrix6d m = Matrix6d::Zero();
    m(5, 0) = 1.0;   // e1 -> e6
    m(4, 1) = 1.0;   // e2 -> e5
    m(3, 2) = 1.0;   // e3 -> e4
    m(2, 3) = -1.0;  // e4 -> -e3
    m(1, 4) = -1.0;  // e5 -> -e2
    m(0, 5) = -1.0;  // e6 -> -e1
    return m;
  }();
  return J;
}

const Eigen::Matrix4d& restricted_complex_structure() {
  static const Eigen::Matrix4d J1 = [] {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(3, 0) = 1.0;   // e2 -> e5
    m(2, 1) = 1.0;   // e3 -> e4
    m(1, 2) = -1.0;  // e4 -> -e3
    m(0, 3) = -1.0;  // e5 -> -e2
    return m;
  }();
  return J1;
}

const KForm& fundamental_form() {
  static const KForm omega =
      basis_form({1, 6}) + basis_form({2, 5}) + basis_form({3, 4});
  return omega;
}

ComplexForm holomorphic_volume(std::complex<double> k) {
  using namespace std::complex_literals;
  auto zeta = [](int j) {
    return complexify(basis_form({j})) + 1.0i * complexify(basis_form({7 - j}));
  };
  static const ComplexForm unit = wedge(wedge(zeta(1), zeta(2)), zeta(3));
  return k * unit;
}

StructureConstants structure_constants(const AlmostAbelianStructure& s) {
  StructureConstants sc;
  sc.add_d_term(1, 1, 6, s.a);
  for (int m = 2; m <= 5; ++m) {
    sc.add_d_term(m, 1, 6, s.v(m - 2));
    for (int j = 2; j <= 5; ++j) sc.add_d_term(m, j, 6, s.A(m - 2, j - 2));
  }
  return sc;
}

double jacobi_residual(const StructureConstants& sc) {
  std::array<std::array<Vector6d, kDim>, kDim> br;
  for (int i = 1; i <= kDim; ++i)
    for (int j = 1; j <= kDim; ++j)
      for (int k = 1; k <= kDim; ++k) br[i - 1][j - 1](k - 1) = sc.bracket_coeff(k, i, j);

  auto bracket_vec = [&](const Vector6d& u, int j) {
    Vector6d out = Vector6d::Zero();
    for (int m = 1; m <= kDim; ++m) out += u(m - 1) * br[m - 1][j - 1];
    return out;
  };

  double worst = 0.0;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j)
      for (int k = j + 1; k <= kDim; ++k) {
        const Vector6d cyc = bracket_vec(br[i - 1][j - 1], k) + bracket_vec(br[j - 1][k - 1], i) +
                             bracket_vec(br[k - 1][i - 1], j);
        worst = std::max(worst, cyc.lpNorm<Eigen::Infinity>());
      }
  return worst;
}

double integrability_residual(const AlmostAbelianStructure& s) {
  const Eigen::Matrix4d& J1 = restricted_complex_structure();
  return (s.A * J1 - J1 * s.A).lpNorm<Eigen::Infinity>();
}

double canonical_residual(const AlmostAbelianStructure& s) {
  const auto sc = structure_constants(s);
  return exterior_derivative(holomorphic_volume(), sc).norm_inf();
}

double balanced_residual(const AlmostAbelianStructure& s) {
  const auto sc = structure_constants(s);
  const KForm& omega = fundamental_form();
  return exterior_derivative(wedge(omega, omega), sc).norm_inf();
}

double kahler_residual(const AlmostAbelianStructure& s) {
  const auto sc = structure_constants(s);
  return exterior_derivative(fundamental_form(), sc).norm_inf();
}

Vector6d omega_codifferential(const AlmostAbelianStructure& s) {
  const auto sc = structure_constants(s);
  const auto ad = ad_matrices(sc);
  const Matrix6d& J = complex_structure_matrix();
  const KForm& omega = fundamental_form();

  auto ad_of = [&](const Vector6d& x) {
    Matrix6d out = Matrix6d::Zero();
    for (int i = 0; i < kDim; ++i) out += x(i) * ad[i];
    return out;
  };

  Vector6d out;
  for (int x = 0; x < kDim; ++x) {
    const Vector6d JX = J.col(x);
    double val = ad_of(JX).trace();
    for (int i = 0; i < kDim; ++i) {
      const Vector6d w = ad_of(J.col(i)).col(i);  // ad_{J e_i} e_i
      val += 0.5 * eval_pair(omega, w, JX);
    }
    out(x) = val;
  }
  return out;
}

MatrixParts matrix_parts(const Eigen::Matrix4d& A) {
  MatrixParts p;
  p.plus = 0.5 * (A + A.transpose());
  p.minus = 0.5 * (A - A.transpose());
  return p;
}

HermitianMetric HermitianMetric::from_metric(const Matrix6d& g, double tol) {
  const double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  if ((g - g.transpose()).lpNorm<Eigen::Infinity>() > tol * scale)
    throw std::invalid_argument("metric must be symmetric");
  const Matrix6d& J = complex_structure_matrix();
  if ((g * J - J * g).lpNorm<Eigen::Infinity>() > tol * scale)
    throw std::invalid_argument("metric must commute with the complex structure");
  Eigen::LLT<Matrix6d> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("metric must be positive definite");
  return HermitianMetric(g);
}

HermitianMetric HermitianMetric::from_two_form(const KForm& nu, double tol) {
  if (nu.degree != 2) throw std::invalid_argument("metric 2-form must have degree 2");
  Matrix6d N;
  for (int a = 1; a <= kDim; ++a)
    for (int b = 1; b <= kDim; ++b) N(a - 1, b - 1) = (a == b) ? 0.0 : evaluate(nu, {a, b});
  // g(X, Y) = nu(X, JY); symmetry of the result encodes J-invariance of nu
  return from_metric(N * complex_structure_matrix(), tol);
}

HermitianMetric HermitianMetric::canonical() { return from_metric(2.0 * Matrix6d::Identity()); }

KForm HermitianMetric::two_form() const {
  const Matrix6d N = complex_structure_matrix().transpose() * g_;
  KForm nu(2);
  for (int a = 1; a <= kDim; ++a)
    for (int b = a + 1; b <= kDim; ++b) nu += N(a - 1, b - 1) * basis_form({a, b});
  return nu;
}

Eigen::Matrix3cd HermitianMetric::gram() const { return hermitian_gram(two_form()); }

double HermitianMetric::psi_norm_sq(std::complex<double> k) const {
  return std::norm(k) / gram().determinant().real();
}

}  // namespace aaflow
