#include "aaflow/exterior.hpp"

#include <bit>

namespace aaflow {

namespace {

using Cx = std::complex<double>;

// Change of coframe between the real basis e^1..e^6 and the complex labels
// z0..z2 = zeta^1..zeta^3, z3..z5 = their conjugates, where
// zeta^j = e^j + i e^{7-j}.
std::array<std::array<Cx, 6>, 6> make_e_to_z() {
  std::array<std::array<Cx, 6>, 6> M{};
  const Cx half(0.5, 0.0), mih(0.0, -0.5), pih(0.0, 0.5);
  for (int j = 0; j < 3; ++j) {
    M[j][j] = half;          // e^{j+1} = (zeta^{j+1} + conj)/2
    M[j][j + 3] = half;
    M[5 - j][j] = mih;       // e^{6-j} = -i/2 (zeta^{j+1} - conj)
    M[5 - j][j + 3] = pih;
  }
  return M;
}

std::array<std::array<Cx, 6>, 6> make_z_to_e() {
  std::array<std::array<Cx, 6>, 6> N{};
  const Cx one(1.0, 0.0), pi1(0.0, 1.0), mi1(0.0, -1.0);
  for (int j = 0; j < 3; ++j) {
    N[j][j] = one;           // zeta^{j+1} = e^{j+1} + i e^{6-j}
    N[j][5 - j] = pi1;
    N[j + 3][j] = one;       // conjugate
    N[j + 3][5 - j] = mi1;
  }
  return N;
}

// expand each basis monomial through a coframe substitution, tracking wedge
// reordering signs
Eigen::VectorXcd substitute(const Eigen::VectorXcd& coeffs, int degree,
                            const std::array<std::array<Cx, 6>, 6>& table) {
  const auto& masks = detail::masks_of_degree(degree);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(kBasisCount[degree]);
  std::vector<std::pair<int, Cx>> terms, next;
  for (size_t p = 0; p < masks.size(); ++p) {
    if (coeffs[p] == Cx(0)) continue;
    terms.assign(1, {0, coeffs[p]});
    for (int bit = 0; bit < kDim; ++bit) {
      if (!(masks[p] & (1 << bit))) continue;
      next.clear();
      for (const auto& [m, c] : terms) {
        for (int l = 0; l < kDim; ++l) {
          const Cx w = table[bit][l];
          if (w == Cx(0) || (m & (1 << l))) continue;
          const int s = detail::wedge_sign(m, 1 << l);
          next.emplace_back(m | (1 << l), c * w * double(s));
        }
      }
      terms.swap(next);
    }
    for (const auto& [m, c] : terms) out[detail::position_of_mask(m)] += c;
  }
  return out;
}

Eigen::VectorXcd to_zbasis(const ComplexForm& a) {
  static const auto M = make_e_to_z();
  return substitute(a.coeffs, a.degree, M);
}

ComplexForm from_zbasis(int degree, const Eigen::VectorXcd& z) {
  static const auto N = make_z_to_e();
  ComplexForm out(degree);
  out.coeffs = substitute(z, degree, N);
  return out;
}

// image of the projector (Id + J)/2, with independent columns picked by
// pivoted QR
Eigen::MatrixXd make_j_invariant_basis(int degree) {
  const int n = kBasisCount[degree];
  Eigen::MatrixXd P(n, n);
  for (int col = 0; col < n; ++col) {
    KForm f(degree);
    f.coeffs[col] = 1.0;
    KForm proj = 0.5 * (f + j_action(f));
    P.col(col) = proj.coeffs;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
  const int rank = int(qr.rank());
  Eigen::MatrixXd basis(n, rank);
  const auto perm = qr.colsPermutation().indices();
  for (int c = 0; c < rank; ++c) basis.col(c) = P.col(perm[c]);
  return basis;
}

}  // namespace

const Eigen::MatrixXd& j_invariant_basis(int degree) {
  if (degree < 0 || degree > kDim)
    throw std::invalid_argument("form degree out of range 0..6");
  static std::array<Eigen::MatrixXd, kDim + 1> cache;
  Eigen::MatrixXd& slot = cache[degree];
  if (slot.size() == 0) slot = make_j_invariant_basis(degree);
  return slot;
}

KForm dc(const KForm& a, const StructureConstants& sc) {
  KForm out = j_action(exterior_derivative(j_action(a), sc));
  if (a.degree % 2) out = -out;
  return out;
}

KForm del_delbar(const KForm& a, const StructureConstants& sc) {
  return exterior_derivative(dc(a, sc), sc);
}

ComplexForm bidegree_project(const ComplexForm& a, int p, int q) {
  if (p < 0 || q < 0 || p > 3 || q > 3 || p + q != a.degree)
    throw std::invalid_argument("bidegree (p,q) must satisfy 0<=p,q<=3 and p+q=degree");
  Eigen::VectorXcd z = to_zbasis(a);
  const auto& masks = detail::masks_of_degree(a.degree);
  for (size_t i = 0; i < masks.size(); ++i) {
    const int holo = std::popcount(unsigned(masks[i] & 0b000111));
    const int anti = std::popcount(unsigned(masks[i] & 0b111000));
    if (holo != p || anti != q) z[detail::position_of_mask(masks[i])] = Cx(0);
  }
  return from_zbasis(a.degree, z);
}

Eigen::Matrix3cd hermitian_gram(const KForm& nu) {
  if (nu.degree != 2) throw std::invalid_argument("hermitian_gram expects a 2-form");
  Eigen::Matrix3cd G;
  const Cx I(0.0, 1.0);
  for (int j = 0; j < 3; ++j) {
    const int pj = j + 1, qj = 6 - j;  // Z_j = (e_{pj} - i e_{qj})/2
    for (int k = 0; k < 3; ++k) {
      const int pk = k + 1, qk = 6 - k;
      const Cx val = 0.25 * (Cx(evaluate(nu, {pj, pk})) + I * evaluate(nu, {pj, qk}) -
                             I * evaluate(nu, {qj, pk}) + Cx(evaluate(nu, {qj, qk})));
      G(j, k) = -I * val;
    }
  }
  return G;
}

bool is_positive_one_one(const KForm& nu, double tol) {
  if (nu.degree != 2) return false;
  if (!approx_equal(j_action(nu), nu, tol * std::max(1.0, nu.norm_inf()))) return false;
  Eigen::LLT<Eigen::Matrix3cd> llt(hermitian_gram(nu));
  return llt.info() == Eigen::Success;
}

KForm lefschetz_solve(const KForm& Phi, const KForm& nu) {
  if (Phi.degree != 4) throw std::invalid_argument("lefschetz_solve expects a 4-form");
  if (nu.degree != 2) throw std::invalid_argument("lefschetz_solve expects a 2-form metric");
  if (!is_positive_one_one(nu))
    throw std::invalid_argument("lefschetz_solve requires a positive (1,1)-form");

  const Eigen::MatrixXd& basis2 = j_invariant_basis(2);  // 15 x 9
  const Eigen::MatrixXd& basis4 = j_invariant_basis(4);  // 15 x 9
  const int r = int(basis2.cols());

  // coordinates of Phi in the J-invariant 4-form basis; a residual means Phi
  // has a component outside the real (2,2) space
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr4(basis4);
  Eigen::VectorXd y = qr4.solve(Phi.coeffs);
  const double resid = (basis4 * y - Phi.coeffs).lpNorm<Eigen::Infinity>();
  if (resid > 1e-10 * std::max(1.0, Phi.norm_inf()))
    throw std::invalid_argument("lefschetz_solve requires a real (2,2)-form");

  // matrix of beta -> 2 nu ^ beta restricted to the invariant subspaces
  Eigen::MatrixXd W(kBasisCount[4], r);
  for (int c = 0; c < r; ++c) {
    KForm b(2);
    b.coeffs = basis2.col(c);
    W.col(c) = 2.0 * wedge(nu, b).coeffs;
  }
  Eigen::MatrixXd M = qr4.solve(W);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw std::runtime_error("Lefschetz operator is degenerate");
  Eigen::VectorXd x = lu.solve(y);

  KForm beta(2);
  beta.coeffs = basis2 * x;
  return beta;
}

}  // namespace aaflow
