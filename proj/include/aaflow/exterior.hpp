#pragma once

#include "aaflow/forms.hpp"

// Invariant exterior calculus on a 6-dimensional Lie algebra. A left-invariant
// coframe satisfies de^k = sum_{i<j} c^k_{ij} e^{ij}; we store those d
// coefficients directly (one 2-form per coframe element), so the Lie bracket
// coefficient of e_k in [e_i, e_j] is the NEGATIVE of the stored value.

namespace aaflow {

struct StructureConstants {
  std::array<KForm, kDim> d_coframe;

  StructureConstants() {
    for (auto& f : d_coframe) f = KForm(2);
  }

  // de^k accessor, 1-based
  const KForm& d_of_coframe(int k) const {
    if (k < 1 || k > kDim) throw std::invalid_argument("coframe index out of range 1..6");
    return d_coframe[k - 1];
  }

  // de^k += coeff * e^{ij}
  void add_d_term(int k, int i, int j, double coeff) {
    if (k < 1 || k > kDim) throw std::invalid_argument("coframe index out of range 1..6");
    d_coframe[k - 1] += coeff * basis_form({i, j});
  }

  // coefficient of e_k in [e_i, e_j]
  double bracket_coeff(int k, int i, int j) const {
    return -evaluate(d_of_coframe(k), {i, j});
  }
};

// Chevalley-Eilenberg differential, extended from the coframe as an
// antiderivation. Top-degree input is rejected (there is no degree-7 slot).
template <typename Scalar>
Form<Scalar> exterior_derivative(const Form<Scalar>& a, const StructureConstants& sc) {
  if (a.degree >= kDim) throw std::invalid_argument("exterior derivative of top-degree form");
  Form<Scalar> out(a.degree + 1);
  const auto& masks = detail::masks_of_degree(a.degree);
  for (size_t p = 0; p < masks.size(); ++p) {
    const Scalar coeff = a.coeffs[p];
    if (coeff == Scalar(0)) continue;
    int rank = 0;
    for (int bit = 0; bit < kDim; ++bit) {
      if (!(masks[p] & (1 << bit))) continue;
      ++rank;
      // d(e^{i1..ik}) = sum_m (-1)^{m-1} de^{im} ^ e^{i1..im-1 im+1..ik};
      // de^{im} has even degree, so it slides to the front for free.
      const KForm& d_factor = sc.d_coframe[bit];
      const int rest = masks[p] & ~(1 << bit);
      const double rank_sign = (rank % 2) ? 1.0 : -1.0;
      const auto& m2 = detail::masks_of_degree(2);
      for (size_t q = 0; q < m2.size(); ++q) {
        const double dc = d_factor.coeffs[q];
        if (dc == 0.0) continue;
        const int s = detail::wedge_sign(m2[q], rest);
        if (s == 0) continue;
        out[m2[q] | rest] += coeff * Scalar(rank_sign * double(s) * dc);
      }
    }
  }
  return out;
}

// complex structure acting on forms, factor-wise on the coframe
template <typename Scalar>
Form<Scalar> j_action(const Form<Scalar>& a) {
  Form<Scalar> out(a.degree);
  const auto& masks = detail::masks_of_degree(a.degree);
  for (size_t p = 0; p < masks.size(); ++p) {
    if (a.coeffs[p] == Scalar(0)) continue;
    const auto im = detail::j_image(masks[p], a.degree);
    out[im.mask] += Scalar(double(im.sign)) * a.coeffs[p];
  }
  return out;
}

// d^c = (-1)^deg J d J; on an integrable structure this is i(dbar - del)
KForm dc(const KForm& a, const StructureConstants& sc);

// d d^c, the operational i del dbar used throughout
KForm del_delbar(const KForm& a, const StructureConstants& sc);

// component of bidegree (p, q) with respect to the holomorphic coframe
// zeta^j = e^j + i e^{7-j}
ComplexForm bidegree_project(const ComplexForm& a, int p, int q);

// Hermitian Gram matrix of a real J-invariant 2-form nu: G_{jk} = -i nu(Z_j,
// conj(Z_k)) with Z_j = (e_j - i J e_j)/2
Eigen::Matrix3cd hermitian_gram(const KForm& nu);

// true when hermitian_gram(nu) is positive definite and nu is J-invariant
bool is_positive_one_one(const KForm& nu, double tol = 1e-12);

// columns span the J-invariant real k-forms inside the coefficient space of
// degree k (15 x 9 for k = 2 or 4); cached after the first call
const Eigen::MatrixXd& j_invariant_basis(int degree);

// solve 2 nu ^ beta = Phi for the real (1,1)-form beta, given a positive
// (1,1)-form nu and a real (2,2)-form Phi
KForm lefschetz_solve(const KForm& Phi, const KForm& nu);

}  // namespace aaflow
