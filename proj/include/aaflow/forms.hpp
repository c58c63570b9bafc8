#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

// Exterior algebra over a fixed 6-dimensional real vector space with frame
// {e_1,...,e_6} and dual coframe {e^1,...,e^6}. Basis k-forms e^{i1...ik}
// (i1 < ... < ik) are encoded as 6-bit masks, bit (i-1) <-> index i, and a
// form of degree k is the dense vector of its binomial(6,k) coefficients in
// lexicographic multi-index order.

namespace aaflow {

inline constexpr int kDim = 6;
inline constexpr std::array<int, 7> kBasisCount = {1, 6, 15, 20, 15, 6, 1};

namespace detail {

// masks of the given degree, lexicographic in the sorted index tuple
const std::vector<int>& masks_of_degree(int degree);

// position of a mask within its degree block
int position_of_mask(int mask);

// sign of e^A ^ e^B for disjoint masks (0 if they overlap)
int wedge_sign(int mask_a, int mask_b);

// coframe action of the complex structure: J e^i = e^{7-i} for i <= 3,
// J e^{7-i} = -e^i, extended factor-wise. Returns the image mask and sign.
struct JImage {
  int mask;
  int sign;
};
JImage j_image(int mask, int degree);

}  // namespace detail

template <typename Scalar>
struct Form {
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int degree = 0;
  Coeffs coeffs;

  Form() : degree(0), coeffs(Coeffs::Zero(1)) {}

  explicit Form(int deg) : degree(deg) {
    if (deg < 0 || deg > kDim) throw std::invalid_argument("form degree out of range 0..6");
    coeffs = Coeffs::Zero(kBasisCount[deg]);
  }

  Scalar& operator[](int mask) { return coeffs[detail::position_of_mask(mask)]; }
  const Scalar& operator[](int mask) const { return coeffs[detail::position_of_mask(mask)]; }

  Form& operator+=(const Form& o) {
    require_same_degree(o);
    coeffs += o.coeffs;
    return *this;
  }
  Form& operator-=(const Form& o) {
    require_same_degree(o);
    coeffs -= o.coeffs;
    return *this;
  }
  Form& operator*=(Scalar s) {
    coeffs *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Scalar s, Form a) { return a *= s; }
  friend Form operator*(Form a, Scalar s) { return a *= s; }
  friend Form operator-(Form a) {
    a.coeffs = -a.coeffs;
    return a;
  }

  double norm_inf() const { return coeffs.template lpNorm<Eigen::Infinity>(); }
  bool is_zero(double tol = 0.0) const { return norm_inf() <= tol; }

 private:
  void require_same_degree(const Form& o) const {
    if (degree != o.degree) throw std::invalid_argument("form degrees differ");
  }
};

using KForm = Form<double>;
using ComplexForm = Form<std::complex<double>>;

// e^{i1...ik} with the given (not necessarily sorted) indices; repeated
// indices give the zero form, odd permutations flip the sign.
KForm basis_form(std::initializer_list<int> indices);

ComplexForm complexify(const KForm& a);
KForm real_part(const ComplexForm& a);
KForm imag_part(const ComplexForm& a);

template <typename Scalar>
Form<Scalar> wedge(const Form<Scalar>& a, const Form<Scalar>& b) {
  const int deg = a.degree + b.degree;
  if (deg > kDim) throw std::invalid_argument("wedge exceeds top degree");
  Form<Scalar> out(deg);
  const auto& ma = detail::masks_of_degree(a.degree);
  const auto& mb = detail::masks_of_degree(b.degree);
  for (size_t p = 0; p < ma.size(); ++p) {
    const Scalar ca = a.coeffs[p];
    if (ca == Scalar(0)) continue;
    for (size_t q = 0; q < mb.size(); ++q) {
      const Scalar cb = b.coeffs[q];
      if (cb == Scalar(0)) continue;
      const int s = detail::wedge_sign(ma[p], mb[q]);
      if (s == 0) continue;
      out[ma[p] | mb[q]] += Scalar(double(s)) * ca * cb;
    }
  }
  return out;
}

ComplexForm wedge(const ComplexForm& a, const KForm& b);
ComplexForm wedge(const KForm& a, const ComplexForm& b);

// evaluation on frame vectors: alpha(e_{i1},...,e_{ik}); zero on repeated
// indices, antisymmetric in the arguments.
template <typename Scalar>
Scalar evaluate(const Form<Scalar>& a, std::initializer_list<int> indices) {
  if (static_cast<int>(indices.size()) != a.degree)
    throw std::invalid_argument("evaluation arity must match form degree");
  int mask = 0;
  std::vector<int> idx(indices);
  // selection-sort sign of the index permutation
  int sign = 1;
  for (size_t i = 0; i < idx.size(); ++i) {
    for (size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[j] < idx[i]) {
        std::swap(idx[i], idx[j]);
        sign = -sign;
      }
    }
  }
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 1 || idx[i] > kDim) throw std::invalid_argument("frame index out of range 1..6");
    if (i > 0 && idx[i] == idx[i - 1]) return Scalar(0);
    mask |= 1 << (idx[i] - 1);
  }
  return Scalar(double(sign)) * a[mask];
}

template <typename Scalar>
bool approx_equal(const Form<Scalar>& a, const Form<Scalar>& b, double tol) {
  if (a.degree != b.degree) return false;
  return (a.coeffs - b.coeffs).template lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace aaflow
