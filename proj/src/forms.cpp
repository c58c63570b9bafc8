#include "aaflow/forms.hpp"

#include <bit>

namespace aaflow {
namespace detail {

namespace {

// Build, once, the lexicographic mask list per degree and the inverse map
// mask -> position-within-degree.
struct Tables {
  std::array<std::vector<int>, kDim + 1> masks;
  std::array<int, 1 << kDim> pos{};

  Tables() {
    for (int m = 0; m < (1 << kDim); ++m) masks[std::popcount(unsigned(m))].push_back(m);
    // Within fixed popcount, ascending mask order is NOT lexicographic order
    // of the sorted index tuples (e.g. {1,6} = 0b100001 > {2,3} = 0b000110),
    // so sort by the tuple explicitly.
    for (int k = 0; k <= kDim; ++k) {
      std::sort(masks[k].begin(), masks[k].end(), [](int a, int b) {
        for (int bit = 0; bit < kDim; ++bit) {
          const bool ina = a & (1 << bit), inb = b & (1 << bit);
          if (ina != inb) return ina;  // smaller leading index wins
        }
        return false;
      });
      for (size_t p = 0; p < masks[k].size(); ++p) pos[masks[k][p]] = int(p);
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

const std::vector<int>& masks_of_degree(int degree) {
  if (degree < 0 || degree > kDim) throw std::invalid_argument("degree out of range 0..6");
  return tables().masks[degree];
}

int position_of_mask(int mask) {
  if (mask < 0 || mask >= (1 << kDim)) throw std::invalid_argument("mask out of range");
  return tables().pos[mask];
}

int wedge_sign(int mask_a, int mask_b) {
  if (mask_a & mask_b) return 0;
  // Sorting the concatenation (A ascending, B ascending) moves each element
  // of B past every larger element of A; count those transpositions.
  int inversions = 0;
  for (int bit = 0; bit < kDim; ++bit) {
    if (mask_b & (1 << bit)) {
      const int higher = mask_a & ~((1 << (bit + 1)) - 1);
      inversions += std::popcount(unsigned(higher));
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

JImage j_image(int mask, int degree) {
  // Per factor: J e^i = e^{7-i} (i <= 3), J e^{7-i} = -e^i, i.e. bit b -> bit
  // 5-b with a minus for b >= 3. Reflecting an ascending tuple yields a
  // descending one, so re-sorting contributes (-1)^{k(k-1)/2}.
  int image = 0;
  int negatives = 0;
  for (int bit = 0; bit < kDim; ++bit) {
    if (mask & (1 << bit)) {
      image |= 1 << (5 - bit);
      if (bit >= 3) ++negatives;
    }
  }
  const int reversal = (degree * (degree - 1) / 2) % 2 ? -1 : 1;
  return {image, (negatives % 2 ? -1 : 1) * reversal};
}

}  // namespace detail

KForm basis_form(std::initializer_list<int> indices) {
  KForm out(int(indices.size()));
  std::vector<int> idx(indices);
  int sign = 1;
  for (size_t i = 0; i < idx.size(); ++i) {
    for (size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[j] < idx[i]) {
        std::swap(idx[i], idx[j]);
        sign = -sign;
      }
    }
  }
  int mask = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 1 || idx[i] > kDim) throw std::invalid_argument("coframe index out of range 1..6");
    if (i > 0 && idx[i] == idx[i - 1]) return out;  // repeated index: zero form
    mask |= 1 << (idx[i] - 1);
  }
  out[mask] = double(sign);
  return out;
}

ComplexForm complexify(const KForm& a) {
  ComplexForm out(a.degree);
  out.coeffs = a.coeffs.cast<std::complex<double>>();
  return out;
}

KForm real_part(const ComplexForm& a) {
  KForm out(a.degree);
  out.coeffs = a.coeffs.real();
  return out;
}

KForm imag_part(const ComplexForm& a) {
  KForm out(a.degree);
  out.coeffs = a.coeffs.imag();
  return out;
}

ComplexForm wedge(const ComplexForm& a, const KForm& b) { return wedge(a, complexify(b)); }
ComplexForm wedge(const KForm& a, const ComplexForm& b) { return wedge(complexify(a), b); }

}  // namespace aaflow
