#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aaflow/forms.hpp"

using namespace aaflow;

TEST_CASE("basis dimensions and mask tables") {
  for (int k = 0; k <= 6; ++k) CHECK(int(detail::masks_of_degree(k).size()) == kBasisCount[k]);
  // lexicographic order of 2-form multi-indices starts {1,2},{1,3},...
  const auto& m2 = detail::masks_of_degree(2);
  CHECK(m2[0] == 0b000011);   // e^{12}
  CHECK(m2[1] == 0b000101);   // e^{13}
  CHECK(m2[4] == 0b100001);   // e^{16}
  CHECK(m2[14] == 0b110000);  // e^{56}
  for (int k = 0; k <= 6; ++k) {
    const auto& mk = detail::masks_of_degree(k);
    for (size_t p = 0; p < mk.size(); ++p) CHECK(detail::position_of_mask(mk[p]) == int(p));
  }
}

TEST_CASE("basis_form handles permutations and repeats") {
  CHECK(basis_form({1, 6})[0b100001] == 1.0);
  CHECK(basis_form({6, 1})[0b100001] == -1.0);
  CHECK(basis_form({2, 2}).is_zero());
  CHECK(basis_form({3, 1, 2})[0b000111] == 1.0);  // cyclic, even
  CHECK(basis_form({2, 1, 3})[0b000111] == -1.0);
}

TEST_CASE("wedge signs and associativity") {
  auto e1 = basis_form({1});
  auto e2 = basis_form({2});
  auto e3 = basis_form({3});
  CHECK(approx_equal(wedge(e1, e2), basis_form({1, 2}), 0.0));
  CHECK(approx_equal(wedge(e2, e1), -basis_form({1, 2}), 0.0));
  CHECK(wedge(e1, e1).is_zero());
  CHECK(approx_equal(wedge(wedge(e1, e2), e3), wedge(e1, wedge(e2, e3)), 0.0));
  // even-degree forms commute
  auto e25 = basis_form({2, 5});
  auto e16 = basis_form({1, 6});
  CHECK(approx_equal(wedge(e25, e16), basis_form({1, 2, 5, 6}), 0.0));
  CHECK(approx_equal(wedge(e16, e25), basis_form({1, 2, 5, 6}), 0.0));
}

TEST_CASE("graded commutativity on mixed degrees") {
  auto a = basis_form({2});                       // degree 1
  auto b = basis_form({1, 4, 5});                 // degree 3
  CHECK(approx_equal(wedge(a, b), -wedge(b, a), 0.0));
  auto c = basis_form({3, 6});                    // degree 2, commutes with odd
  CHECK(approx_equal(wedge(a, c), wedge(c, a), 1e-15));
}

TEST_CASE("fundamental form cubes to 6 vol") {
  auto omega = basis_form({1, 6}) + basis_form({2, 5}) + basis_form({3, 4});
  auto omega3 = wedge(wedge(omega, omega), omega);
  auto expected = 6.0 * basis_form({1, 2, 3, 4, 5, 6});
  CHECK(approx_equal(omega3, expected, 1e-14));
}

TEST_CASE("evaluation on frame vectors is antisymmetric") {
  auto e16 = basis_form({1, 6});
  CHECK(evaluate(e16, {1, 6}) == 1.0);
  CHECK(evaluate(e16, {6, 1}) == -1.0);
  CHECK(evaluate(e16, {1, 1}) == 0.0);
  CHECK(evaluate(e16, {2, 5}) == 0.0);
  auto vol = basis_form({1, 2, 3, 4, 5, 6});
  CHECK(evaluate(vol, {2, 1, 3, 4, 5, 6}) == -1.0);
}

TEST_CASE("coframe J images at mask level") {
  // J e^1 = e^6, J e^6 = -e^1, J e^4 = -e^3
  auto i1 = detail::j_image(0b000001, 1);
  CHECK(i1.mask == 0b100000);
  CHECK(i1.sign == 1);
  auto i6 = detail::j_image(0b100000, 1);
  CHECK(i6.mask == 0b000001);
  CHECK(i6.sign == -1);
  auto i4 = detail::j_image(0b001000, 1);
  CHECK(i4.mask == 0b000100);
  CHECK(i4.sign == -1);
  // J e^{14} = J e^1 ^ J e^4 = e^6 ^ (-e^3) = +e^{36}
  auto i14 = detail::j_image(0b001001, 2);
  CHECK(i14.mask == 0b100100);
  CHECK(i14.sign == 1);
  // the fundamental form components are J-invariant
  for (int mask : {0b100001, 0b010010, 0b001100}) {
    auto im = detail::j_image(mask, 2);
    CHECK(im.mask == mask);
    CHECK(im.sign == 1);
  }
  // J^2 = (-1)^k on every basis mask
  for (int k = 0; k <= 6; ++k) {
    for (int mask : detail::masks_of_degree(k)) {
      auto once = detail::j_image(mask, k);
      auto twice = detail::j_image(once.mask, k);
      CHECK(twice.mask == mask);
      CHECK(once.sign * twice.sign == ((k % 2) ? -1 : 1));
    }
  }
}

TEST_CASE("complex forms") {
  using namespace std::complex_literals;
  auto z = complexify(basis_form({1})) + 1.0i * complexify(basis_form({6}));
  auto zbar = complexify(basis_form({1})) - 1.0i * complexify(basis_form({6}));
  auto p = wedge(z, zbar);  // = -2i e^{16}
  CHECK(approx_equal(real_part(p), KForm(2), 1e-15));
  CHECK(approx_equal(imag_part(p), -2.0 * basis_form({1, 6}), 1e-15));
}

TEST_CASE("degree errors are rejected") {
  CHECK_THROWS_AS(KForm(7), std::invalid_argument);
  CHECK_THROWS_AS(KForm(-1), std::invalid_argument);
  auto top = basis_form({1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(wedge(top, basis_form({1})), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(top, {1, 2}), std::invalid_argument);
  KForm a(2), b(3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}
