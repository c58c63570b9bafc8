#include "aaflow/connections.hpp"

#include "aaflow/exterior.hpp"

#include <cmath>
#include <limits>

namespace aaflow {

namespace {

// image of the frame vector e_k under J as a signed basis vector
struct JFrame {
  int index;
  double sign;
};

constexpr std::array<JFrame, kDim> kJFrame = {{
    {6, 1.0}, {5, 1.0}, {4, 1.0}, {3, -1.0}, {2, -1.0}, {1, -1.0},
}};

// sigma^i_j(e_k) for the Gauduchon connection with parameter tau; the
// Levi-Civita part uses only the structure constants, the torsion part
// evaluates d omega on (partially) J-rotated frame triples
double gauduchon_coefficient(const double c[kDim + 1][kDim + 1][kDim + 1],
                             const KForm& domega, double tau, int i, int j, int k) {
  double lc = -0.5 * (c[i][j][k] - c[k][i][j] + c[j][k][i]);
  const JFrame& jk = kJFrame[k - 1];
  const JFrame& jj = kJFrame[j - 1];
  const JFrame& ji = kJFrame[i - 1];
  double t1 = jk.sign * jj.sign * ji.sign *
              evaluate(domega, {jk.index, jj.index, ji.index});
  double t2 = jk.sign * evaluate(domega, {jk.index, j, i});
  return lc + (tau - 1.0) / 4.0 * t1 + (tau + 1.0) / 4.0 * t2;
}

ConnectionForms connection_family(const StructureConstants& sc, double tau, bool torsion) {
  // c[k][i][j]: coefficient of e^{ij} in d e^k, antisymmetric in (i, j)
  double c[kDim + 1][kDim + 1][kDim + 1] = {};
  for (int k = 1; k <= kDim; ++k)
    for (int i = 1; i <= kDim; ++i)
      for (int j = 1; j <= kDim; ++j) {
        if (i == j) continue;
        c[k][i][j] = evaluate(sc.d_of_coframe(k), {i, j});
      }

  KForm domega(2);
  if (torsion) domega = exterior_derivative(fundamental_form(), sc);

  ConnectionForms out;
  out.tau = tau;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j) {
      KForm f(1);
      for (int k = 1; k <= kDim; ++k) {
        double v = torsion ? gauduchon_coefficient(c, domega, tau, i, j, k)
                           : -0.5 * (c[i][j][k] - c[k][i][j] + c[j][k][i]);
        if (v != 0.0) f += v * basis_form({k});
      }
      out.sigma[i - 1][j - 1] = f;
      out.sigma[j - 1][i - 1] = -f;
    }
  return out;
}

// shorthand polynomials in the balanced parameters that appear throughout
// the closed forms
struct Shorthands {
  double Q1, Q2, Q3, Q4, Q5, Q6;
  double B1, B3, B4;
  double R1, R2, R3, P1;

  explicit Shorthands(const BalancedParams& p) {
    double s = p.A23 + p.A32;  // symmetric off-diagonal combination
    double d = p.A24 - p.A35;  // the other symmetric combination
    Q1 = 2.0 * p.A22 * p.A25 + p.A23 * p.A35 + p.A24 * p.A32;
    Q2 = p.A22 * (p.A24 + p.A35) - p.A25 * s;
    Q3 = p.A22 * (p.A23 - p.A32) + p.A25 * d;
    Q4 = 2.0 * p.A22 * p.A22 + p.A32 * p.A32 + p.A35 * p.A35 +
         p.A23 * p.A32 - p.A24 * p.A35;
    Q5 = 2.0 * p.A22 * p.A22 + p.A23 * p.A23 + p.A24 * p.A24 +
         p.A23 * p.A32 - p.A24 * p.A35;
    Q6 = p.A23 * p.A23 - p.A32 * p.A32 + p.A24 * p.A24 - p.A35 * p.A35;
    B1 = 4.0 * p.A22 * p.A22 + s * s + d * d;
    B3 = 4.0 * p.A22 * p.A22 + s * s - d * d;
    B4 = 4.0 * p.A22 * p.A22 - s * s + d * d;
    R1 = s * d;
    R2 = p.A22 * d;
    R3 = p.A22 * s;
    P1 = s * s + d * d;
  }
};

KForm two_form(std::initializer_list<std::pair<std::array<int, 2>, double>> terms) {
  KForm f(2);
  for (const auto& [idx, coeff] : terms)
    if (coeff != 0.0) f += coeff * basis_form({idx[0], idx[1]});
  return f;
}

// set a[i][j] (1-based) and its antisymmetric mirror
void put(std::array<std::array<KForm, kDim>, kDim>& a, int i, int j, const KForm& f) {
  a[i - 1][j - 1] = f;
  a[j - 1][i - 1] = -f;
}

}  // namespace

ConnectionForms levi_civita_forms(const StructureConstants& sc) {
  ConnectionForms lc = connection_family(sc, 0.0, false);
  lc.tau = std::numeric_limits<double>::quiet_NaN();
  return lc;
}

ConnectionForms gauduchon_forms(const StructureConstants& sc, double tau) {
  return connection_family(sc, tau, true);
}

CurvatureForms curvature_forms(const ConnectionForms& sigma, const StructureConstants& sc) {
  CurvatureForms out;
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      KForm f = exterior_derivative(sigma.sigma[i][j], sc);
      for (int k = 0; k < kDim; ++k)
        f += wedge(sigma.sigma[i][k], sigma.sigma[k][j]);
      out.omega2[i][j] = f;
      out.omega2[j][i] = -f;
    }
  return out;
}

DsigmaLambda closed_form_dsigma_lambda(const BalancedParams& p, double tau) {
  Shorthands q(p);
  double V4 = (tau - 1.0) / 4.0;
  double V8 = (tau - 1.0) / 8.0;
  double U8 = tau * (tau - 1.0) / 8.0;
  double T16 = (tau - 1.0) * (tau - 1.0) / 16.0;
  double T8 = (tau - 1.0) * (tau - 1.0) / 8.0;
  double T4 = (tau - 1.0) * (tau - 1.0) / 4.0;
  double T2 = (tau - 1.0) * (tau - 1.0) / 2.0;

  DsigmaLambda out;

  // d sigma: only the (1, m) and (m, 6) entries are nonzero, and the second
  // group repeats the first
  KForm d12 = two_form({{{2, 6}, -V4 * q.Q1}, {{3, 6}, -V4 * q.Q2},
                        {{4, 6}, V4 * q.Q3}, {{5, 6}, V4 * q.Q4}});
  KForm d13 = two_form({{{2, 6}, V4 * q.Q2}, {{3, 6}, -V4 * q.Q1},
                        {{4, 6}, V4 * q.Q5}, {{5, 6}, V4 * q.Q3}});
  KForm d14 = two_form({{{2, 6}, -V4 * q.Q3}, {{3, 6}, -V4 * q.Q5},
                        {{4, 6}, -V4 * q.Q1}, {{5, 6}, V4 * q.Q2}});
  KForm d15 = two_form({{{2, 6}, -V4 * q.Q4}, {{3, 6}, -V4 * q.Q3},
                        {{4, 6}, -V4 * q.Q2}, {{5, 6}, -V4 * q.Q1}});
  put(out.dsigma, 1, 2, d12);
  put(out.dsigma, 1, 3, d13);
  put(out.dsigma, 1, 4, d14);
  put(out.dsigma, 1, 5, d15);
  put(out.dsigma, 2, 6, d15);
  put(out.dsigma, 3, 6, d14);
  put(out.dsigma, 4, 6, -d13);
  put(out.dsigma, 5, 6, -d12);

  // Lambda^i_j = sum_k sigma^i_k ^ sigma^k_j
  KForm l12 = two_form({{{1, 2}, -U8 * q.B1}, {{2, 6}, -V4 * q.Q1},
                        {{3, 6}, V4 * q.Q2}, {{4, 6}, -V4 * q.Q3},
                        {{5, 6}, V8 * q.Q6}});
  KForm l13 = two_form({{{1, 3}, -U8 * q.B1}, {{2, 6}, -V4 * q.Q2},
                        {{3, 6}, -V4 * q.Q1}, {{4, 6}, -V8 * q.Q6},
                        {{5, 6}, -V4 * q.Q3}});
  KForm l14 = two_form({{{1, 4}, -U8 * q.B1}, {{2, 6}, V4 * q.Q3},
                        {{3, 6}, V8 * q.Q6}, {{4, 6}, -V4 * q.Q1},
                        {{5, 6}, -V4 * q.Q2}});
  KForm l15 = two_form({{{1, 5}, -U8 * q.B1}, {{2, 6}, -V8 * q.Q6},
                        {{3, 6}, V4 * q.Q3}, {{4, 6}, V4 * q.Q2},
                        {{5, 6}, -V4 * q.Q1}});
  KForm l16 = two_form({{{2, 5}, T8 * q.B1}, {{3, 4}, T8 * q.B1}});
  KForm l23 = two_form({{{1, 6}, tau * q.Q2}, {{2, 3}, T16 * q.B3},
                        {{4, 5}, -T16 * q.B3}, {{2, 4}, T8 * q.R1},
                        {{3, 5}, T8 * q.R1}, {{2, 5}, T4 * q.R2},
                        {{3, 4}, -T4 * q.R2}});
  KForm l24 = two_form({{{1, 6}, -tau * q.Q3}, {{2, 3}, T8 * q.R1},
                        {{4, 5}, -T8 * q.R1}, {{2, 4}, T16 * q.B4},
                        {{3, 5}, T16 * q.B4}, {{2, 5}, -T4 * q.R3},
                        {{3, 4}, T4 * q.R3}});
  KForm l25 = two_form({{{1, 6}, 0.5 * tau * q.Q6}, {{2, 3}, T4 * q.R2},
                        {{4, 5}, -T4 * q.R2}, {{2, 4}, -T4 * q.R3},
                        {{3, 5}, -T4 * q.R3}, {{2, 5}, -T2 * p.A22 * p.A22},
                        {{3, 4}, -T8 * q.P1}});
  KForm l34 = two_form({{{1, 6}, -0.5 * tau * q.Q6}, {{2, 3}, -T4 * q.R2},
                        {{4, 5}, T4 * q.R2}, {{2, 4}, T4 * q.R3},
                        {{3, 5}, T4 * q.R3}, {{2, 5}, -T8 * q.P1},
                        {{3, 4}, -T2 * p.A22 * p.A22}});
  put(out.lambda, 1, 2, l12);
  put(out.lambda, 1, 3, l13);
  put(out.lambda, 1, 4, l14);
  put(out.lambda, 1, 5, l15);
  put(out.lambda, 1, 6, l16);
  put(out.lambda, 2, 3, l23);
  put(out.lambda, 2, 4, l24);
  put(out.lambda, 2, 5, l25);
  put(out.lambda, 3, 4, l34);
  put(out.lambda, 2, 6, l15);
  put(out.lambda, 3, 6, l14);
  put(out.lambda, 4, 6, -l13);
  put(out.lambda, 5, 6, -l12);
  put(out.lambda, 4, 5, -l23);
  put(out.lambda, 3, 5, l24);
  return out;
}

CurvatureForms closed_form_curvature(const BalancedParams& p, double tau) {
  DsigmaLambda parts = closed_form_dsigma_lambda(p, tau);
  CurvatureForms out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      out.omega2[i][j] = parts.dsigma[i][j] + parts.lambda[i][j];
  return out;
}

KForm trace_curvature_wedge(const CurvatureForms& curv) {
  KForm tr(4);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      tr += 0.5 * wedge(curv.omega2[i][j], curv.omega2[j][i]);
  return tr;
}

KForm closed_form_trace(const BalancedParams& p, double tau) {
  Shorthands q(p);
  double front = tau * (tau - 1.0) * (tau - 1.0) / 4.0 * q.B1;
  KForm tr(4);
  auto term = [&](int r, int s, double coeff) {
    if (coeff != 0.0) tr += front * coeff * basis_form({1, r, s, 6});
  };
  term(2, 3, -q.Q2);
  term(4, 5, q.Q2);
  term(2, 4, q.Q3);
  term(3, 5, q.Q3);
  term(2, 5, q.Q4);
  term(3, 4, q.Q5);
  return tr;
}

double proportionality_K(const BalancedParams& p, double tau) {
  Shorthands q(p);
  return tau * (tau - 1.0) * (tau - 1.0) / 8.0 * q.B1;
}

InstantonClass instanton_check(const BalancedParams& p, double tau) {
  StructureConstants sc = structure_constants(p.to_structure());
  CurvatureForms curv = curvature_forms(gauduchon_forms(sc, tau), sc);
  double tol = 1e-12 * std::max(1.0, curv.max_norm());

  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      const KForm& f = curv.omega2[i][j];
      // contraction with omega: sum of the components along its three planes
      double traced = evaluate(f, {1, 6}) + evaluate(f, {2, 5}) + evaluate(f, {3, 4});
      if (std::abs(traced) > tol) return InstantonClass::NotInstanton;
      // J-invariance, i.e. no (2,0) + (0,2) part
      if ((j_action(f) - f).norm_inf() > tol) return InstantonClass::NotInstanton;
    }

  double a_scale = std::max(1.0, p.to_matrix().norm());
  bool kahler = matrix_parts(p.to_matrix()).plus.norm() <= 1e-12 * a_scale;
  if (kahler) return InstantonClass::KahlerInstanton;
  // non-Kähler and the conditions hold: only possible when the connection is
  // flat, which forces the Chern slope
  return tau == 1.0 ? InstantonClass::FlatInstanton : InstantonClass::NotInstanton;
}

double su3_check(const ConnectionForms& sigma) {
  KForm sum = sigma.entry(1, 6) + sigma.entry(2, 5) + sigma.entry(3, 4);
  return sum.norm_inf();
}

}  // namespace aaflow
