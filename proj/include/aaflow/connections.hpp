#pragma once

#include "aaflow/algebra.hpp"

// The Gauduchon line of Hermitian connections on an almost-abelian structure
// with the reference form omega = e^{16} + e^{25} + e^{34}: connection
// 1-forms, their curvature 2-forms, the curvature-trace 4-form, closed forms
// of all of these on the balanced six-parameter family, and the
// instanton/SU(3) diagnostics built from them.

namespace aaflow {

struct ConnectionForms {
  // Gauduchon parameter (Chern at tau = 1, Bismut at tau = -1); NaN marks a
  // connection outside the family such as Levi-Civita
  double tau = 0.0;
  // sigma[i][j] is the 1-form sigma^{i+1}_{j+1}; antisymmetric in (i, j)
  std::array<std::array<KForm, kDim>, kDim> sigma;

  ConnectionForms() {
    for (auto& row : sigma)
      for (auto& f : row) f = KForm(1);
  }

  // 1-based accessor for sigma^i_j
  const KForm& entry(int i, int j) const { return sigma[i - 1][j - 1]; }
};

struct CurvatureForms {
  // omega2[i][j] is the 2-form Omega^{i+1}_{j+1}; antisymmetric in (i, j)
  std::array<std::array<KForm, kDim>, kDim> omega2;

  CurvatureForms() {
    for (auto& row : omega2)
      for (auto& f : row) f = KForm(2);
  }

  const KForm& entry(int i, int j) const { return omega2[i - 1][j - 1]; }

  double max_norm() const {
    double m = 0.0;
    for (const auto& row : omega2)
      for (const auto& f : row) m = std::max(m, f.norm_inf());
    return m;
  }
};

// Levi-Civita connection 1-forms of the invariant metric in this frame
ConnectionForms levi_civita_forms(const StructureConstants& sc);

// Gauduchon family: Levi-Civita part plus the two torsion terms
//   (tau-1)/4 d omega(J e_k, J e_j, J e_i) + (tau+1)/4 d omega(J e_k, e_j, e_i)
ConnectionForms gauduchon_forms(const StructureConstants& sc, double tau);

// Omega^i_j = d sigma^i_j + sum_k sigma^i_k ^ sigma^k_j
CurvatureForms curvature_forms(const ConnectionForms& sigma, const StructureConstants& sc);

// closed forms on the balanced family (exterior derivative of sigma and the
// quadratic term Lambda^i_j = sum_k sigma^i_k ^ sigma^k_j)
struct DsigmaLambda {
  std::array<std::array<KForm, kDim>, kDim> dsigma;
  std::array<std::array<KForm, kDim>, kDim> lambda;

  DsigmaLambda() {
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        dsigma[i][j] = KForm(2);
        lambda[i][j] = KForm(2);
      }
  }
};
DsigmaLambda closed_form_dsigma_lambda(const BalancedParams& p, double tau);
CurvatureForms closed_form_curvature(const BalancedParams& p, double tau);

// half the matrix trace of Omega ^ Omega (the convention that matches the
// closed-form polynomial below and the proportionality identity)
KForm trace_curvature_wedge(const CurvatureForms& curv);

// closed form of the curvature trace on the balanced family
KForm closed_form_trace(const BalancedParams& p, double tau);

// proportionality constant K with trace = K * d d^c omega:
// K = tau (tau-1)^2 / 8 * |sym part of A|^2
double proportionality_K(const BalancedParams& p, double tau);

enum class InstantonClass { NotInstanton, FlatInstanton, KahlerInstanton };

// componentwise instanton conditions on the Gauduchon curvature:
// omega-trace zero and J-invariance of every Omega^i_j
InstantonClass instanton_check(const BalancedParams& p, double tau);

// norm of sigma^1_6 + sigma^2_5 + sigma^3_4, the obstruction to the
// connection preserving the holomorphic volume form
double su3_check(const ConnectionForms& sigma);

}  // namespace aaflow
