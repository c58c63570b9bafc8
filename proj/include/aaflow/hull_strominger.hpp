#pragma once

#include <optional>

#include "aaflow/connections.hpp"

// Residuals and solvability classification for the Hull-Strominger system
// with flat gauge bundle on the balanced family.  With F = 0 the
// Hermitian-Yang-Mills block holds vacuously and the system reduces to the
// anomaly equation plus the conformally balanced condition.

namespace aaflow {

enum class HSClass { KahlerAnySlope, SolvableWithSlope, Unsolvable };

enum class UnsolvableReason { ChernOrLichnerowicz, ZeroCurvatureTrace };

struct HSReport {
  double anomaly_residual_norm = 0.0;
  double conformally_balanced_residual_norm = 0.0;
  HSClass classification = HSClass::Unsolvable;
  // present exactly when classification == SolvableWithSlope
  std::optional<double> alpha_prime;
  // present exactly when classification == Unsolvable
  std::optional<UnsolvableReason> reason;
  InstantonClass instanton_status = InstantonClass::NotInstanton;
};

// i del delbar omega - (alpha'/4) tr(Omega^tau ^ Omega^tau), computed through
// the generic curvature route; vanishes iff (alpha'/4) K = 1 or the
// left-hand side is already zero
KForm anomaly_residual(const BalancedParams& p, double tau, double alpha_prime);

// norm of d(|Psi| omega^2) with the left-invariant constant |Psi|; zero on
// the whole balanced family, positive e.g. when v != 0
double conformally_balanced_residual(const AlmostAbelianStructure& s);
double conformally_balanced_residual(const BalancedParams& p);

// Kähler -> any slope works; non-Kähler with tau outside {0, 1} -> solvable
// with the unique slope alpha' = 4/K; Chern or Lichnerowicz slope -> the
// curvature trace vanishes and no slope can work
HSReport classify(const BalancedParams& p, double tau);

}  // namespace aaflow
