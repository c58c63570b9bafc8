#include "aaflow/hull_strominger.hpp"

#include <cmath>
#include <stdexcept>

#include "aaflow/exterior.hpp"

namespace aaflow {

KForm anomaly_residual(const BalancedParams& p, double tau, double alpha_prime) {
  StructureConstants sc = structure_constants(p.to_structure());
  CurvatureForms curv = curvature_forms(gauduchon_forms(sc, tau), sc);
  KForm residual = del_delbar(fundamental_form(), sc);
  residual -= alpha_prime / 4.0 * trace_curvature_wedge(curv);
  return residual;
}

double conformally_balanced_residual(const AlmostAbelianStructure& s) {
  StructureConstants sc = structure_constants(s);
  KForm omega = fundamental_form();
  // |Psi| for the metric underlying the reference form: |Psi|^2 = 8
  double psi = std::sqrt(8.0);
  return exterior_derivative(psi * wedge(omega, omega), sc).norm_inf();
}

double conformally_balanced_residual(const BalancedParams& p) {
  return conformally_balanced_residual(p.to_structure());
}

HSReport classify(const BalancedParams& p, double tau) {
  HSReport report;
  report.conformally_balanced_residual_norm = conformally_balanced_residual(p);
  report.instanton_status = instanton_check(p, tau);

  double aplus_sq = matrix_parts(p.to_matrix()).plus.squaredNorm();
  bool kahler = kahler_residual(p.to_structure()) <= 1e-12 * std::max(1.0, p.to_matrix().norm());

  if (kahler) {
    report.classification = HSClass::KahlerAnySlope;
    report.anomaly_residual_norm = anomaly_residual(p, tau, 0.0).norm_inf();
    return report;
  }

  if (tau == 0.0 || tau == 1.0) {
    // the curvature trace vanishes identically, so the residual is
    // i del delbar omega for every slope
    report.classification = HSClass::Unsolvable;
    report.reason = UnsolvableReason::ChernOrLichnerowicz;
    report.anomaly_residual_norm = anomaly_residual(p, tau, 0.0).norm_inf();
    return report;
  }

  double K = proportionality_K(p, tau);
  if (std::abs(K) < 1e-14 * std::max(1.0, aplus_sq)) {
    report.classification = HSClass::Unsolvable;
    report.reason = UnsolvableReason::ZeroCurvatureTrace;
    report.anomaly_residual_norm = anomaly_residual(p, tau, 0.0).norm_inf();
    return report;
  }

  double alpha = 4.0 / K;
  KForm residual = anomaly_residual(p, tau, alpha);
  double scale = std::max(1.0, del_delbar(fundamental_form(),
                                          structure_constants(p.to_structure()))
                                   .norm_inf());
  if (residual.norm_inf() > 1e-10 * scale)
    throw std::logic_error("hull-strominger: slope 4/K fails to cancel the anomaly residual");

  report.classification = HSClass::SolvableWithSlope;
  report.alpha_prime = alpha;
  report.anomaly_residual_norm = residual.norm_inf();
  return report;
}

}  // namespace aaflow
