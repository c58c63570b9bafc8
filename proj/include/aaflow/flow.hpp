#pragma once

#include <functional>
#include <vector>

#include "aaflow/connections.hpp"
#include "aaflow/ode.hpp"

// The anomaly flow on the balanced family, in two equivalent pictures: the
// bracket flow on the matrix A (an ODE on the six-parameter pattern) and the
// flow of the Hermitian form nu itself. The bracket picture is the one used
// for long-time runs; the metric picture is kept for cross-validation at
// alpha' = 0.

namespace aaflow {

struct FlowConfig {
  double tau = -1.0;
  double alpha_prime = 0.0;
  // |Psi|^{-2} scale entering the slope factor and the overall speed
  double psi_norm_sq_inv = 1.0;
  double t_end = 1.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;          // 0 means unbounded
  double initial_step = 0.0;      // 0 picks automatically
  double convergence_eps = 1e-8;  // halt once ||A^+|| stays below this; 0 disables
  double blow_up_norm = 1e12;     // abort once ||A|| exceeds this
  int num_samples = 200;          // trajectory points reported per run

  void validate() const;  // throws std::invalid_argument on bad values
};

struct FlowMonitors {
  double norm_A_sq = 0.0;      // ||A||^2
  double norm_Aplus_sq = 0.0;  // ||A^+||^2
  double norm_comm_sq = 0.0;   // ||[A^+, A^-]||^2
  double f_value = 0.0;        // slope factor f(A)
  double tr_A = 0.0;           // conserved at 0 along the flow
  double tr_JA = 0.0;          // conserved at 0 along the flow
  double decay_bound_rhs = 0.0;  // y0 / (1 + y0 t / 2), the a priori bound on ||A^+||^2
};

struct TrajectoryPoint {
  double t = 0.0;
  BalancedParams params;
  FlowMonitors monitors;
};

enum class FlowStatus { ReachedTEnd, Converged, StepSizeUnderflow, BlowUp };

struct FlowResult {
  // sampled geometrically in 1 + t, endpoints included
  std::vector<TrajectoryPoint> points;
  FlowStatus status = FlowStatus::ReachedTEnd;
  bool outside_hypotheses = false;  // slope factor nonpositive at the start
  bool f_crossed_zero = false;      // slope factor left the positive half-line mid-run
  // dense interpolants over the accepted steps; state is A in row-major order
  std::vector<DenseSegment> segments;
  double initial_Aplus_sq = 0.0;  // ||A^+||^2 at t = 0, feeds the decay bound
  long accepted_steps = 0;
  long rejected_steps = 0;

  // dense evaluation of A at any time covered by the run
  Eigen::Matrix4d matrix_at(double t) const;
  TrajectoryPoint eval(double t, const FlowConfig& cfg) const;
};

// slope factor f(A) = 1 - (alpha'/4) K(A) |Psi|^{-2} with K the
// curvature-trace proportionality constant of the Gauduchon connection
double slope_f(const BalancedParams& p, const FlowConfig& cfg);
double slope_f(const Eigen::Matrix4d& A, const FlowConfig& cfg);

// bracket-flow tangent |Psi|^{-2} f(A) (2[[A^+, A^-], A] - ||A^+||^2 A)
Eigen::Matrix4d bracket_rhs(const Eigen::Matrix4d& A, const FlowConfig& cfg);
BalancedParams bracket_rhs(const BalancedParams& p, const FlowConfig& cfg);

// integrate the bracket flow from p0; the optional callback sees every
// accepted step (not just the reported samples)
FlowResult integrate_bracket_flow(
    const BalancedParams& p0, const FlowConfig& cfg,
    const std::function<void(const TrajectoryPoint&)>& on_accepted = {});

// finite-difference check of the two scalar identities along a run:
//   d||A||^2/dt = 2 |Psi|^{-2} f (-4||C||^2 - ||A^+||^2 ||A||^2)
//   d f/dt      = (alpha'/4)(tau(tau-1)^2/8) |Psi|^{-4} f (4||C||^2 + 2||A^+||^4)
// with C = [A^+, A^-]; derivatives from a 5-point stencil on the dense output
struct MonitorReport {
  double max_norm_identity_error = 0.0;
  double max_slope_identity_error = 0.0;
  double tolerance = 1e-5;
  bool ok = true;
};
MonitorReport monitor_identities(const FlowResult& run, const FlowConfig& cfg);

// P_mu = |Psi|^{-2} f(A) blockdiag(||A^+||^2, 2[A^+, A^-], ||A^+||^2) on
// the frame splitting R e1 + span{e2..e5} + R e6
Matrix6d p_mu(const BalancedParams& p, const FlowConfig& cfg);

// derivative of the bracket under a gl(6) direction E,
//   (pi(E) mu)(x, y) = E mu(x, y) - mu(E x, y) - mu(x, E y),
// reported through the induced motion of the d coefficients (delta c =
// -delta b, so the result compares directly with structure_constants of a
// moved structure)
StructureConstants pi_action(const Matrix6d& E, const StructureConstants& sc);

// metric-picture tangent at nu: |Psi|^{-2}_nu times the Lefschetz preimage of
// d d^c nu. A zero tangent is returned for any alpha'; a nonzero one is only
// defined here at alpha' = 0 and other slopes throw.
KForm metric_rhs(const KForm& nu, const FlowConfig& cfg, const StructureConstants& sc);

struct MetricPoint {
  double t = 0.0;
  KForm nu{2};
  double psi_norm_sq = 0.0;  // |Psi|^2 of the evolving metric
};

enum class MetricFlowStatus { ReachedTEnd, PositivityLost, StepSizeUnderflow };

struct MetricFlowResult {
  std::vector<MetricPoint> points;  // sampled geometrically in 1 + t
  MetricFlowStatus status = MetricFlowStatus::ReachedTEnd;
  // dense interpolants; state is the coordinate vector in the J-invariant
  // 2-form basis
  std::vector<DenseSegment> segments;
  long accepted_steps = 0;

  // dense evaluation of nu at any time covered by the run
  KForm nu_at(double t) const;
};

MetricFlowResult integrate_metric_flow(const KForm& nu0, const FlowConfig& cfg,
                                       const StructureConstants& sc);

}  // namespace aaflow
