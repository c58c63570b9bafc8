#include "aaflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aaflow {

namespace {

Eigen::VectorXd vec(const Eigen::Matrix4d& A) {
  Eigen::VectorXd y(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) y[4 * r + c] = A(r, c);
  return y;
}

Eigen::Matrix4d unvec(const Eigen::VectorXd& y) {
  Eigen::Matrix4d A;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) A(r, c) = y[4 * r + c];
  return A;
}

Eigen::Matrix4d commutator_of_parts(const Eigen::Matrix4d& A) {
  const MatrixParts parts = matrix_parts(A);
  return parts.plus * parts.minus - parts.minus * parts.plus;
}

// the integrated matrix can drift off the pattern at rounding level, so the
// parameters are read off entrywise while the monitors see the full matrix
BalancedParams params_of(const Eigen::Matrix4d& A) {
  BalancedParams p;
  p.A22 = A(0, 0);
  p.A23 = A(0, 1);
  p.A24 = A(0, 2);
  p.A25 = A(0, 3);
  p.A32 = A(1, 0);
  p.A35 = A(1, 3);
  return p;
}

TrajectoryPoint point_of(double t, const Eigen::Matrix4d& A, const FlowConfig& cfg,
                         double initial_aplus_sq) {
  TrajectoryPoint pt;
  pt.t = t;
  pt.params = params_of(A);
  FlowMonitors& m = pt.monitors;
  m.norm_A_sq = A.squaredNorm();
  m.norm_Aplus_sq = matrix_parts(A).plus.squaredNorm();
  m.norm_comm_sq = commutator_of_parts(A).squaredNorm();
  m.f_value = slope_f(A, cfg);
  m.tr_A = A.trace();
  m.tr_JA = (restricted_complex_structure() * A).trace();
  m.decay_bound_rhs = initial_aplus_sq / (1.0 + 0.5 * initial_aplus_sq * t);
  return pt;
}

// sample times spread geometrically in 1 + t over [0, T], endpoints exact
std::vector<double> sample_times(double T, int n) {
  std::vector<double> ts(n);
  for (int k = 0; k < n; ++k)
    ts[k] = std::expm1(double(k) / double(n - 1) * std::log1p(T));
  ts.front() = 0.0;
  ts.back() = T;
  return ts;
}

const DenseSegment& segment_at(const std::vector<DenseSegment>& segments, double& t) {
  t = std::clamp(t, segments.front().t0, segments.back().t1);
  auto it = std::lower_bound(segments.begin(), segments.end(), t,
                             [](const DenseSegment& s, double v) { return s.t1 < v; });
  if (it == segments.end()) --it;
  return *it;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(t_end >= 0.0)) throw std::invalid_argument("flow: t_end must be nonnegative");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("flow: tolerances must be positive");
  if (max_step < 0.0 || initial_step < 0.0)
    throw std::invalid_argument("flow: step bounds must be nonnegative");
  if (!(psi_norm_sq_inv > 0.0))
    throw std::invalid_argument("flow: the |Psi|^{-2} scale must be positive");
  if (convergence_eps < 0.0)
    throw std::invalid_argument("flow: convergence threshold must be nonnegative");
  if (!(blow_up_norm > 0.0))
    throw std::invalid_argument("flow: blow-up threshold must be positive");
  if (num_samples < 2) throw std::invalid_argument("flow: need at least two samples");
}

double slope_f(const BalancedParams& p, const FlowConfig& cfg) {
  return 1.0 - 0.25 * cfg.alpha_prime * proportionality_K(p, cfg.tau) * cfg.psi_norm_sq_inv;
}

double slope_f(const Eigen::Matrix4d& A, const FlowConfig& cfg) {
  const double aplus_sq = matrix_parts(A).plus.squaredNorm();
  const double K = cfg.tau * (cfg.tau - 1.0) * (cfg.tau - 1.0) / 8.0 * aplus_sq;
  return 1.0 - 0.25 * cfg.alpha_prime * K * cfg.psi_norm_sq_inv;
}

Eigen::Matrix4d bracket_rhs(const Eigen::Matrix4d& A, const FlowConfig& cfg) {
  const Eigen::Matrix4d C = commutator_of_parts(A);
  const double y = matrix_parts(A).plus.squaredNorm();
  return cfg.psi_norm_sq_inv * slope_f(A, cfg) * (2.0 * (C * A - A * C) - y * A);
}

BalancedParams bracket_rhs(const BalancedParams& p, const FlowConfig& cfg) {
  // the tangent stays in the pattern: the expression preserves the commutant
  // of J and both trace conditions, so entrywise readout is lossless
  return params_of(bracket_rhs(p.to_matrix(), cfg));
}

Eigen::Matrix4d FlowResult::matrix_at(double t) const {
  if (segments.empty()) throw std::logic_error("flow run carries no dense output");
  const DenseSegment& seg = segment_at(segments, t);
  return unvec(seg.at(t));
}

TrajectoryPoint FlowResult::eval(double t, const FlowConfig& cfg) const {
  return point_of(t, matrix_at(t), cfg, initial_Aplus_sq);
}

FlowResult integrate_bracket_flow(const BalancedParams& p0, const FlowConfig& cfg,
                                  const std::function<void(const TrajectoryPoint&)>& on_accepted) {
  cfg.validate();
  FlowResult out;
  const Eigen::Matrix4d A0 = p0.to_matrix();
  const double y0 = matrix_parts(A0).plus.squaredNorm();
  out.initial_Aplus_sq = y0;
  out.outside_hypotheses = !(slope_f(A0, cfg) > 0.0);

  // already at a fixed point of the pattern, nothing to integrate
  if (cfg.convergence_eps > 0.0 && std::sqrt(y0) < cfg.convergence_eps) {
    out.points.push_back(point_of(0.0, A0, cfg, y0));
    out.status = FlowStatus::Converged;
    return out;
  }

  OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.initial_step = cfg.initial_step;
  opts.max_step = cfg.max_step;

  auto rhs = [&cfg](double, const Eigen::VectorXd& y) { return vec(bracket_rhs(unvec(y), cfg)); };

  int below_streak = 0;
  bool was_positive = !out.outside_hypotheses;
  bool blow_up = false;

  auto cb = [&](const DenseSegment& seg, const Eigen::VectorXd& y1) {
    out.segments.push_back(seg);
    const Eigen::Matrix4d A = unvec(y1);
    const TrajectoryPoint pt = point_of(seg.t1, A, cfg, y0);
    if (on_accepted) on_accepted(pt);
    if (was_positive && pt.monitors.f_value <= 0.0) {
      out.f_crossed_zero = true;
      was_positive = false;
    }
    if (A.norm() > cfg.blow_up_norm) {
      blow_up = true;
      return false;
    }
    if (cfg.convergence_eps > 0.0 && std::sqrt(pt.monitors.norm_Aplus_sq) < cfg.convergence_eps) {
      if (++below_streak >= 3) return false;
    } else {
      below_streak = 0;
    }
    return true;
  };

  const OdeResult ode = integrate_dopri5(rhs, 0.0, vec(A0), cfg.t_end, opts, cb);
  out.accepted_steps = ode.accepted;
  out.rejected_steps = ode.rejected;
  switch (ode.status) {
    case OdeStatus::ReachedEnd:
      out.status = FlowStatus::ReachedTEnd;
      break;
    case OdeStatus::StoppedByCallback:
      out.status = blow_up ? FlowStatus::BlowUp : FlowStatus::Converged;
      break;
    case OdeStatus::StepSizeUnderflow:
    case OdeStatus::MaxStepsExceeded:
      out.status = FlowStatus::StepSizeUnderflow;
      break;
  }

  if (out.segments.empty()) {
    out.points.push_back(point_of(0.0, A0, cfg, y0));
    return out;
  }
  for (double t : sample_times(ode.t, cfg.num_samples)) out.points.push_back(out.eval(t, cfg));
  return out;
}

MonitorReport monitor_identities(const FlowResult& run, const FlowConfig& cfg) {
  MonitorReport rep;
  if (run.segments.empty()) return rep;
  const double t_lo = run.segments.front().t0;
  const double t_hi = run.segments.back().t1;
  const double kappa =
      0.25 * cfg.alpha_prime * cfg.tau * (cfg.tau - 1.0) * (cfg.tau - 1.0) / 8.0;
  const double s = cfg.psi_norm_sq_inv;

  auto norm_sq_at = [&](double t) { return run.matrix_at(t).squaredNorm(); };
  auto f_at = [&](double t) { return slope_f(run.matrix_at(t), cfg); };

  for (const TrajectoryPoint& pt : run.points) {
    const double t = pt.t;
    const double d = 0.004 * (t + 1.0);
    if (t - 2.0 * d < t_lo || t + 2.0 * d > t_hi) continue;

    const double dn = (norm_sq_at(t - 2 * d) - 8.0 * norm_sq_at(t - d) +
                       8.0 * norm_sq_at(t + d) - norm_sq_at(t + 2 * d)) /
                      (12.0 * d);
    const double df =
        (f_at(t - 2 * d) - 8.0 * f_at(t - d) + 8.0 * f_at(t + d) - f_at(t + 2 * d)) / (12.0 * d);

    const Eigen::Matrix4d A = run.matrix_at(t);
    const double comm_sq = commutator_of_parts(A).squaredNorm();
    const double y = matrix_parts(A).plus.squaredNorm();
    const double f = slope_f(A, cfg);
    const double rhs_n = 2.0 * s * f * (-4.0 * comm_sq - y * A.squaredNorm());
    const double rhs_f = kappa * s * s * f * (4.0 * comm_sq + 2.0 * y * y);

    rep.max_norm_identity_error =
        std::max(rep.max_norm_identity_error, std::abs(dn - rhs_n) / std::max(1.0, std::abs(rhs_n)));
    rep.max_slope_identity_error =
        std::max(rep.max_slope_identity_error, std::abs(df - rhs_f) / std::max(1.0, std::abs(rhs_f)));
  }
  rep.ok = rep.max_norm_identity_error < rep.tolerance &&
           rep.max_slope_identity_error < rep.tolerance;
  return rep;
}

Matrix6d p_mu(const BalancedParams& p, const FlowConfig& cfg) {
  const Eigen::Matrix4d A = p.to_matrix();
  const double scale = cfg.psi_norm_sq_inv * slope_f(A, cfg);
  const double y = matrix_parts(A).plus.squaredNorm();
  Matrix6d P = Matrix6d::Zero();
  P(0, 0) = scale * y;
  P.block<4, 4>(1, 1) = scale * 2.0 * commutator_of_parts(A);
  P(5, 5) = scale * y;
  return P;
}

StructureConstants pi_action(const Matrix6d& E, const StructureConstants& sc) {
  double b[kDim][kDim][kDim];
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) b[k][i][j] = sc.bracket_coeff(k + 1, i + 1, j + 1);

  StructureConstants out;
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j) {
        double db = 0.0;
        for (int m = 0; m < kDim; ++m)
          db += E(k, m) * b[m][i][j] - b[k][m][j] * E(m, i) - b[k][i][m] * E(m, j);
        if (db != 0.0) out.add_d_term(k + 1, i + 1, j + 1, -db);
      }
  return out;
}

KForm metric_rhs(const KForm& nu, const FlowConfig& cfg, const StructureConstants& sc) {
  if (nu.degree != 2) throw std::invalid_argument("metric flow state must be a 2-form");
  if (!is_positive_one_one(nu))
    throw std::invalid_argument("metric flow state must be a positive (1,1)-form");
  const KForm Phi = del_delbar(nu, sc);
  if (Phi.is_zero(0.0)) return KForm(2);  // stationary, any slope
  if (cfg.alpha_prime != 0.0)
    throw std::invalid_argument(
        "metric picture only supports alpha' = 0 away from stationary points");
  const KForm beta = lefschetz_solve(Phi, nu);
  const double psi_sq = HermitianMetric::from_two_form(nu).psi_norm_sq();
  return (1.0 / psi_sq) * beta;
}

MetricFlowResult integrate_metric_flow(const KForm& nu0, const FlowConfig& cfg,
                                       const StructureConstants& sc) {
  cfg.validate();
  if (nu0.degree != 2 || !is_positive_one_one(nu0))
    throw std::invalid_argument("metric flow must start at a positive (1,1)-form");

  const Eigen::MatrixXd& basis = j_invariant_basis(2);  // 15 x 9
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  auto to_form = [&](const Eigen::VectorXd& x) {
    KForm f(2);
    f.coeffs = basis * x;
    return f;
  };

  auto rhs = [&](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const KForm nu = to_form(x);
    // a trial stage outside the positive cone is rejected through a
    // non-finite error estimate rather than an exception
    if (!is_positive_one_one(nu))
      return Eigen::VectorXd::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
    return qr.solve(metric_rhs(nu, cfg, sc).coeffs);
  };

  MetricFlowResult out;
  bool lost = false;
  auto cb = [&](const DenseSegment& seg, const Eigen::VectorXd& x1) {
    out.segments.push_back(seg);
    if (!is_positive_one_one(to_form(x1))) {
      lost = true;
      return false;
    }
    return true;
  };

  OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.initial_step = cfg.initial_step;
  opts.max_step = cfg.max_step;

  const OdeResult ode = integrate_dopri5(rhs, 0.0, qr.solve(nu0.coeffs), cfg.t_end, opts, cb);
  out.accepted_steps = ode.accepted;
  switch (ode.status) {
    case OdeStatus::ReachedEnd:
      out.status = MetricFlowStatus::ReachedTEnd;
      break;
    case OdeStatus::StoppedByCallback:
      out.status = MetricFlowStatus::PositivityLost;
      break;
    case OdeStatus::StepSizeUnderflow:
    case OdeStatus::MaxStepsExceeded:
      out.status = MetricFlowStatus::StepSizeUnderflow;
      break;
  }

  auto emit = [&](double t, const KForm& nu) {
    MetricPoint mp;
    mp.t = t;
    mp.nu = nu;
    // determinant route, valid whether or not positivity survived at the end
    mp.psi_norm_sq = 1.0 / hermitian_gram(nu).determinant().real();
    out.points.push_back(std::move(mp));
  };

  if (out.segments.empty()) {
    emit(0.0, nu0);
    return out;
  }
  // when positivity was lost, keep only the steps whose endpoints stayed positive
  if (lost) {
    out.segments.pop_back();
    if (out.segments.empty()) {
      emit(0.0, nu0);
      return out;
    }
  }
  const double T = out.segments.back().t1;
  for (double t : sample_times(T, cfg.num_samples)) {
    const DenseSegment& seg = segment_at(out.segments, t);
    emit(t, to_form(seg.at(t)));
  }
  return out;
}

KForm MetricFlowResult::nu_at(double t) const {
  if (segments.empty()) throw std::logic_error("metric flow run carries no dense output");
  const DenseSegment& seg = segment_at(segments, t);
  KForm f(2);
  f.coeffs = j_invariant_basis(2) * seg.at(t);
  return f;
}

}  // namespace aaflow
