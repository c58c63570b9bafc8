#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

// Embedded Dormand-Prince 5(4) pair with FSAL, order-4 dense output and PI
// step-size control.  The flow right-hand sides are smooth and non-stiff in
// the regime of interest, so an explicit pair with error control is enough.

namespace aaflow {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks a starting step automatically
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 100000000;
};

// dense interpolant over one accepted step
struct DenseSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  Eigen::VectorXd rcont1, rcont2, rcont3, rcont4, rcont5;

  Eigen::VectorXd at(double t) const {
    double theta = (t - t0) / (t1 - t0);
    double theta1 = 1.0 - theta;
    return rcont1 +
           theta * (rcont2 + theta1 * (rcont3 + theta * (rcont4 + theta1 * rcont5)));
  }
};

enum class OdeStatus { ReachedEnd, StoppedByCallback, StepSizeUnderflow, MaxStepsExceeded };

struct OdeResult {
  OdeStatus status = OdeStatus::ReachedEnd;
  double t = 0.0;
  Eigen::VectorXd y;
  long accepted = 0;
  long rejected = 0;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
// return false to stop the integration after this accepted step
using OdeStepCallback = std::function<bool(const DenseSegment&, const Eigen::VectorXd&)>;

namespace detail {

inline double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                         const Eigen::VectorXd& y1, double rel_tol, double abs_tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double q = err[i] / sc;
    sum += q * q;
  }
  double norm = std::sqrt(sum / static_cast<double>(err.size()));
  return std::isfinite(norm) ? norm : 1e10;
}

inline double initial_step_guess(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                                 const Eigen::VectorXd& f0, double t_end,
                                 double rel_tol, double abs_tol) {
  auto weighted = [&](const Eigen::VectorXd& v) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double sc = abs_tol + rel_tol * std::abs(y0[i]);
      double q = v[i] / sc;
      sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
  };
  double d0 = weighted(y0);
  double d1 = weighted(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_end - t0);
  Eigen::VectorXd f1 = rhs(t0 + h0, y0 + h0 * f0);
  double d2 = weighted(f1 - f0) / h0;
  double m = std::max(d1, d2);
  double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
  double h = std::min(100.0 * h0, h1);
  if (!std::isfinite(h) || h <= 0.0) h = 1e-6;
  return std::min(h, t_end - t0);
}

}  // namespace detail

inline OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, Eigen::VectorXd y0,
                                  double t_end, const OdeOptions& opts,
                                  const OdeStepCallback& on_accepted = {}) {
  // Dormand-Prince coefficients
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640,
                      e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  // dense-output coefficients
  static const double d1 = -12715105075.0 / 11282082432.0,
                      d3 = 87487479700.0 / 32700410799.0,
                      d4 = -10690763975.0 / 1880347072.0,
                      d5 = 701980252875.0 / 199316789632.0,
                      d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  // PI controller
  static const double beta = 0.04, alpha = 0.2 - beta * 0.75, safe = 0.9,
                      fac_min = 0.2, fac_max = 5.0;

  OdeResult out;
  out.t = t0;
  out.y = std::move(y0);
  if (t_end <= t0) return out;

  Eigen::VectorXd k1 = rhs(out.t, out.y);
  double h = opts.initial_step > 0.0
                 ? std::min(opts.initial_step, t_end - t0)
                 : detail::initial_step_guess(rhs, t0, out.y, k1, t_end, opts.rel_tol,
                                              opts.abs_tol);
  double facold = 1e-4;
  bool last_rejected = false;

  for (long steps = 0; steps < opts.max_steps; ++steps) {
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    bool last_step = out.t + h >= t_end;
    if (last_step) h = t_end - out.t;
    if (h <= std::abs(out.t) * 1e-15 || h < 1e-300) {
      out.status = OdeStatus::StepSizeUnderflow;
      return out;
    }

    const Eigen::VectorXd& y = out.y;
    Eigen::VectorXd k2 = rhs(out.t + c2 * h, y + h * (a21 * k1));
    Eigen::VectorXd k3 = rhs(out.t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Eigen::VectorXd k4 = rhs(out.t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Eigen::VectorXd k5 =
        rhs(out.t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Eigen::VectorXd k6 = rhs(out.t + h,
                             y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Eigen::VectorXd k7 = rhs(out.t + h, y1);
    Eigen::VectorXd err_vec =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = detail::error_norm(err_vec, y, y1, opts.rel_tol, opts.abs_tol);

    double fac11 = std::pow(err, alpha);
    if (err <= 1.0) {
      // accept
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      facold = std::max(err, 1e-4);

      DenseSegment seg;
      seg.t0 = out.t;
      seg.t1 = out.t + h;
      Eigen::VectorXd ydiff = y1 - y;
      Eigen::VectorXd bspl = h * k1 - ydiff;
      seg.rcont1 = y;
      seg.rcont2 = ydiff;
      seg.rcont3 = bspl;
      seg.rcont4 = ydiff - h * k7 - bspl;
      seg.rcont5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      out.t += h;
      out.y = std::move(y1);
      k1 = std::move(k7);
      ++out.accepted;
      last_rejected = false;

      if (on_accepted && !on_accepted(seg, out.y)) {
        out.status = OdeStatus::StoppedByCallback;
        return out;
      }
      if (last_step) {
        out.status = OdeStatus::ReachedEnd;
        return out;
      }
      h = hnew;
    } else {
      // reject
      h = h / std::min(1.0 / fac_min, fac11 / safe);
      last_rejected = true;
      ++out.rejected;
    }
  }
  out.status = OdeStatus::MaxStepsExceeded;
  return out;
}

}  // namespace aaflow
