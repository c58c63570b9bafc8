#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aaflow/flow.hpp"
#include "aaflow/hull_strominger.hpp"

using namespace aaflow;

namespace {

std::mt19937 rng(910405);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

BalancedParams random_params(double scale) {
  BalancedParams p;
  p.A22 = uniform(-scale, scale);
  p.A23 = uniform(-scale, scale);
  p.A24 = uniform(-scale, scale);
  p.A25 = uniform(-scale, scale);
  p.A32 = uniform(-scale, scale);
  p.A35 = uniform(-scale, scale);
  return p;
}

// A22 = 0, A32 = -A23, A35 = A24 kills the symmetric part entirely
BalancedParams random_kahler_params() {
  BalancedParams p;
  p.A23 = uniform(-1.0, 1.0);
  p.A24 = uniform(-1.0, 1.0);
  p.A25 = uniform(-1.0, 1.0);
  p.A32 = -p.A23;
  p.A35 = p.A24;
  return p;
}

}  // namespace

TEST_CASE("slope factor: frozen values and agreement of the two routes") {
  // A22 = 1 gives K = -2 at tau = -1, so alpha' = -2 sits exactly on f = 0
  BalancedParams one{1, 0, 0, 0, 0, 0};
  FlowConfig cfg;
  cfg.tau = -1.0;
  cfg.alpha_prime = -2.0;
  CHECK(std::abs(slope_f(one, cfg)) < 1e-14);
  CHECK(std::abs(slope_f(one.to_matrix(), cfg)) < 1e-14);

  // alpha' = 0 short-circuits to 1 regardless of the structure
  cfg.alpha_prime = 0.0;
  for (int trial = 0; trial < 10; ++trial)
    CHECK(slope_f(random_params(2.0), cfg) == 1.0);

  // Kahler structures have K = 0, hence f = 1 for every slope
  cfg.alpha_prime = 3.7;
  cfg.psi_norm_sq_inv = 0.4;
  CHECK(slope_f(random_kahler_params(), cfg) == 1.0);

  for (int trial = 0; trial < 50; ++trial) {
    BalancedParams p = random_params(1.0);
    FlowConfig c;
    c.tau = uniform(-3.0, 3.0);
    c.alpha_prime = uniform(-3.0, 3.0);
    c.psi_norm_sq_inv = uniform(0.2, 2.0);
    const double via_params = slope_f(p, c);
    const double via_matrix = slope_f(p.to_matrix(), c);
    const double direct = 1.0 - 0.25 * c.alpha_prime * proportionality_K(p, c.tau) * c.psi_norm_sq_inv;
    CHECK(std::abs(via_params - via_matrix) < 1e-12);
    CHECK(std::abs(via_params - direct) < 1e-12);
  }
}

TEST_CASE("bracket tangent: fixed points, the diagonal line, pattern closure") {
  FlowConfig cfg;

  // Kahler structures are fixed points: A^+ = 0 makes the tangent vanish
  for (int trial = 0; trial < 10; ++trial)
    CHECK(bracket_rhs(random_kahler_params().to_matrix(), cfg).norm() == 0.0);

  // f = 0 freezes the flow even with A^+ != 0
  BalancedParams one{1, 0, 0, 0, 0, 0};
  FlowConfig frozen;
  frozen.tau = -1.0;
  frozen.alpha_prime = -2.0;
  CHECK(bracket_rhs(one.to_matrix(), frozen).norm() == 0.0);

  // A22 = 1 is diagonal and symmetric: C = 0, ||A^+||^2 = 4, tangent = -4 A
  const Eigen::Matrix4d A1 = one.to_matrix();
  CHECK((bracket_rhs(A1, cfg) + 4.0 * A1).lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK(bracket_rhs(one, cfg).A22 == doctest::Approx(-4.0).epsilon(1e-14));

  // the |Psi|^{-2} scale multiplies the speed linearly
  FlowConfig doubled;
  doubled.psi_norm_sq_inv = 2.0;
  CHECK((bracket_rhs(A1, doubled) - 2.0 * bracket_rhs(A1, cfg)).lpNorm<Eigen::Infinity>() < 1e-14);

  // the tangent stays inside the six-parameter pattern, and the two overloads
  // read off the same entries
  for (int trial = 0; trial < 100; ++trial) {
    BalancedParams p = random_params(1.0);
    FlowConfig c;
    c.tau = uniform(-3.0, 3.0);
    c.alpha_prime = uniform(-1.0, 1.0);
    const Eigen::Matrix4d M = bracket_rhs(p.to_matrix(), c);
    const auto q = BalancedParams::from_matrix(M, 1e-9);
    REQUIRE(q.has_value());
    const BalancedParams d = bracket_rhs(p, c);
    CHECK(d.A22 == q->A22);
    CHECK(d.A23 == q->A23);
    CHECK(d.A24 == q->A24);
    CHECK(d.A25 == q->A25);
    CHECK(d.A32 == q->A32);
    CHECK(d.A35 == q->A35);
    const double y = matrix_parts(p.to_matrix()).plus.squaredNorm();
    if (std::abs(slope_f(p, c)) > 1e-3 && y > 1e-6) CHECK(M.norm() > 1e-12);
  }
}

TEST_CASE("flow on the diagonal line matches the closed-form solution") {
  // A = A22 diag(1,-1,-1,1) stays diagonal with A22(t) = A22(0) (1 + 8t)^{-1/2}
  BalancedParams one{1, 0, 0, 0, 0, 0};
  FlowConfig cfg;
  cfg.t_end = 100.0;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-14;
  cfg.convergence_eps = 0.0;
  const FlowResult run = integrate_bracket_flow(one, cfg);
  REQUIRE(run.status == FlowStatus::ReachedTEnd);
  CHECK(!run.outside_hypotheses);
  CHECK(!run.f_crossed_zero);
  CHECK(run.initial_Aplus_sq == doctest::Approx(4.0).epsilon(1e-14));

  for (double t : {1.0, 10.0, 100.0}) {
    const TrajectoryPoint pt = run.eval(t, cfg);
    const double y_exact = 4.0 / (1.0 + 8.0 * t);
    CHECK(std::abs(pt.monitors.norm_Aplus_sq - y_exact) < 1e-8 * y_exact);
    CHECK(std::abs(pt.params.A22 - 1.0 / std::sqrt(1.0 + 8.0 * t)) < 1e-9);
    // the off-pattern slots stay at exact zero: the tangent is a scalar
    // multiple of a diagonal matrix throughout
    CHECK(pt.params.A23 == 0.0);
    CHECK(pt.params.A24 == 0.0);
    CHECK(pt.params.A25 == 0.0);
    CHECK(pt.params.A32 == 0.0);
    CHECK(pt.params.A35 == 0.0);
  }
}

TEST_CASE("decay bound, trace conservation and norm monotonicity on random runs") {
  for (int trial = 0; trial < 100; ++trial) {
    BalancedParams p = random_params(1.0);
    FlowConfig cfg;
    cfg.t_end = 20.0;
    cfg.convergence_eps = 0.0;
    double prev_norm_sq = std::numeric_limits<double>::infinity();
    bool bound_ok = true, traces_ok = true, monotone_ok = true;
    const FlowResult run = integrate_bracket_flow(p, cfg, [&](const TrajectoryPoint& pt) {
      const FlowMonitors& m = pt.monitors;
      if (m.norm_Aplus_sq > m.decay_bound_rhs * (1.0 + 1e-9) + 1e-300) bound_ok = false;
      if (std::abs(m.tr_A) > 1e-9 || std::abs(m.tr_JA) > 1e-9) traces_ok = false;
      if (m.norm_A_sq > prev_norm_sq * (1.0 + 1e-12) + 1e-15) monotone_ok = false;
      prev_norm_sq = m.norm_A_sq;
    });
    CHECK(run.status == FlowStatus::ReachedTEnd);
    CHECK(bound_ok);
    CHECK(traces_ok);
    CHECK(monotone_ok);
  }
}

TEST_CASE("statuses: instant convergence, long-run convergence, blow-up") {
  // a Kahler start is already converged, nothing is integrated
  FlowConfig cfg;
  const FlowResult still = integrate_bracket_flow(random_kahler_params(), cfg);
  CHECK(still.status == FlowStatus::Converged);
  REQUIRE(still.points.size() == 1);
  CHECK(still.points[0].t == 0.0);
  CHECK(still.accepted_steps == 0);
  CHECK_THROWS_AS(still.matrix_at(0.0), std::logic_error);

  // with the convergence halt disabled the same start integrates as an exact
  // fixed point: every sample equals the initial data
  BalancedParams k = random_kahler_params();
  FlowConfig hold;
  hold.t_end = 5.0;
  hold.convergence_eps = 0.0;
  hold.num_samples = 50;
  const FlowResult flat = integrate_bracket_flow(k, hold);
  CHECK(flat.status == FlowStatus::ReachedTEnd);
  REQUIRE(flat.points.size() == 50);
  for (const TrajectoryPoint& pt : flat.points) {
    CHECK(pt.params.A22 == k.A22);
    CHECK(pt.params.A23 == k.A23);
    CHECK(pt.params.A24 == k.A24);
    CHECK(pt.params.A25 == k.A25);
    CHECK(pt.params.A32 == k.A32);
    CHECK(pt.params.A35 == k.A35);
  }

  // run the diagonal solution out to ||A^+|| < 1e-7, reached near t ~ 5e13
  BalancedParams one{1, 0, 0, 0, 0, 0};
  FlowConfig longrun;
  longrun.t_end = 1e18;
  longrun.convergence_eps = 1e-7;
  const FlowResult conv = integrate_bracket_flow(one, longrun);
  CHECK(conv.status == FlowStatus::Converged);
  const TrajectoryPoint& last = conv.points.back();
  CHECK(last.monitors.norm_Aplus_sq < 1e-14 * 1.0001);
  CHECK(last.t > 1e12);
  CHECK(last.t < 1e18);

  // a large negative slope at tau = -1 makes f < 0 and the norm explodes
  FlowConfig bad;
  bad.tau = -1.0;
  bad.alpha_prime = -16.0;
  bad.t_end = 10.0;
  bad.convergence_eps = 0.0;
  bad.blow_up_norm = 1e3;
  const FlowResult boom = integrate_bracket_flow(one, bad);
  CHECK(boom.status == FlowStatus::BlowUp);
  CHECK(boom.outside_hypotheses);
  CHECK(!boom.f_crossed_zero);
  CHECK(boom.points.back().monitors.norm_A_sq > 1e6);
}

TEST_CASE("finite-difference monitors confirm the scalar identities") {
  BalancedParams one{1, 0, 0, 0, 0, 0};
  FlowConfig cfg;
  cfg.t_end = 50.0;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-13;
  cfg.convergence_eps = 0.0;
  const FlowResult run = integrate_bracket_flow(one, cfg);
  const MonitorReport rep = monitor_identities(run, cfg);
  CHECK(rep.ok);
  CHECK(rep.max_norm_identity_error < 1e-5);
  CHECK(rep.max_slope_identity_error < 1e-5);

  // on a fixed point the trajectory is bitwise constant; the norm stencil
  // still picks up non-associativity in g - 8g + 8g - g, so it is only zero
  // to rounding, while f == 1.0 exactly makes the slope stencil exact
  FlowConfig hold;
  hold.t_end = 5.0;
  hold.convergence_eps = 0.0;
  const FlowResult flat = integrate_bracket_flow(random_kahler_params(), hold);
  const MonitorReport flat_rep = monitor_identities(flat, hold);
  CHECK(flat_rep.max_norm_identity_error < 1e-12);
  CHECK(flat_rep.max_slope_identity_error == 0.0);

  // generic slopes and |Psi|^{-2} scales; draws kept small enough that the
  // fourth-order stencil stays well inside the reporting tolerance
  for (int trial = 0; trial < 5; ++trial) {
    BalancedParams p = random_params(0.35);
    FlowConfig c;
    c.tau = (trial % 2 == 0) ? -1.0 : 0.5;
    c.alpha_prime = uniform(-0.5, 0.5);
    c.psi_norm_sq_inv = uniform(0.75, 1.25);
    c.t_end = 10.0;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-13;
    c.convergence_eps = 0.0;
    const FlowResult r = integrate_bracket_flow(p, c);
    REQUIRE(r.status == FlowStatus::ReachedTEnd);
    const MonitorReport m = monitor_identities(r, c);
    CHECK(m.ok);
  }
}

TEST_CASE("P_mu and the bracket motion it induces on the structure constants") {
  FlowConfig cfg;

  // diagonal case: C = 0, ||A^+||^2 = 4, so P_mu = 4 (E11 + E66)
  BalancedParams one{1, 0, 0, 0, 0, 0};
  Matrix6d expected = Matrix6d::Zero();
  expected(0, 0) = 4.0;
  expected(5, 5) = 4.0;
  CHECK((p_mu(one, cfg) - expected).lpNorm<Eigen::Infinity>() < 1e-14);

  // Kahler: the derivation degenerates, P_mu = 0
  CHECK(p_mu(random_kahler_params(), cfg).lpNorm<Eigen::Infinity>() == 0.0);

  // pi(P_mu) moves the d coefficients exactly as the matrix tangent does:
  // the moved constants coincide with those of the structure whose A block
  // is bracket_rhs(A)
  for (int trial = 0; trial < 100; ++trial) {
    BalancedParams p = random_params(1.0);
    FlowConfig c;
    c.tau = uniform(-3.0, 3.0);
    c.alpha_prime = uniform(-1.0, 1.0);
    c.psi_norm_sq_inv = uniform(0.25, 2.0);
    const StructureConstants sc = structure_constants(p.to_structure());
    const StructureConstants moved = pi_action(p_mu(p, c), sc);

    AlmostAbelianStructure target;
    target.A = bracket_rhs(p.to_matrix(), c);
    const StructureConstants expect = structure_constants(target);
    const double scale = std::max(1.0, target.A.lpNorm<Eigen::Infinity>());
    for (int kk = 1; kk <= kDim; ++kk)
      CHECK((moved.d_of_coframe(kk) - expect.d_of_coframe(kk)).norm_inf() < 1e-12 * scale);
  }

  // frozen value: A22 = 1, tau = -1, alpha' = 0.5 gives f = 1.25 and the
  // tangent -5 A, so de^2 picks up -5 e^{26}
  FlowConfig half;
  half.tau = -1.0;
  half.alpha_prime = 0.5;
  const StructureConstants sc1 = structure_constants(one.to_structure());
  const StructureConstants moved1 = pi_action(p_mu(one, half), sc1);
  CHECK(std::abs(evaluate(moved1.d_of_coframe(2), {2, 6}) - (-5.0)) < 1e-13);
}

TEST_CASE("metric picture: tangent oracle, stationarity, the diagonal run") {
  // the structure with A32 = 2: de^3 = 2 e^{26}, de^4 = 2 e^{56}
  BalancedParams fam{0, 0, 0, 0, 2, 0};
  const StructureConstants sc = structure_constants(fam.to_structure());
  FlowConfig cfg;

  // on nu = 2a e16 + 2b e25 + 2c e34 the tangent is the diagonal vector
  // (2ac^2, 2bc^2, -2c^3); this pins the Lefschetz inversion and the
  // |Psi|^{-2} weight at once
  const std::array<std::array<double, 3>, 3> cases = {
      {{1.0, 1.0, 1.0}, {2.0, 0.5, 1.5}, {0.3, 0.7, 0.2}}};
  for (const auto& abc : cases) {
    const double a = abc[0], b = abc[1], c = abc[2];
    KForm nu(2);
    nu += (2.0 * a) * basis_form({1, 6});
    nu += (2.0 * b) * basis_form({2, 5});
    nu += (2.0 * c) * basis_form({3, 4});
    KForm want(2);
    want += (2.0 * a * c * c) * basis_form({1, 6});
    want += (2.0 * b * c * c) * basis_form({2, 5});
    want += (-2.0 * c * c * c) * basis_form({3, 4});
    const double scale = std::max(1.0, want.norm_inf());
    CHECK((metric_rhs(nu, cfg, sc) - want).norm_inf() < 1e-12 * scale);
  }

  // Kahler structures are stationary for every slope, exactly
  const StructureConstants flat = structure_constants(random_kahler_params().to_structure());
  const KForm two_omega = 2.0 * fundamental_form();
  for (double alpha : {0.0, 3.7}) {
    FlowConfig c2;
    c2.alpha_prime = alpha;
    CHECK(metric_rhs(two_omega, c2, flat).is_zero(0.0));
  }

  // away from stationary points only alpha' = 0 is available here
  FlowConfig sloped;
  sloped.alpha_prime = 1.0;
  CHECK_THROWS_AS(metric_rhs(two_omega, sloped, sc), std::invalid_argument);
  // and the state must be a positive (1,1)-form
  CHECK_THROWS_AS(metric_rhs(-1.0 * two_omega, cfg, sc), std::invalid_argument);

  // the full run against the closed-form solution a = b = sqrt(2t+1),
  // c = (2t+1)^{-1/2} of the reduced system a' = a c^2, b' = b c^2, c' = -c^3
  FlowConfig run_cfg;
  run_cfg.t_end = 10.0;
  run_cfg.rel_tol = 1e-10;
  run_cfg.abs_tol = 1e-13;
  run_cfg.num_samples = 101;
  const MetricFlowResult run = integrate_metric_flow(two_omega, run_cfg, sc);
  REQUIRE(run.status == MetricFlowStatus::ReachedTEnd);
  REQUIRE(run.points.size() == 101);
  CHECK(run.accepted_steps > 0);

  double worst = 0.0;
  for (const MetricPoint& mp : run.points) {
    const Eigen::Matrix3cd G = hermitian_gram(mp.nu);
    const double s = std::sqrt(2.0 * mp.t + 1.0);
    worst = std::max(worst, std::abs(G(0, 0).real() - s));
    worst = std::max(worst, std::abs(G(1, 1).real() - s));
    worst = std::max(worst, std::abs(G(2, 2).real() - 1.0 / s));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(G(i, j)) < 1e-12);
    // |Psi|^2 = 1/(a b c) = (2t+1)^{-1/2} along the closed-form solution
    CHECK(std::abs(mp.psi_norm_sq - 1.0 / s) < 1e-6);
  }
  CHECK(worst < 1e-6);

  // dense output hits interior times: c(4) = 1/3
  const Eigen::Matrix3cd G4 = hermitian_gram(run.nu_at(4.0));
  CHECK(std::abs(G4(2, 2).real() - 1.0 / 3.0) < 1e-7);
}

TEST_CASE("configuration validation rejects unusable inputs") {
  const BalancedParams p{1, 0, 0, 0, 0, 0};
  auto bad = [&](auto&& tweak) {
    FlowConfig c;
    tweak(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS_AS(integrate_bracket_flow(p, c), std::invalid_argument);
  };
  bad([](FlowConfig& c) { c.t_end = -1.0; });
  bad([](FlowConfig& c) { c.t_end = std::numeric_limits<double>::quiet_NaN(); });
  bad([](FlowConfig& c) { c.rel_tol = 0.0; });
  bad([](FlowConfig& c) { c.abs_tol = -1.0; });
  bad([](FlowConfig& c) { c.psi_norm_sq_inv = 0.0; });
  bad([](FlowConfig& c) { c.convergence_eps = -1.0; });
  bad([](FlowConfig& c) { c.blow_up_norm = 0.0; });
  bad([](FlowConfig& c) { c.num_samples = 1; });
  bad([](FlowConfig& c) { c.max_step = -1.0; });

  FlowConfig ok;
  CHECK_NOTHROW(ok.validate());
}
