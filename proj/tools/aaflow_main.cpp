#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aaflow/json_io.hpp"

// Command-line front end: analyze a structure, integrate the bracket flow,
// run the randomized cross-check suite, or replay the worked nilmanifold
// example. Machine-readable output (JSON, CSV) goes to stdout or --out;
// summaries, status lines and the run manifest go to stderr unless an output
// file is written, in which case the manifest lands next to it.

using namespace aaflow;
using nlohmann::json;

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// inline JSON if the argument looks like a document, a file path otherwise
std::string load_input(const std::string& arg) {
  if (!arg.empty() && arg[0] == '{') return arg;
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw std::invalid_argument("input: cannot read file \"" + arg + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw std::invalid_argument("input: malformed JSON");
  return doc;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("output: cannot open \"" + path + "\"");
  out << bytes;
}

// manifest beside the output file when there is one, on stderr otherwise
void emit_manifest(const std::string& command, std::string_view input_bytes,
                   const json& config_echo, double duration_seconds,
                   const std::vector<std::string>& outputs) {
  std::vector<std::string> listed = outputs;
  if (!outputs.empty()) listed.push_back(outputs.front() + ".manifest.json");
  const json m = run_manifest(command, input_bytes, config_echo, duration_seconds, listed);
  if (outputs.empty())
    std::fprintf(stderr, "%s\n", m.dump().c_str());
  else
    write_file(outputs.front() + ".manifest.json", m.dump(2) + "\n");
}

const char* status_name(FlowStatus s) {
  switch (s) {
    case FlowStatus::ReachedTEnd: return "reached_t_end";
    case FlowStatus::Converged: return "converged";
    case FlowStatus::StepSizeUnderflow: return "step_size_underflow";
    case FlowStatus::BlowUp: return "blow_up";
  }
  return "?";
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// ---------------------------------------------------------------- analyze ---

int cmd_analyze(const std::string& command, const std::string& input_text, double tau,
                double alpha_prime) {
  Timer timer;
  const AlmostAbelianStructure s = parse_structure(parse_document(input_text));
  const double scale = std::max(1.0, s.A.lpNorm<Eigen::Infinity>());
  const bool balanced = balanced_residual(s) <= 1e-12 * scale;
  const bool kahler = kahler_residual(s) <= 1e-12 * scale;
  const bool trivial_canonical = canonical_residual(s) <= 1e-12 * scale;
  const BalancedCheck bc = check_balanced(s);

  auto yesno = [](bool b) { return b ? "yes" : "no"; };
  std::fprintf(stderr, "balanced:          %s\n", yesno(balanced));
  std::fprintf(stderr, "kahler:            %s\n", yesno(kahler));
  std::fprintf(stderr, "trivial canonical: %s\n", yesno(trivial_canonical));

  json out{{"flags",
            {{"balanced", balanced},
             {"kahler", kahler},
             {"trivial_canonical", trivial_canonical}}},
           {"balanced_family", bc.params.has_value()}};

  if (bc.params) {
    const BalancedParams& p = *bc.params;
    const double K = proportionality_K(p, tau);
    FlowConfig fc;
    fc.tau = tau;
    fc.alpha_prime = alpha_prime;
    const double f = slope_f(p, fc);
    const HSReport rep = classify(p, tau);
    std::fprintf(stderr, "K:                 %.17g\n", K);
    std::fprintf(stderr, "f:                 %.17g\n", f);
    if (rep.alpha_prime)
      std::fprintf(stderr, "classification:    solvable_with_slope (alpha' = %.17g)\n",
                   *rep.alpha_prime);
    else
      std::fprintf(stderr, "classification:    %s\n",
                   to_json(rep)["classification"].get<std::string>().c_str());
    std::fprintf(stderr, "instanton:         %s\n",
                 to_json(rep)["instanton_status"].get<std::string>().c_str());
    out["K"] = K;
    out["f"] = f;
    out["report"] = to_json(rep);
  } else {
    std::fprintf(stderr, "K:                 n/a (%s)\n", bc.violation.c_str());
    std::fprintf(stderr, "classification:    n/a\n");
    out["violation"] = bc.violation;
  }

  std::printf("%s\n", out.dump(2).c_str());
  emit_manifest(command, input_text,
                json{{"tau", tau}, {"alpha_prime", alpha_prime}}, timer.seconds(), {});
  return 0;
}

// ------------------------------------------------------------------- flow ---

int cmd_flow(const std::string& command, const std::string& input_text, const FlowConfig& cfg,
             const std::string& out_path, const std::string& format) {
  Timer timer;
  const AlmostAbelianStructure s = parse_structure(parse_document(input_text));
  const BalancedCheck bc = check_balanced(s);
  if (!bc.params) throw std::invalid_argument("input: " + bc.violation);

  const double f0 = slope_f(*bc.params, cfg);
  std::fprintf(stderr, "f(A_0) = %.17g (%s)\n", f0,
               f0 > 0.0 ? "positive" : "outside theorem hypotheses");

  const FlowResult run = integrate_bracket_flow(*bc.params, cfg);
  std::fprintf(stderr, "status: %s after %ld accepted steps (t = %.17g)\n",
               status_name(run.status), run.accepted_steps, run.points.back().t);

  std::string payload;
  if (format == "csv") {
    payload = trajectory_csv(run.points);
  } else {
    json doc{{"status", status_name(run.status)},
             {"outside_hypotheses", run.outside_hypotheses},
             {"f_crossed_zero", run.f_crossed_zero},
             {"accepted_steps", run.accepted_steps},
             {"rejected_steps", run.rejected_steps},
             {"points", json::array()}};
    for (const TrajectoryPoint& pt : run.points) doc["points"].push_back(to_json(pt));
    payload = doc.dump(2) + "\n";
  }

  std::vector<std::string> outputs;
  if (out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
  } else {
    write_file(out_path, payload);
    outputs.push_back(out_path);
  }

  const json echo{{"tau", cfg.tau},
                  {"alpha_prime", cfg.alpha_prime},
                  {"psi_norm_sq_inv", cfg.psi_norm_sq_inv},
                  {"t_end", cfg.t_end},
                  {"rel_tol", cfg.rel_tol},
                  {"abs_tol", cfg.abs_tol},
                  {"max_step", cfg.max_step},
                  {"initial_step", cfg.initial_step},
                  {"convergence_eps", cfg.convergence_eps},
                  {"blow_up_norm", cfg.blow_up_norm},
                  {"num_samples", cfg.num_samples},
                  {"format", format}};
  emit_manifest(command, input_text, echo, timer.seconds(), outputs);

  const bool ok = run.status == FlowStatus::ReachedTEnd || run.status == FlowStatus::Converged;
  return ok ? 0 : 3;
}

// ----------------------------------------------------------------- verify ---

struct CheckRow {
  const char* name;
  int draws;
  double max_residual;
  double tolerance;
};

BalancedParams draw_params(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  BalancedParams p;
  p.A22 = u(rng);
  p.A23 = u(rng);
  p.A24 = u(rng);
  p.A25 = u(rng);
  p.A32 = u(rng);
  p.A35 = u(rng);
  return p;
}

int cmd_verify(const std::string& command, std::uint64_t seed, int draws, bool inject_fault) {
  Timer timer;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> utau(-3.0, 3.0);
  std::vector<CheckRow> rows;
  bool logic_ok = true;

  // Jacobi identity and the conformally balanced condition on the family
  {
    double worst_jacobi = 0.0, worst_cb = 0.0;
    for (int i = 0; i < draws; ++i) {
      const BalancedParams p = draw_params(rng, 1.0);
      worst_jacobi = std::max(worst_jacobi, jacobi_residual(structure_constants(p.to_structure())));
      worst_cb = std::max(worst_cb, conformally_balanced_residual(p));
    }
    rows.push_back({"jacobi-residual", draws, worst_jacobi, 1e-12});
    rows.push_back({"conformally-balanced", draws, worst_cb, 1e-12});
  }

  // d is a differential: d(d a) = 0 for random 1-forms
  {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const StructureConstants sc = structure_constants(draw_params(rng, 1.0).to_structure());
      KForm a(1);
      for (int k = 0; k < a.coeffs.size(); ++k) a.coeffs[k] = u(rng);
      worst = std::max(worst, exterior_derivative(exterior_derivative(a, sc), sc).norm_inf());
    }
    rows.push_back({"d-squared", draws, worst, 1e-12});
  }

  // closed-form curvature, the trace equality and the proportionality to
  // i del delbar omega, against the generic curvature route
  {
    double worst_curv = 0.0, worst_trace = 0.0, worst_prop = 0.0;
    for (int i = 0; i < draws; ++i) {
      const BalancedParams p = draw_params(rng, 1.0);
      const double tau = utau(rng);
      const StructureConstants sc = structure_constants(p.to_structure());
      const CurvatureForms generic = curvature_forms(gauduchon_forms(sc, tau), sc);
      const CurvatureForms closed = closed_form_curvature(p, tau);
      for (int a = 1; a <= kDim; ++a)
        for (int b = 1; b <= kDim; ++b)
          worst_curv = std::max(worst_curv, (generic.entry(a, b) - closed.entry(a, b)).norm_inf());

      KForm closed_trace = closed_form_trace(p, tau);
      if (inject_fault) closed_trace = -1.0 * closed_trace;  // test-only mutation hook
      worst_trace =
          std::max(worst_trace, (trace_curvature_wedge(generic) - closed_trace).norm_inf());

      const KForm prop = proportionality_K(p, tau) * del_delbar(fundamental_form(), sc);
      worst_prop = std::max(worst_prop, (closed_form_trace(p, tau) - prop).norm_inf());
    }
    rows.push_back({"curvature-closed-form", draws, worst_curv, 1e-10});
    rows.push_back({"trace-wedge-closed-form", draws, worst_trace, 1e-10});
    rows.push_back({"trace-proportionality", draws, worst_prop, 1e-10});
  }

  // solvability: the classified slope really kills the anomaly residual
  {
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const BalancedParams p = draw_params(rng, 1.0);
      const double tau = utau(rng);
      const HSReport rep = classify(p, tau);
      if (rep.classification == HSClass::SolvableWithSlope) {
        const StructureConstants sc = structure_constants(p.to_structure());
        const double lhs = del_delbar(fundamental_form(), sc).norm_inf();
        const double res = anomaly_residual(p, tau, *rep.alpha_prime).norm_inf();
        worst = std::max(worst, res / std::max(1.0, lhs));
      }
      // the Chern and Lichnerowicz slopes kill the curvature trace instead
      const HSReport chern = classify(p, 1.0);
      if (chern.classification != HSClass::Unsolvable || !chern.reason) logic_ok = false;
    }
    rows.push_back({"anomaly-slope", draws, worst, 1e-10});
  }

  // bracket flow: reduction certificate, decay bound, trace conservation
  {
    double worst_cert = 0.0;
    for (int i = 0; i < draws; ++i) {
      const BalancedParams p = draw_params(rng, 1.0);
      FlowConfig fc;
      fc.tau = utau(rng);
      fc.alpha_prime = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      AlmostAbelianStructure target;
      target.A = bracket_rhs(p.to_matrix(), fc);
      const StructureConstants expect = structure_constants(target);
      const StructureConstants moved =
          pi_action(p_mu(p, fc), structure_constants(p.to_structure()));
      const double scale = std::max(1.0, target.A.lpNorm<Eigen::Infinity>());
      for (int k = 1; k <= kDim; ++k)
        worst_cert = std::max(
            worst_cert, (moved.d_of_coframe(k) - expect.d_of_coframe(k)).norm_inf() / scale);
    }
    rows.push_back({"reduction-certificate", draws, worst_cert, 1e-12});

    double worst_bound = 0.0, worst_trace = 0.0;
    const int runs = std::min(draws, 100);  // each draw is a full integration
    for (int i = 0; i < runs; ++i) {
      const BalancedParams p = draw_params(rng, 1.0);
      FlowConfig fc;
      fc.t_end = 5.0;
      fc.convergence_eps = 0.0;
      integrate_bracket_flow(p, fc, [&](const TrajectoryPoint& pt) {
        const FlowMonitors& m = pt.monitors;
        worst_bound = std::max(worst_bound, (m.norm_Aplus_sq - m.decay_bound_rhs) /
                                                std::max(1.0, m.decay_bound_rhs));
        worst_trace = std::max(worst_trace, std::max(std::abs(m.tr_A), std::abs(m.tr_JA)));
      });
    }
    rows.push_back({"decay-bound", runs, std::max(worst_bound, 0.0), 1e-9});
    rows.push_back({"trace-conservation", runs, worst_trace, 1e-9});
  }

  bool all_pass = logic_ok;
  std::printf("%-26s %7s %14s %11s %s\n", "check", "draws", "max residual", "tolerance",
              "status");
  for (const CheckRow& r : rows) {
    const bool pass = r.max_residual < r.tolerance;
    all_pass = all_pass && pass;
    std::printf("%-26s %7d %14.3e %11.1e %s\n", r.name, r.draws, r.max_residual, r.tolerance,
                pass ? "pass" : "FAIL");
  }
  if (!logic_ok) std::printf("classification logic: FAIL\n");
  std::printf("verify: %s\n", all_pass ? "all checks passed" : "FAILURES detected");

  emit_manifest(command, "", json{{"seed", seed}, {"draws", draws}}, timer.seconds(), {});
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- example ---

int cmd_example(const std::string& command) {
  Timer timer;
  // the nilmanifold structure de^3 = 2 e^{26}, de^4 = 2 e^{56} started at
  // nu_0 = 2 omega; the reduced system a' = a c^2, b' = b c^2, c' = -c^3 has
  // the solution a = b = sqrt(2t+1), c = (2t+1)^{-1/2}
  BalancedParams fam{0, 0, 0, 0, 2, 0};
  const StructureConstants sc = structure_constants(fam.to_structure());
  FlowConfig cfg;
  cfg.t_end = 10.0;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-13;
  cfg.num_samples = 101;
  const MetricFlowResult run = integrate_metric_flow(2.0 * fundamental_form(), cfg, sc);
  if (run.status != MetricFlowStatus::ReachedTEnd) {
    std::fprintf(stderr, "example: integration did not reach t = 10\n");
    return 1;
  }

  std::printf("%8s %13s %13s %13s %13s %13s %12s\n", "t", "a", "b", "c", "a_exact", "c_exact",
              "max|dev|");
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = double(k) / 10.0;
    const Eigen::Matrix3cd G = hermitian_gram(run.nu_at(t));
    const double s = std::sqrt(2.0 * t + 1.0);
    const double a = G(0, 0).real(), b = G(1, 1).real(), c = G(2, 2).real();
    const double dev =
        std::max({std::abs(a - s), std::abs(b - s), std::abs(c - 1.0 / s)});
    worst = std::max(worst, dev);
    std::printf("%8.4f %13.9f %13.9f %13.9f %13.9f %13.9f %12.3e\n", t, a, b, c, s, 1.0 / s,
                dev);
  }
  const bool pass = worst < 1e-6;
  std::printf("max deviation over 101 samples: %.3e (tolerance 1e-06) -> %s\n", worst,
              pass ? "pass" : "FAIL");

  emit_manifest(command, "", json{{"t_end", cfg.t_end}, {"samples", 101}}, timer.seconds(), {});
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant Hermitian geometry of 6-dimensional almost-abelian Lie algebras"};
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  std::string input, out_path, format = "csv";
  double tau = -1.0, alpha_prime = 0.0;
  FlowConfig cfg;
  std::uint64_t seed = 0;
  int draws = 1000;
  bool inject_fault = false;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "residual flags, curvature trace factor and solvability classification");
  analyze->add_option("input", input, "JSON document or path to one")->required();
  analyze->add_option("--tau", tau, "Gauduchon parameter")->capture_default_str();
  analyze->add_option("--alpha-prime", alpha_prime, "slope entering the reported f")
      ->capture_default_str();

  CLI::App* flow = app.add_subcommand("flow", "integrate the bracket flow on the balanced family");
  flow->add_option("input", input, "JSON document or path to one")->required();
  flow->add_option("--tau", cfg.tau, "Gauduchon parameter")->capture_default_str();
  flow->add_option("--alpha-prime", cfg.alpha_prime, "slope alpha'")->capture_default_str();
  flow->add_option("--psi-norm-sq-inv", cfg.psi_norm_sq_inv, "|Psi|^{-2} scale")
      ->capture_default_str();
  flow->add_option("--t-end", cfg.t_end, "integration horizon")->capture_default_str();
  flow->add_option("--rel-tol", cfg.rel_tol, "relative step tolerance")->capture_default_str();
  flow->add_option("--abs-tol", cfg.abs_tol, "absolute step tolerance")->capture_default_str();
  flow->add_option("--max-step", cfg.max_step, "step ceiling (0 = none)")->capture_default_str();
  flow->add_option("--convergence-eps", cfg.convergence_eps,
                   "halt once ||A^+|| stays below this (0 = off)")
      ->capture_default_str();
  flow->add_option("--blow-up-norm", cfg.blow_up_norm, "abort once ||A|| exceeds this")
      ->capture_default_str();
  flow->add_option("--samples", cfg.num_samples, "trajectory points reported")
      ->capture_default_str();
  flow->add_option("--out", out_path, "output file (stdout when absent)");
  flow->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* verify =
      app.add_subcommand("verify", "randomized cross-checks with a per-check residual table");
  verify->add_option("--seed", seed, "RNG seed")->capture_default_str();
  verify->add_option("--draws", draws, "draws per check")->capture_default_str();
  verify->add_flag("--inject-fault", inject_fault)->group("");

  CLI::App* example =
      app.add_subcommand("example", "worked nilmanifold metric flow against its closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    (void)app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(command, load_input(input), tau, alpha_prime);
    if (flow->parsed()) return cmd_flow(command, load_input(input), cfg, out_path, format);
    if (verify->parsed()) return cmd_verify(command, seed, draws, inject_fault);
    if (example->parsed()) return cmd_example(command);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
