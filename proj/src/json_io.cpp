#include "aaflow/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace aaflow {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

double number_field(const nlohmann::json& j, const std::string& name) {
  if (!j.is_number())
    throw std::invalid_argument("input: \"" + name + "\" must be a number");
  return j.get<double>();
}

const char* name_of(HSClass c) {
  switch (c) {
    case HSClass::KahlerAnySlope: return "kahler_any_slope";
    case HSClass::SolvableWithSlope: return "solvable_with_slope";
    case HSClass::Unsolvable: return "unsolvable";
  }
  return "?";
}

const char* name_of(UnsolvableReason r) {
  switch (r) {
    case UnsolvableReason::ChernOrLichnerowicz: return "chern_or_lichnerowicz";
    case UnsolvableReason::ZeroCurvatureTrace: return "zero_curvature_trace";
  }
  return "?";
}

const char* name_of(InstantonClass c) {
  switch (c) {
    case InstantonClass::NotInstanton: return "not_instanton";
    case InstantonClass::FlatInstanton: return "flat_instanton";
    case InstantonClass::KahlerInstanton: return "kahler_instanton";
  }
  return "?";
}

}  // namespace

AlmostAbelianStructure parse_structure(const nlohmann::json& in) {
  if (!in.is_object()) throw std::invalid_argument("input must be a JSON object");

  if (in.contains("balanced_params")) {
    for (const auto& [key, value] : in.items())
      if (key != "balanced_params")
        throw std::invalid_argument("input: \"balanced_params\" cannot be combined with \"" +
                                    key + "\"");
    const nlohmann::json& bp = in.at("balanced_params");
    if (!bp.is_object())
      throw std::invalid_argument("input: \"balanced_params\" must be an object");
    static const std::pair<const char*, double BalancedParams::*> fields[] = {
        {"A22", &BalancedParams::A22}, {"A23", &BalancedParams::A23},
        {"A24", &BalancedParams::A24}, {"A25", &BalancedParams::A25},
        {"A32", &BalancedParams::A32}, {"A35", &BalancedParams::A35}};
    BalancedParams p;
    for (const auto& [key, value] : bp.items()) {
      bool known = false;
      for (const auto& [name, member] : fields)
        if (key == name) {
          p.*member = number_field(value, std::string("balanced_params.") + name);
          known = true;
        }
      if (!known)
        throw std::invalid_argument("input: unknown balanced parameter \"" + key +
                                    "\" (expected A22, A23, A24, A25, A32, A35)");
    }
    return p.to_structure();
  }

  AlmostAbelianStructure s;
  bool saw_A = false;
  for (const auto& [key, value] : in.items()) {
    if (key == "a") {
      s.a = number_field(value, "a");
    } else if (key == "v") {
      if (!value.is_array() || value.size() != 4)
        throw std::invalid_argument("input: \"v\" must be an array of 4 numbers");
      for (int i = 0; i < 4; ++i) s.v[i] = number_field(value[i], "v");
    } else if (key == "A") {
      if (!value.is_array() || value.size() != 4)
        throw std::invalid_argument("input: \"A\" must be a 4x4 array of numbers");
      for (int r = 0; r < 4; ++r) {
        const nlohmann::json& row = value[r];
        if (!row.is_array() || row.size() != 4)
          throw std::invalid_argument("input: \"A\" must be a 4x4 array of numbers");
        for (int c = 0; c < 4; ++c) s.A(r, c) = number_field(row[c], "A");
      }
      saw_A = true;
    } else {
      throw std::invalid_argument("input: unknown key \"" + key +
                                  "\" (expected \"a\", \"v\", \"A\" or \"balanced_params\")");
    }
  }
  if (!saw_A)
    throw std::invalid_argument("input: missing \"A\" (or use \"balanced_params\")");
  return s;
}

BalancedCheck check_balanced(const AlmostAbelianStructure& s) {
  BalancedCheck out;
  const double scale = std::max(1.0, s.A.lpNorm<Eigen::Infinity>());
  char buf[160];

  if (std::abs(s.a) > 1e-12) {
    std::snprintf(buf, sizeof buf, "a = %g; the balanced family requires a = 0", s.a);
    out.violation = buf;
    return out;
  }
  if (s.v.lpNorm<Eigen::Infinity>() > 1e-12) {
    std::snprintf(buf, sizeof buf, "|v|_inf = %g; the balanced family requires v = 0",
                  s.v.lpNorm<Eigen::Infinity>());
    out.violation = buf;
    return out;
  }
  const Eigen::Matrix4d& J = restricted_complex_structure();
  const double comm = (s.A * J - J * s.A).lpNorm<Eigen::Infinity>();
  if (comm > 1e-12 * scale) {
    std::snprintf(buf, sizeof buf,
                  "[A, J] != 0 on span{e2..e5} (residual %g); integrability requires A to "
                  "commute with J",
                  comm);
    out.violation = buf;
    return out;
  }
  if (std::abs(s.A.trace()) > 1e-12 * scale) {
    std::snprintf(buf, sizeof buf, "tr A = %g; the balanced condition requires tr A = 0",
                  s.A.trace());
    out.violation = buf;
    return out;
  }
  const double tr_ja = (J * s.A).trace();
  if (std::abs(tr_ja) > 1e-12 * scale) {
    std::snprintf(buf, sizeof buf,
                  "tr(JA) = %g; a trivial canonical bundle requires tr(JA) = 0", tr_ja);
    out.violation = buf;
    return out;
  }
  // the three conditions above carve out exactly the six-parameter pattern
  out.params = BalancedParams::from_matrix(s.A, 1e-9);
  if (!out.params) out.violation = "A is outside the balanced pattern";
  return out;
}

nlohmann::json to_json(const HSReport& rep) {
  nlohmann::json j{{"anomaly_residual_norm", rep.anomaly_residual_norm},
                   {"conformally_balanced_residual_norm", rep.conformally_balanced_residual_norm},
                   {"classification", name_of(rep.classification)},
                   {"instanton_status", name_of(rep.instanton_status)}};
  if (rep.alpha_prime) j["alpha_prime"] = *rep.alpha_prime;
  if (rep.reason) j["reason"] = name_of(*rep.reason);
  return j;
}

nlohmann::json to_json(const TrajectoryPoint& pt) {
  const BalancedParams& p = pt.params;
  const FlowMonitors& m = pt.monitors;
  return nlohmann::json{
      {"t", pt.t},
      {"params",
       {{"A22", p.A22},
        {"A23", p.A23},
        {"A24", p.A24},
        {"A25", p.A25},
        {"A32", p.A32},
        {"A35", p.A35}}},
      {"monitors",
       {{"norm_A_sq", m.norm_A_sq},
        {"norm_Aplus_sq", m.norm_Aplus_sq},
        {"norm_comm_sq", m.norm_comm_sq},
        {"f_value", m.f_value},
        {"tr_A", m.tr_A},
        {"tr_JA", m.tr_JA},
        {"decay_bound_rhs", m.decay_bound_rhs}}}};
}

const char* const kTrajectoryCsvHeader =
    "t,A22,A23,A24,A25,A32,A35,norm_A_sq,norm_Aplus_sq,norm_comm_sq,f_value,tr_A,tr_JA,"
    "decay_bound_rhs";

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points) {
  std::string out = kTrajectoryCsvHeader;
  out += '\n';
  char row[512];
  for (const TrajectoryPoint& pt : points) {
    const BalancedParams& p = pt.params;
    const FlowMonitors& m = pt.monitors;
    std::snprintf(row, sizeof row,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g\n",
                  pt.t, p.A22, p.A23, p.A24, p.A25, p.A32, p.A35, m.norm_A_sq, m.norm_Aplus_sq,
                  m.norm_comm_sq, m.f_value, m.tr_A, m.tr_JA, m.decay_bound_rhs);
    out += row;
  }
  return out;
}

nlohmann::json run_manifest(const std::string& command, std::string_view input_bytes,
                            const nlohmann::json& config_echo, double duration_seconds,
                            const std::vector<std::string>& outputs) {
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(fnv1a64(input_bytes)));
  return nlohmann::json{{"command", command},
                        {"input_digest_fnv1a64", digest},
                        {"config", config_echo},
                        {"tool_version", kToolVersion},
                        {"duration_seconds", duration_seconds},
                        {"outputs", outputs}};
}

}  // namespace aaflow
