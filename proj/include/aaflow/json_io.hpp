#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aaflow/flow.hpp"
#include "aaflow/hull_strominger.hpp"

// JSON input parsing, report serialization and the CSV trajectory format
// shared by the command-line tool and its tests.

namespace aaflow {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit digest of the raw input bytes, quoted in run manifests
std::uint64_t fnv1a64(std::string_view bytes);

// accepts either
//   {"a": <number>, "v": [v1..v4], "A": [[..] x4]}   ("a", "v" optional)
// or
//   {"balanced_params": {"A22": .., ..., "A35": ..}} (all six optional)
// and throws std::invalid_argument naming the offending field otherwise
AlmostAbelianStructure parse_structure(const nlohmann::json& in);

// either the balanced six-parameter pattern sitting inside s, or the first
// violated membership condition spelled out
struct BalancedCheck {
  std::optional<BalancedParams> params;
  std::string violation;  // empty exactly when params is set
};
BalancedCheck check_balanced(const AlmostAbelianStructure& s);

nlohmann::json to_json(const HSReport& rep);
nlohmann::json to_json(const TrajectoryPoint& pt);

// fixed header, one row per point, every number through %.17g
extern const char* const kTrajectoryCsvHeader;
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points);

// manifest written alongside every output file: the exact command, a digest
// of the input bytes, the effective configuration, tool version, wall-clock
// duration and the produced paths
nlohmann::json run_manifest(const std::string& command, std::string_view input_bytes,
                            const nlohmann::json& config_echo, double duration_seconds,
                            const std::vector<std::string>& outputs);

}  // namespace aaflow
