#pragma once

// JSON (nlohmann) encodings of the on-disk formats.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lspsel/envgen.hpp"
#include "lspsel/estimators.hpp"
#include "lspsel/gridmap.hpp"
#include "lspsel/planner.hpp"
#include "lspsel/replay.hpp"

namespace lspsel::io {

using nlohmann::json;

/// {width, height, cells: "UFO..." row-major, features: [...]}
json map_to_json(const GridMap& m);
GridMap map_from_json(const json& j);

/// Map object plus {start, goal, family, seed, id}.
json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

/// {kind, name, parameters}; Tabular parameters map signature -> counts, with
/// default_r_e stored beside them at top level.
json estimator_to_json(const Estimator& e);
Estimator estimator_from_json(const json& j);

/// {scenario_id, policy, steps: [{pose: [x, y, h], footprint: [[x, y], ...]}],
///  m_final, cost, reached}
json record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const json& j);

/// {scenario_id, deployed_policy, replayed_policy, c_lb_opt, c_lb_sc, exit_attempts}
json replay_row(const ReplayOutcome& r, const std::string& deployed_policy);
ReplayOutcome replay_from_row(const json& j);

/// One JSON value per non-empty line.
std::vector<json> read_json_lines(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
/// Writes compact JSON followed by a newline, via a temporary file and rename.
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

inline json cell_json(Cell c) { return json::array({c.x, c.y}); }
inline Cell cell_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace lspsel::io
