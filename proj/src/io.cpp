#include "lspsel/io.hpp"

#include <fstream>
#include <sstream>

namespace lspsel::io {

json map_to_json(const GridMap& m) {
  std::string cells(m.size(), 'U');
  for (std::size_t i = 0; i < m.size(); ++i) {
    switch (m.states()[i]) {
      case CellState::Unknown: cells[i] = 'U'; break;
      case CellState::Free: cells[i] = 'F'; break;
      case CellState::Occupied: cells[i] = 'O'; break;
    }
  }
  return json{{"width", m.width()},
              {"height", m.height()},
              {"cells", std::move(cells)},
              {"features", std::vector<int>(m.features().begin(), m.features().end())}};
}

GridMap map_from_json(const json& j) {
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  const auto cells = j.at("cells").get<std::string>();
  const auto features = j.at("features").get<std::vector<int>>();
  GridMap m(w, h);
  if (cells.size() != m.size() || features.size() != m.size()) {
    throw Error(ErrorCode::DimensionMismatch, "map arrays do not match width*height");
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    CellState s;
    switch (cells[i]) {
      case 'U': s = CellState::Unknown; break;
      case 'F': s = CellState::Free; break;
      case 'O': s = CellState::Occupied; break;
      default: throw Error(ErrorCode::InvalidArgument, std::string("bad cell character '") + cells[i] + "'");
    }
    m.set(m.cell_at(i), s, features[i]);
  }
  return m;
}

json scenario_to_json(const Scenario& s) {
  json j = map_to_json(s.true_map);
  j["start"] = cell_json(s.start);
  j["goal"] = cell_json(s.goal);
  j["family"] = std::string(to_string(s.family));
  j["seed"] = s.seed;
  j["id"] = s.id;
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.true_map = map_from_json(j);
  s.start = cell_from(j.at("start"));
  s.goal = cell_from(j.at("goal"));
  s.family = parse_family(j.at("family").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.id = j.contains("id") ? j.at("id").get<std::string>() : scenario_id(s.family, s.seed);
  return s;
}

namespace {

json keyed_json(const KeyedEntry& e) { return json{{"p_s", e.p_s}, {"r_s_scale", e.r_s_scale}, {"r_e", e.r_e}}; }

KeyedEntry keyed_from(const json& j) {
  return {j.at("p_s").get<double>(), j.at("r_s_scale").get<double>(), j.at("r_e").get<double>()};
}

}  // namespace

json estimator_to_json(const Estimator& e) {
  json params = json::object();
  switch (e.kind) {
    case EstimatorKind::NonLearned: break;
    case EstimatorKind::FeatureKeyed: {
      json mapping = json::object();
      for (const auto& [sig, entry] : e.keyed) mapping[std::to_string(sig)] = keyed_json(entry);
      params["mapping"] = std::move(mapping);
      params["default"] = keyed_json(e.keyed_default);
      break;
    }
    case EstimatorKind::Tabular:
      for (const auto& [sig, t] : e.table) {
        params[std::to_string(sig)] = json{{"n", t.n},
                                           {"successes", t.successes},
                                           {"sum_success_cost", t.sum_success_cost},
                                           {"sum_failure_cost", t.sum_failure_cost},
                                           {"sum_success_ratio", t.sum_success_ratio}};
      }
      break;
  }
  return json{{"kind", std::string(to_string(e.kind))},
              {"name", e.name},
              {"default_r_e", e.default_r_e},
              {"parameters", std::move(params)}};
}

Estimator estimator_from_json(const json& j) {
  Estimator e;
  e.kind = parse_estimator_kind(j.at("kind").get<std::string>());
  e.name = j.at("name").get<std::string>();
  e.default_r_e = j.value("default_r_e", kDefaultFailureCost);
  const json& params = j.contains("parameters") ? j.at("parameters") : json::object();
  switch (e.kind) {
    case EstimatorKind::NonLearned: break;
    case EstimatorKind::FeatureKeyed:
      for (const auto& [sig, entry] : params.at("mapping").items()) e.keyed[std::stoi(sig)] = keyed_from(entry);
      e.keyed_default = keyed_from(params.at("default"));
      break;
    case EstimatorKind::Tabular:
      for (const auto& [sig, t] : params.items()) {
        TabularCounts c;
        c.n = t.at("n").get<long>();
        c.successes = t.at("successes").get<long>();
        c.sum_success_cost = t.at("sum_success_cost").get<double>();
        c.sum_failure_cost = t.at("sum_failure_cost").get<double>();
        c.sum_success_ratio = t.value("sum_success_ratio", 0.0);
        if (c.successes < 0 || c.successes > c.n) throw Error(ErrorCode::InvalidArgument, "bad tabular counts");
        e.table[std::stoi(sig)] = c;
      }
      break;
  }
  return e;
}

json record_to_json(const TrialRecord& r) {
  json steps = json::array();
  for (const TrialStep& st : r.steps) {
    json fp = json::array();
    for (const Cell& c : st.footprint) fp.push_back(cell_json(c));
    steps.push_back(json{{"pose", json::array({st.pose.x, st.pose.y, st.pose.heading})}, {"footprint", std::move(fp)}});
  }
  return json{{"scenario_id", r.scenario_id}, {"policy", r.policy},          {"steps", std::move(steps)},
              {"m_final", map_to_json(r.m_final)}, {"cost", r.cost}, {"reached", r.reached}};
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.policy = j.at("policy").get<std::string>();
  r.cost = j.at("cost").get<double>();
  r.reached = j.at("reached").get<bool>();
  r.m_final = map_from_json(j.at("m_final"));
  for (const json& st : j.at("steps")) {
    const json& p = st.at("pose");
    TrialStep step{Pose{p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<double>()}, {}};
    for (const json& c : st.at("footprint")) step.footprint.push_back(cell_from(c));
    r.steps.push_back(std::move(step));
  }
  return r;
}

json replay_row(const ReplayOutcome& r, const std::string& deployed_policy) {
  return json{{"scenario_id", r.scenario_id}, {"deployed_policy", deployed_policy},
              {"replayed_policy", r.policy},  {"c_lb_opt", r.c_lb_opt},
              {"c_lb_sc", r.c_lb_sc},         {"exit_attempts", r.exit_attempts}};
}

ReplayOutcome replay_from_row(const json& j) {
  ReplayOutcome r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.policy = j.at("replayed_policy").get<std::string>();
  r.c_lb_opt = j.at("c_lb_opt").get<double>();
  r.c_lb_sc = j.at("c_lb_sc").get<double>();
  r.exit_attempts = j.at("exit_attempts").get<int>();
  return r;
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Io, path.string() + ": " + e.what());
    }
  }
  return out;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump() + "\n"); }

}  // namespace lspsel::io
