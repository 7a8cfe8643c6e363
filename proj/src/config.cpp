#include "pipeframe/config.hpp"

#include <fstream>

#include "pipeframe/error.hpp"

namespace pipeframe {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, where + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, where + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw Error(Errc::parse_error, where + ": expected a boolean, got '" + value + "'");
}

} // namespace

void apply_config_key(SelectionConfig& config, const std::string& key, const std::string& value,
                      const std::string& where) {
  if (key == "t_flow") config.t_flow = parse_double(value, where);
  else if (key == "t_baseline") config.t_baseline = parse_double(value, where);
  else if (key == "alpha") config.alpha = parse_double(value, where);
  else if (key == "t_angle") config.t_angle = parse_double(value, where);
  else if (key == "strategy") {
    const auto s = strategy_from_name(value);
    if (!s) throw Error(Errc::parse_error, where + ": unknown strategy '" + value + "'");
    config.strategy = *s;
  } else if (key == "seed") config.rng_seed = std::uint64_t(parse_int(value, where));
  else if (key == "stride") config.frame_stride = int(parse_int(value, where));
  else if (key == "beta_normalized") config.beta_normalized = parse_bool(value, where);
  else if (key == "beta_use_inliers") config.beta_use_inliers = parse_bool(value, where);
  else if (key == "max_keypoints") config.features.max_count = int(parse_int(value, where));
  else if (key == "fast_threshold") config.features.fast_threshold = int(parse_int(value, where));
  else if (key == "match_max_distance")
    config.features.match_max_distance = int(parse_int(value, where));
  else if (key == "cross_check") config.features.cross_check = parse_bool(value, where);
  else if (key == "flow_window_radius") config.flow.window_radius = int(parse_int(value, where));
  else if (key == "flow_levels") config.flow.pyramid_levels = int(parse_int(value, where));
  else if (key == "flow_iterations") config.flow.max_iterations = int(parse_int(value, where));
  else if (key == "flow_epsilon") config.flow.epsilon = parse_double(value, where);
  else if (key == "flow_min_tracked") config.flow.min_tracked = int(parse_int(value, where));
  else if (key == "ransac_threshold") config.ransac.inlier_threshold = parse_double(value, where);
  else if (key == "ransac_confidence") config.ransac.confidence = parse_double(value, where);
  else if (key == "ransac_iterations") config.ransac.max_iterations = int(parse_int(value, where));
  else throw Error(Errc::parse_error, where + ": unknown key '" + key + "'");
}

SelectionConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path.string());

  SelectionConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::parse_error, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(Errc::parse_error, where + ": expected 'key = value'");
    apply_config_key(config, key, value, where);
  }

  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(Errc::parse_error, path.filename().string() + ": " + e.what());
  }
  return config;
}

ordered_json config_to_json(const SelectionConfig& c) {
  ordered_json j;
  j["t_flow"] = c.t_flow;
  j["t_baseline"] = c.t_baseline;
  j["alpha"] = c.alpha;
  j["t_angle"] = c.t_angle;
  j["strategy"] = strategy_name(c.strategy);
  j["seed"] = c.rng_seed;
  j["stride"] = c.frame_stride;
  j["beta_normalized"] = c.beta_normalized;
  j["beta_use_inliers"] = c.beta_use_inliers;
  j["max_keypoints"] = c.features.max_count;
  j["fast_threshold"] = c.features.fast_threshold;
  j["match_max_distance"] = c.features.match_max_distance;
  j["cross_check"] = c.features.cross_check;
  j["flow_window_radius"] = c.flow.window_radius;
  j["flow_levels"] = c.flow.pyramid_levels;
  j["flow_iterations"] = c.flow.max_iterations;
  j["flow_epsilon"] = c.flow.epsilon;
  j["flow_min_tracked"] = c.flow.min_tracked;
  j["ransac_threshold"] = c.ransac.inlier_threshold;
  j["ransac_confidence"] = c.ransac.confidence;
  j["ransac_iterations"] = c.ransac.max_iterations;
  return j;
}

ordered_json pair_stats_to_json(const PairStats& s) {
  ordered_json j;
  j["i"] = s.i;
  j["j"] = s.j;
  j["F"] = s.flow_mean ? ordered_json(*s.flow_mean) : ordered_json(nullptr);
  j["beta"] = s.beta ? ordered_json(*s.beta) : ordered_json(nullptr);
  j["theta"] = s.theta ? ordered_json(*s.theta) : ordered_json(nullptr);
  j["matches"] = s.match_count;
  j["score"] = s.score ? ordered_json(*s.score) : ordered_json(nullptr);
  j["feasible"] = s.feasible;
  j["reason"] = rejection_reason_name(s.reason);
  return j;
}

ordered_json selection_result_to_json(const SelectionResult& result,
                                      const SelectionConfig& config) {
  ordered_json j;
  j["version"] = kVersion;
  j["strategy"] = strategy_name(result.strategy);
  if (result.chosen)
    j["chosen"] = ordered_json::array({result.chosen->first, result.chosen->second});
  else
    j["chosen"] = nullptr;
  j["config"] = config_to_json(config);
  j["pairs"] = ordered_json::array();
  for (const PairStats& s : result.stats) j["pairs"].push_back(pair_stats_to_json(s));
  return j;
}

} // namespace pipeframe
