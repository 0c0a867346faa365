#include "chroma_sr/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError({key}, "cannot parse value '" + value + "' for '" + key + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError({key}, "cannot parse boolean '" + value + "' for '" + key + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter number(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_number<T>(k, v);
  };
}

Setter boolean(bool RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_bool(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scale_factor", number(&RunConfig::scale_factor)},
      {"patch_side", number(&RunConfig::patch_side)},
      {"search_window", number(&RunConfig::search_window)},
      {"group_size", number(&RunConfig::group_size)},
      {"pyramid_ratio", number(&RunConfig::pyramid_ratio)},
      {"pyramid_levels", number(&RunConfig::pyramid_levels)},
      {"per_scale_matches", number(&RunConfig::per_scale_matches)},
      {"rho0", number(&RunConfig::rho0)},
      {"eta", number(&RunConfig::eta)},
      {"alpha", number(&RunConfig::alpha)},
      {"max_admm_iters", number(&RunConfig::max_admm_iters)},
      {"admm_tol", number(&RunConfig::admm_tol)},
      {"nuclear_scale", number(&RunConfig::nuclear_scale)},
      {"beta", number(&RunConfig::beta)},
      {"beta_scale", number(&RunConfig::beta_scale)},
      {"beta_cap", number(&RunConfig::beta_cap)},
      {"outer_passes", number(&RunConfig::outer_passes)},
      {"target_stride", number(&RunConfig::target_stride)},
      {"seed", number(&RunConfig::seed)},
      {"shave", number(&RunConfig::shave)},
      {"workers", number(&RunConfig::workers)},
      {"uniform_lambda", boolean(&RunConfig::uniform_lambda)},
      {"strict", boolean(&RunConfig::strict)},
  };
  return table;
}

}  // namespace

void validate(const RunConfig& cfg) {
  std::vector<std::string> bad;
  auto check = [&bad](bool ok, const char* name) {
    if (!ok) bad.emplace_back(name);
  };
  check(cfg.scale_factor >= 2, "scale_factor");
  check(cfg.patch_side >= 1, "patch_side");
  check(cfg.search_window >= 1 && cfg.search_window % 2 == 1, "search_window");
  check(cfg.group_size >= 1, "group_size");
  check(cfg.pyramid_ratio > 0.0 && cfg.pyramid_ratio < 1.0, "pyramid_ratio");
  check(cfg.pyramid_levels >= 0, "pyramid_levels");
  check(cfg.per_scale_matches >= 1, "per_scale_matches");
  check(cfg.rho0 > 0.0, "rho0");
  check(cfg.eta > 1.0, "eta");
  check(cfg.alpha >= 0.0, "alpha");
  check(cfg.max_admm_iters >= 1, "max_admm_iters");
  check(cfg.admm_tol > 0.0, "admm_tol");
  check(cfg.nuclear_scale >= 0.0, "nuclear_scale");
  check(cfg.beta_scale >= 0.0, "beta_scale");
  check(cfg.beta_cap >= 0.0, "beta_cap");
  check(cfg.outer_passes >= 1, "outer_passes");
  check(cfg.target_stride >= 1, "target_stride");
  check(cfg.shave >= 0, "shave");
  check(cfg.workers >= 0, "workers");
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& f : bad) msg += " " + f;
    throw ConfigError(bad, msg);
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError({}, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError({key}, "unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"scale_factor", cfg.scale_factor},
          {"patch_side", cfg.patch_side},
          {"search_window", cfg.search_window},
          {"group_size", cfg.group_size},
          {"pyramid_ratio", cfg.pyramid_ratio},
          {"pyramid_levels", cfg.pyramid_levels},
          {"per_scale_matches", cfg.per_scale_matches},
          {"rho0", cfg.rho0},
          {"eta", cfg.eta},
          {"alpha", cfg.alpha},
          {"max_admm_iters", cfg.max_admm_iters},
          {"admm_tol", cfg.admm_tol},
          {"nuclear_scale", cfg.nuclear_scale},
          {"beta", cfg.beta},
          {"beta_scale", cfg.beta_scale},
          {"beta_cap", cfg.beta_cap},
          {"outer_passes", cfg.outer_passes},
          {"target_stride", cfg.target_stride},
          {"seed", cfg.seed},
          {"shave", cfg.shave},
          {"workers", cfg.workers},
          {"uniform_lambda", cfg.uniform_lambda},
          {"strict", cfg.strict}};
}

}  // namespace chroma_sr
