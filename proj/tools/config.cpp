#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace rootscat::cli {

namespace {

template <class T>
T read(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed) {
  if (!n.IsMap()) throw ConfigError("config: '" + where + "' must be a mapping");
  for (const auto& kv : n) {
    auto k = kv.first.as<std::string>();
    if (!allowed.count(k)) throw ConfigError("config: unknown key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

// "A2", "BC1", ...
void parse_label(const std::string& s, RunConfig& cfg) {
  std::size_t i = 0;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || i == s.size()) throw ConfigError("config: bad root system label '" + s + "'");
  cfg.family = s.substr(0, i);
  try {
    std::size_t used = 0;
    cfg.rank = std::stoi(s.substr(i), &used);
    if (used != s.size() - i) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ConfigError("config: bad root system label '" + s + "'");
  }
}

}  // namespace

RootSystem RunConfig::root_system() const { return RootSystem::build(family, rank); }

ModelParams RunConfig::params() const {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0, 1)");
  double s = -std::log(q);
  if (kind == "unit") return ModelParams::unit();
  if (kind == "macdonald") return ModelParams::macdonald(g, g_long.value_or(g), s);
  if (kind == "koornwinder") {
    if (ghat4.size() != 4) throw std::invalid_argument("ghat4 needs four entries");
    return ModelParams::koornwinder(ghat, {ghat4[0], ghat4[1], ghat4[2], ghat4[3]}, s);
  }
  throw std::invalid_argument("unknown parameter kind '" + kind + "'");
}

IVec RunConfig::pi_or_default(const RootSystem& rs) const {
  if (pi.empty()) return rs.fundamental_weight(1);
  if (static_cast<int>(pi.size()) != rs.rank()) throw std::invalid_argument("pi has the wrong rank");
  return pi;
}

WavePacketSpec RunConfig::packet() const {
  WavePacketSpec s;
  s.center = center;
  if (s.center.empty()) {
    if (rank != 1) throw std::invalid_argument("packet.center is required in rank > 1");
    s.center = {std::numbers::pi / 2};
  }
  s.radius = radius;
  s.smoothness = smoothness;
  s.window_margin = window_margin;
  s.max_window_margin = max_window_margin;
  s.leak_tol = tol.at("leakage");
  return s;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (root.IsNull()) return cfg;
  check_keys(root, "", {"system", "params", "weights", "operator", "grid", "packet", "evolution", "tolerances", "workers"});

  if (auto n = root["system"]) {
    if (n.IsScalar()) {
      parse_label(read<std::string>(n, "system"), cfg);
    } else {
      check_keys(n, "system", {"family", "rank"});
      if (n["family"]) cfg.family = read<std::string>(n["family"], "system.family");
      if (n["rank"]) cfg.rank = read<int>(n["rank"], "system.rank");
    }
  }
  if (auto n = root["params"]) {
    check_keys(n, "params", {"kind", "q", "s", "g", "g_long", "ghat", "ghat4"});
    if (n["q"] && n["s"]) throw ConfigError("config: give only one of params.q and params.s");
    if (n["kind"]) cfg.kind = read<std::string>(n["kind"], "params.kind");
    if (n["q"]) cfg.q = read<double>(n["q"], "params.q");
    if (n["s"]) cfg.q = std::exp(-read<double>(n["s"], "params.s"));
    if (n["g"]) cfg.g = read<double>(n["g"], "params.g");
    if (n["g_long"]) cfg.g_long = read<double>(n["g_long"], "params.g_long");
    if (n["ghat"]) cfg.ghat = read<double>(n["ghat"], "params.ghat");
    if (n["ghat4"]) cfg.ghat4 = read<std::vector<double>>(n["ghat4"], "params.ghat4");
  }
  if (auto n = root["weights"]) {
    check_keys(n, "weights", {"height", "ray", "ray_length", "samples", "seed"});
    if (n["height"]) cfg.height = read<int>(n["height"], "weights.height");
    if (n["ray"]) cfg.ray = read<IVec>(n["ray"], "weights.ray");
    if (n["ray_length"]) cfg.ray_length = read<int>(n["ray_length"], "weights.ray_length");
    if (n["samples"]) cfg.samples = read<int>(n["samples"], "weights.samples");
    if (n["seed"]) cfg.seed = read<unsigned>(n["seed"], "weights.seed");
  }
  if (auto n = root["operator"]) {
    check_keys(n, "operator", {"pi"});
    if (n["pi"]) cfg.pi = read<IVec>(n["pi"], "operator.pi");
  }
  if (auto n = root["grid"]) {
    check_keys(n, "grid", {"M", "M_max"});
    if (n["M"]) cfg.grid = read<int>(n["M"], "grid.M");
    if (n["M_max"]) cfg.grid_max = read<int>(n["M_max"], "grid.M_max");
  }
  if (auto n = root["packet"]) {
    check_keys(n, "packet", {"center", "radius", "smoothness", "window_margin", "max_window_margin"});
    if (n["center"]) cfg.center = read<std::vector<double>>(n["center"], "packet.center");
    if (n["radius"]) cfg.radius = read<double>(n["radius"], "packet.radius");
    if (n["smoothness"]) cfg.smoothness = read<int>(n["smoothness"], "packet.smoothness");
    if (n["window_margin"]) cfg.window_margin = read<int>(n["window_margin"], "packet.window_margin");
    if (n["max_window_margin"])
      cfg.max_window_margin = read<int>(n["max_window_margin"], "packet.max_window_margin");
  }
  if (auto n = root["evolution"]) {
    check_keys(n, "evolution", {"ladder", "signs"});
    if (n["ladder"]) cfg.ladder = read<std::vector<double>>(n["ladder"], "evolution.ladder");
    if (n["signs"]) cfg.signs = read<std::vector<int>>(n["signs"], "evolution.signs");
    for (int s : cfg.signs)
      if (s != 1 && s != -1) throw ConfigError("config: evolution.signs entries must be 1 or -1");
  }
  if (auto n = root["tolerances"]) {
    if (!n.IsMap()) throw ConfigError("config: 'tolerances' must be a mapping");
    for (const auto& kv : n) {
      auto k = kv.first.as<std::string>();
      if (!cfg.tol.count(k)) throw ConfigError("config: unknown key 'tolerances." + k + "'");
      cfg.tol[k] = read<double>(kv.second, "tolerances." + k);
    }
  }
  if (auto n = root["workers"]) cfg.workers = read<int>(n, "workers");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_tolerance(RunConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got '" + assignment + "'");
  auto name = assignment.substr(0, eq);
  if (!cfg.tol.count(name)) throw ConfigError("--tol: unknown tolerance '" + name + "'");
  try {
    std::size_t used = 0;
    auto v = assignment.substr(eq + 1);
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    cfg.tol[name] = x;
  } catch (const std::exception&) {
    throw ConfigError("--tol: bad number in '" + assignment + "'");
  }
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["system"] = {{"family", cfg.family}, {"rank", cfg.rank}};
  j["params"] = {{"kind", cfg.kind}, {"q", cfg.q},         {"g", cfg.g},
                 {"g_long", cfg.g_long.value_or(cfg.g)}, {"ghat", cfg.ghat}, {"ghat4", cfg.ghat4}};
  j["weights"] = {{"height", cfg.height}, {"ray", cfg.ray}, {"ray_length", cfg.ray_length},
                  {"samples", cfg.samples}, {"seed", cfg.seed}};
  j["operator"] = {{"pi", cfg.pi}};
  j["grid"] = {{"M", cfg.grid}, {"M_max", cfg.grid_max}};
  j["packet"] = {{"center", cfg.center}, {"radius", cfg.radius}, {"smoothness", cfg.smoothness},
                 {"window_margin", cfg.window_margin}, {"max_window_margin", cfg.max_window_margin}};
  j["evolution"] = {{"ladder", cfg.ladder}, {"signs", cfg.signs}};
  nlohmann::ordered_json t;
  for (const auto& [k, v] : cfg.tol) t[k] = v;
  j["tolerances"] = t;
  j["workers"] = cfg.workers;
  return j;
}

}  // namespace rootscat::cli
