#pragma once
// Run configuration for the command-line front end.

#include "rootscat/evolution.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootscat::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string family = "A";
  int rank = 2;

  // unit, macdonald or koornwinder; q = e^{-s}
  std::string kind = "macdonald";
  double q = 0.5;
  double g = 1.5;
  std::optional<double> g_long;  // unset: same as g
  double ghat = 1.0;
  std::vector<double> ghat4{1, 1, 1, 1};

  int height = 4;            // weights of height <= height; negative gives an empty set
  IVec ray;                  // empty: rho
  int ray_length = 8;
  IVec pi;                   // empty: omega_1
  int samples = 20;
  unsigned seed = 1;
  int grid = 256;
  int grid_max = 1024;

  std::vector<double> center;  // empty: pi/2 in rank one, required otherwise
  double radius = 1.4;
  int smoothness = 6;
  int window_margin = 10;
  int max_window_margin = 640;
  std::vector<double> ladder{4, 8, 16, 32};
  std::vector<int> signs{1, -1};

  std::map<std::string, double> tol{
      {"orthonormality", 1e-8}, {"norms", 1e-8},       {"specialization", 1e-10}, {"symmetry", 1e-9},
      {"identity", 1e-12},      {"difference", 1e-8},  {"pieri", 1e-8},           {"free_forms", 0.0},
      {"character", 1e-12},     {"fourier", 1e-7},     {"hermiticity", 1e-10},    {"commutator", 1e-8},      {"unitarity", 1e-13},
      {"leakage", 1e-6},
  };
  int workers = 1;

  RootSystem root_system() const;
  ModelParams params() const;  // not yet validated against the system
  IVec pi_or_default(const RootSystem& rs) const;
  WavePacketSpec packet() const;
};

// YAML (or JSON) text; throws ConfigError on syntax errors, unknown keys or
// mistyped values
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// "name=value"; throws ConfigError for an unknown name or a bad number
void apply_tolerance(RunConfig& cfg, const std::string& assignment);
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace rootscat::cli
