#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "filmcascade/params.hpp"

namespace filmcascade {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "[section]" headers, "key = value" lines, '#' or ';' comments. Keys
/// outside a section, duplicate keys and malformed lines are errors.
struct IniDocument {
  std::map<std::string, std::map<std::string, std::string>> sections;
};

IniDocument parse_ini(const std::string& text);

enum class EpsilonRule { Fixed, EqualsDelta };

struct ExperimentConfig {
  std::string kind = "simulate";
  std::string out_dir;
  std::uint64_t seed = 1;

  // [params]
  double delta = 0.1;
  std::vector<double> deltas;  ///< strictly decreasing; defaults to {delta}
  double epsilon = 0.1;
  EpsilonRule epsilon_rule = EpsilonRule::Fixed;
  double reynolds = 0.1;
  double weber = 0.1;
  double alpha = 0.3;

  // [resolution]
  int nx = 64;
  int ny = 48;
  double dt = 0.0;  ///< 0 selects the solver default

  // [run]
  double t_end = 1.0;
  bool slow_time = false;  ///< t_end is T and runs last T / epsilon
  int cadence = 10;        ///< steps between diagnostic rows
  int snapshots = 0;       ///< stored snapshots besides first and last
  int samples = 20;        ///< comparison sample times over the horizon

  // [initial]: cos modes with amplitudes, plus optional random modes
  std::vector<std::pair<int, double>> modes{{1, 0.01}};
  int random_modes = 0;
  double random_amplitude = 0.0;

  // [model] / [compare]
  std::string model = "kawahara";
  std::string model_a = "kawahara";
  std::string model_b = "kdvb";

  // [stability]
  double k = 2.0 * 3.14159265358979323846;
  std::vector<double> ks;
  double r_min = 0.0;
  double r_max = 0.0;  ///< 0: 2 R_c
  int os_ny = 48;

  // [energy]
  int m = 2;
  double beta1 = 1.0, beta2 = 1.0, beta3 = 1.0;
  std::string traj;

  // [audit]
  int trials = 100;
  std::vector<double> audit_deltas;

  // [gates]
  double uniformity_factor = 2.0;
  double decay_factor = 2.0;
  double slope_min = 1.5;
  double slope_max = 2.5;
  double korn_bound = 3.0 + 1e-6;
  double trace_spread = 0.2;
  double extension_bound = 10.0;
  double dt_refine_tol = 0.05;
  double transient = 0.2;  ///< fraction of the horizon treated as transient

  /// epsilon at a given delta under the configured rule.
  double epsilon_at(double d) const;
  ScalingParams params_at(double d) const;
  /// Run length in fast time (t_end / epsilon when slow_time).
  double horizon_at(double d) const;
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace filmcascade
