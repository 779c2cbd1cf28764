#pragma once

#include <string>
#include <vector>

#include "filmcascade/config.hpp"
#include "filmcascade/models.hpp"
#include "filmcascade/nssolver.hpp"
#include "filmcascade/report.hpp"

namespace filmcascade {

/// Initial surface of an experiment: the listed cosine modes plus, when
/// requested, random_modes modes with Gaussian amplitudes (scale
/// random_amplitude) and uniform phases drawn from the config seed. The
/// same Fourier amplitudes are used at every delta.
SurfaceField initial_surface(const ExperimentConfig& c, int nx);

struct LineFit {
  double slope = 0.0, intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  ///< 95% Student-t interval
  int points = 0;
  bool dropped_largest = false;
  bool valid = false;
};

/// Least squares on (x, y).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Slope of log(err) against log(delta); the largest delta is dropped when
/// its residual exceeds 3 sigma. Needs >= 4 positive points, else invalid.
LineFit fit_loglog(const std::vector<double>& deltas, const std::vector<double>& errors);

struct SweepRow {
  double delta = 0.0, epsilon = 0.0;
  double sup_Etilde2 = 0.0;
  double initial_E2 = 0.0, final_E2 = 0.0;
  double decay_rate = 0.0;      ///< -slope of log E2 after the transient
  double decay_per_delta = 0.0; ///< decay_rate / delta (the constant of e^{-C delta t})
  bool monotone = true;         ///< E2 non-increasing after the transient
  bool blew_up = false;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double uniformity_ratio = 1.0;  ///< max / min of sup E~2 over delta
  double decay_ratio = 1.0;       ///< max / min of decay_per_delta
  bool uniform_pass = false, decay_pass = false, monotone_pass = false;
};

SweepResult sweep_delta(const ExperimentConfig& c);

struct ComparisonRow {
  double delta = 0.0;
  double err_l2 = 0.0;   ///< sup over samples of |eta_A - eta_B|_0
  double err_inf = 0.0;  ///< sup over samples of max |eta_A - eta_B|
  bool blew_up = false;
  std::string message;
};

struct ComparisonResult {
  std::string a, b;
  std::vector<ComparisonRow> rows;
  LineFit fit;
  bool monotone = false;           ///< errors strictly decrease with delta
  double dt_refine_change = -1.0;  ///< max relative error change at dt/2
};

/// Surface trajectory of one run sampled at t_i = i T / samples.
std::vector<SurfaceField> model_samples(ModelKind kind, const ExperimentConfig& c, double delta);
std::vector<SurfaceField> ns_samples(const ExperimentConfig& c, double delta, double dt);

ComparisonResult compare_models(const ExperimentConfig& c);
/// model_a must be "ns"; model_b names the reduced model. With refine, the
/// NS runs are repeated at dt/2.
ComparisonResult compare_ns_model(const ExperimentConfig& c, bool refine = false);

Table sweep_table(const SweepResult& r);
Table comparison_table(const ComparisonResult& r);

}  // namespace filmcascade
