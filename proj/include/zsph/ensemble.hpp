#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zsph/diagnostics.hpp"
#include "zsph/integrators.hpp"

namespace zsph {

struct InitialCondition {
  std::uint64_t seed = 0;
  int l_max = 10;
};

/// Test hooks for the noise draws.
enum class NoiseHook {
  none,
  zero,                       // every zeta forced to 0
  same_for_all_realizations,  // every realization reuses the draws of realization 0
};

struct RunConfig {
  int n = 32;
  ModelSpec model;
  double t_end = 1.0;
  int sample_every = 1;
  std::uint64_t seed = 0;
  int realizations = 1;
  InitialCondition ic;
  int truncation_l = 2;
  int workers = 1;
  FixedPointSettings fixed_point;
  NoiseHook noise_hook = NoiseHook::none;
  /// Called after every step (and once at t = 0) with the step index, time and state.
  std::function<void(int realization, long step, double t, const Matrix& w)> observer;

  double h() const { return model.h; }
  long step_count() const;
  void validate() const;
};

struct TrajectoryFailure {
  double t = 0.0;
  double residual = 0.0;
  std::string message;
};

struct TimeSeries {
  int realization = 0;
  std::vector<DiagnosticsSample> samples;
  std::optional<TrajectoryFailure> failure;
};

struct EnsembleSummary {
  std::vector<double> t;
  std::vector<double> energy_mean, energy_std;
  std::vector<double> enstrophy_mean, enstrophy_std;
  int n_realizations = 0;
  std::vector<std::pair<int, TrajectoryFailure>> failures;
};

struct EnsembleResult {
  std::vector<TimeSeries> series;
  EnsembleSummary summary;
};

/// The common initial vorticity matrix of every run sharing `ic`.
Matrix initial_state(const InitialCondition& ic, const Discretization& disc);

TimeSeries run_trajectory(const RunConfig& config, const Stepper& stepper, int realization);
TimeSeries run_trajectory(const RunConfig& config, const Discretization& disc, int realization);

/// Runs every realization on up to `config.workers` threads. The outcome does
/// not depend on the worker count.
EnsembleResult run_ensemble(const RunConfig& config, const Discretization& disc);

/// Pointwise mean and population standard deviation. Failed series are
/// skipped and listed in `failures`.
EnsembleSummary aggregate(const std::vector<TimeSeries>& series);

void write_time_series_csv(const std::filesystem::path& path, const TimeSeries& series);
void write_summary_csv(const std::filesystem::path& path, const EnsembleSummary& summary);

}  // namespace zsph
