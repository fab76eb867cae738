#include "zsph/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <thread>

#include "zsph/fields.hpp"

namespace zsph {

long RunConfig::step_count() const {
  const double ratio = t_end / model.h;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-8 * std::max(1.0, ratio)) {
    throw Error(ErrorKind::config, "t_end must be a positive integer multiple of the step size");
  }
  return steps;
}

void RunConfig::validate() const {
  if (!(t_end > 0.0)) throw Error(ErrorKind::config, "t_end must be positive");
  if (!(model.h > 0.0)) throw Error(ErrorKind::invalid_step, "step size must be positive");
  if (sample_every < 1) throw Error(ErrorKind::config, "sample_every must be >= 1");
  if (realizations < 1) throw Error(ErrorKind::config, "realizations must be >= 1");
  if (workers < 1) throw Error(ErrorKind::config, "workers must be >= 1");
  if (!model.is_stochastic() && realizations != 1) {
    throw Error(ErrorKind::config, "deterministic models take exactly one realization");
  }
  if (ic.l_max >= n) throw Error(ErrorKind::truncation_overflow, "initial-condition degree must be below N");
  step_count();
}

Matrix initial_state(const InitialCondition& ic, const Discretization& disc) {
  return project(random_initial_condition(ic.seed, ic.l_max), *disc.basis);
}

TimeSeries run_trajectory(const RunConfig& config, const Stepper& stepper, int realization) {
  config.validate();
  const Discretization& disc = stepper.discretization();
  if (disc.n() != config.n) throw Error(ErrorKind::resolution_mismatch, "stepper resolution differs from config");

  const long steps = config.step_count();
  const double h = config.h();
  const auto& fact = *disc.laplace;
  const bool stochastic = config.model.is_stochastic();

  TimeSeries series;
  series.realization = realization;
  Matrix w = initial_state(config.ic, disc);
  const Eigen::VectorXd ref = spectrum(w);
  series.samples.push_back(sample_diagnostics(0.0, w, fact, ref));
  if (config.observer) config.observer(realization, 0, 0.0, w);

  const std::uint64_t stream =
      config.noise_hook == NoiseHook::same_for_all_realizations ? 0 : static_cast<std::uint64_t>(realization);
  NoiseDraw draw;
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const NoiseDraw* draw_ptr = nullptr;
    if (stochastic) {
      CounterRng rng(config.seed, stream, static_cast<std::uint64_t>(k));
      draw = sample_noise_draw(h, std::get<StochasticModel>(config.model.variant).scaling, config.truncation_l, rng);
      if (config.noise_hook == NoiseHook::zero) std::fill(draw.zetas.begin(), draw.zetas.end(), 0.0);
      draw_ptr = &draw;
    }
    try {
      w = stepper.step(w, draw_ptr);
    } catch (const StepFailure& e) {
      series.failure = TrajectoryFailure{t, e.residual(), e.what()};
      return series;
    }
    if (config.observer) config.observer(realization, k, t, w);
    if (k % config.sample_every == 0 || k == steps) series.samples.push_back(sample_diagnostics(t, w, fact, ref));
  }
  return series;
}

TimeSeries run_trajectory(const RunConfig& config, const Discretization& disc, int realization) {
  return run_trajectory(config, Stepper(disc, config.model, config.fixed_point), realization);
}

EnsembleResult run_ensemble(const RunConfig& config, const Discretization& disc) {
  config.validate();
  const Stepper stepper(disc, config.model, config.fixed_point);
  EnsembleResult result;
  result.series.resize(static_cast<std::size_t>(config.realizations));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.realizations));
  auto worker = [&] {
    for (int r = next++; r < config.realizations; r = next++) {
      try {
        result.series[static_cast<std::size_t>(r)] = run_trajectory(config, stepper, r);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(config.workers, config.realizations);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  bool any_ok = false;
  for (const auto& s : result.series) any_ok = any_ok || !s.failure;
  if (!any_ok) throw Error(ErrorKind::ensemble, "every realization failed");
  result.summary = aggregate(result.series);
  return result;
}

EnsembleSummary aggregate(const std::vector<TimeSeries>& series) {
  EnsembleSummary out;
  std::vector<const TimeSeries*> ok;
  for (const auto& s : series) {
    if (s.failure) {
      out.failures.emplace_back(s.realization, *s.failure);
    } else {
      ok.push_back(&s);
    }
  }
  if (ok.empty()) throw Error(ErrorKind::aggregation, "no completed series to aggregate");

  const auto& grid = ok.front()->samples;
  for (const auto* s : ok) {
    if (s->samples.size() != grid.size()) throw Error(ErrorKind::aggregation, "series have different sample counts");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (s->samples[i].t != grid[i].t) throw Error(ErrorKind::aggregation, "series have different sample times");
    }
  }

  const double count = static_cast<double>(ok.size());
  out.n_realizations = static_cast<int>(ok.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // sums taken in realization order whatever order the input came in
    std::vector<const TimeSeries*> sorted = ok;
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->realization < b->realization; });
    double e_sum = 0.0, s_sum = 0.0;
    for (const auto* s : sorted) {
      e_sum += s->samples[i].energy;
      s_sum += s->samples[i].enstrophy;
    }
    const double e_mean = e_sum / count, s_mean = s_sum / count;
    double e_var = 0.0, s_var = 0.0;
    for (const auto* s : sorted) {
      e_var += (s->samples[i].energy - e_mean) * (s->samples[i].energy - e_mean);
      s_var += (s->samples[i].enstrophy - s_mean) * (s->samples[i].enstrophy - s_mean);
    }
    out.t.push_back(grid[i].t);
    out.energy_mean.push_back(e_mean);
    out.energy_std.push_back(std::sqrt(e_var / count));
    out.enstrophy_mean.push_back(s_mean);
    out.enstrophy_std.push_back(std::sqrt(s_var / count));
  }
  return out;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

std::unique_ptr<std::FILE, FileCloser> open_for_write(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw Error(ErrorKind::io, "cannot open " + path.string());
  return f;
}

}  // namespace

void write_time_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  auto f = open_for_write(path);
  std::fputs("t,energy,enstrophy,casimir2,casimir3,casimir4,spectrum_drift\n", f.get());
  for (const auto& s : series.samples) {
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.energy, s.enstrophy, s.casimirs.at(0),
                 s.casimirs.at(1), s.casimirs.at(2), s.spectrum_drift);
  }
}

void write_summary_csv(const std::filesystem::path& path, const EnsembleSummary& summary) {
  auto f = open_for_write(path);
  std::fputs("t,energy_mean,energy_std,enstrophy_mean,enstrophy_std,n_realizations\n", f.get());
  for (std::size_t i = 0; i < summary.t.size(); ++i) {
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", summary.t[i], summary.energy_mean[i],
                 summary.energy_std[i], summary.enstrophy_mean[i], summary.enstrophy_std[i], summary.n_realizations);
  }
}

}  // namespace zsph
