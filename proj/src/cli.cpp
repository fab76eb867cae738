#include "zsph/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "zsph/ensemble.hpp"
#include "zsph/fields.hpp"

namespace zsph {

namespace fs = std::filesystem;

namespace {

struct Options {
  int n = 32;
  double dt = 0.01;
  double t_end = 1.0;
  std::string model = "euler";
  double a = 1.0;
  int m_max = 8;
  double nu = 1e-4;
  double nu_salt = 0.5;
  std::string nide_mode = "power-law";
  std::uint64_t seed = 0;
  std::uint64_t ic_seed = 0;
  int ic_lmax = 10;
  int realizations = 1;
  int workers = 1;
  int sample_every = 1;
  std::string out = ".";
  std::string cache_dir;
  int snapshots_every = 0;
  std::string preset;
  std::string state;
  int nlat = 0;
  int nlon = 0;
};

// Effective settings echoed into run_meta.
std::vector<std::pair<std::string, std::string>> describe(const std::string& command, const Options& o) {
  auto str = [](auto v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  return {{"subcommand", command},
          {"n", str(o.n)},
          {"dt", str(o.dt)},
          {"t-end", str(o.t_end)},
          {"model", o.model},
          {"a", str(o.a)},
          {"m-max", str(o.m_max)},
          {"nu", str(o.nu)},
          {"nu-salt", str(o.nu_salt)},
          {"nide-mode", o.nide_mode},
          {"seed", str(o.seed)},
          {"ic-seed", str(o.ic_seed)},
          {"ic-lmax", str(o.ic_lmax)},
          {"realizations", str(o.realizations)},
          {"workers", str(o.workers)},
          {"sample-every", str(o.sample_every)},
          {"cache-dir", o.cache_dir},
          {"snapshots-every", str(o.snapshots_every)},
          {"preset", o.preset}};
}

void write_run_meta(const fs::path& dir, const std::string& command, const Options& o,
                    const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  std::ofstream out(dir / "run_meta");
  if (!out) throw Error(ErrorKind::io, "cannot write run_meta in " + dir.string());
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "created = " << stamp << '\n';
  for (const auto& [k, v] : describe(command, o)) out << k << " = " << v << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
}

fs::path ensure_dir(const std::string& path) {
  fs::path p(path);
  fs::create_directories(p);
  return p;
}

Discretization load_discretization(const Options& o) {
  if (o.cache_dir.empty()) return Discretization::build(o.n);
  const fs::path dir(o.cache_dir);
  if (!fs::is_directory(dir)) throw Error(ErrorKind::io, "cache directory does not exist: " + dir.string());
  const fs::path file = cache_file_name(dir, o.n);
  if (fs::exists(file)) return Discretization::from_basis(read_cache(file, o.n));
  BasisCache basis = build_basis(Resolution(o.n));
  write_cache(basis, file);
  return Discretization::from_basis(std::move(basis));
}

ModelSpec make_model(const Options& o, const std::string& model) {
  ModelSpec spec;
  spec.h = o.dt;
  if (model == "euler") {
    spec.variant = EulerModel{};
  } else if (model == "ns") {
    spec.variant = NavierStokesModel{o.nu};
  } else if (model == "nide") {
    if (o.nide_mode == "avm") {
      spec.variant = NideModel{AvmNide{}};
    } else {
      spec.variant = NideModel{PowerLawNide{build_noise_scaling(o.a, o.m_max, o.nu_salt, o.n)}};
    }
  } else {
    spec.variant = StochasticModel{build_noise_scaling(o.a, o.m_max, o.nu_salt, o.n)};
  }
  return spec;
}

RunConfig make_config(const Options& o, const std::string& model) {
  RunConfig c;
  c.n = o.n;
  c.model = make_model(o, model);
  c.t_end = o.t_end;
  c.sample_every = o.sample_every;
  c.seed = o.seed;
  c.realizations = c.model.is_stochastic() ? o.realizations : 1;
  c.ic = {o.ic_seed, o.ic_lmax};
  c.workers = o.workers;
  return c;
}

void write_snapshot(const fs::path& path, const Matrix& w, const Discretization& disc, double t, int nlat, int nlon) {
  HarmonicCoefficients c = extract(w, *disc.basis);
  write_grid_file(path, synthesize_grid(c, nlat, nlon).field, t);
}

int grid_lat(const Options& o) { return o.nlat > 0 ? o.nlat : 2 * o.n; }
int grid_lon(const Options& o) { return o.nlon > 0 ? o.nlon : 4 * o.n; }

int cmd_basis(const Options& o) {
  if (o.cache_dir.empty()) throw Error(ErrorKind::config, "basis needs --cache-dir or ZSPH_CACHE_DIR");
  const fs::path dir = ensure_dir(o.cache_dir);
  const fs::path file = cache_file_name(dir, o.n);
  write_cache(build_basis(Resolution(o.n)), file);
  read_cache(file, o.n);
  std::cout << file.string() << '\n';
  return 0;
}

int cmd_simulate(const Options& o) {
  const fs::path out = ensure_dir(o.out);
  const Discretization disc = load_discretization(o);
  RunConfig config = make_config(o, o.model);
  config.realizations = 1;
  config.workers = 1;

  Matrix final_state;
  const long steps = config.step_count();
  config.observer = [&](int, long step, double t, const Matrix& w) {
    if (o.snapshots_every > 0 && (step % o.snapshots_every == 0 || step == steps)) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%08ld.zgrd", step);
      write_snapshot(out / name, w, disc, t, grid_lat(o), grid_lon(o));
    }
    final_state = w;
  };
  const TimeSeries series = run_trajectory(config, disc, 0);
  write_time_series_csv(out / "timeseries.csv", series);
  write_coefficients(out / "final_state.csv", extract(final_state, *disc.basis));

  std::vector<std::pair<std::string, std::string>> extra;
  if (series.failure) {
    extra.emplace_back("failure_time", std::to_string(series.failure->t));
    extra.emplace_back("failure_residual", std::to_string(series.failure->residual));
  }
  write_run_meta(out, "simulate", o, extra);
  if (series.failure) {
    std::cerr << "error: step-failure at t = " << series.failure->t << ": " << series.failure->message << '\n';
    return 1;
  }
  return 0;
}

struct ManifestRow {
  std::string label, model;
  double a;
  int m_max;
  std::string file;
};

ManifestRow run_ensemble_into(const Options& o, const std::string& model, const fs::path& out, const Discretization& disc,
                              const std::string& label) {
  fs::create_directories(out);
  const RunConfig config = make_config(o, model);
  const EnsembleResult result = run_ensemble(config, disc);
  for (const auto& s : result.series) {
    char name[64];
    std::snprintf(name, sizeof name, "realization_%04d.csv", s.realization);
    if (!s.failure) write_time_series_csv(out / name, s);
  }
  write_summary_csv(out / "summary.csv", result.summary);

  Options echoed = o;
  echoed.model = model;
  echoed.realizations = config.realizations;
  std::vector<std::pair<std::string, std::string>> extra{{"failures", std::to_string(result.summary.failures.size())}};
  for (const auto& [r, f] : result.summary.failures) {
    extra.emplace_back("failure_" + std::to_string(r), "t=" + std::to_string(f.t) + " residual=" + std::to_string(f.residual));
  }
  write_run_meta(out, "ensemble", echoed, extra);
  for (const auto& [r, f] : result.summary.failures) {
    std::cerr << "warning: realization " << r << " failed at t = " << f.t << ": " << f.message << '\n';
  }
  return {label, model, o.a, o.m_max, (out / "summary.csv").string()};
}

int cmd_ensemble(const Options& o) {
  const fs::path out = ensure_dir(o.out);
  const Discretization disc = load_discretization(o);
  if (o.preset.empty()) {
    run_ensemble_into(o, o.model, out, disc, o.model);
    return 0;
  }
  if (o.preset != "paper-fig2") throw Error(ErrorKind::config, "unknown preset " + o.preset);

  std::vector<ManifestRow> rows;
  Options base = o;
  rows.push_back(run_ensemble_into(base, "euler", out / "euler", disc, "euler"));
  rows.push_back(run_ensemble_into(base, "ns", out / "ns", disc, "ns"));
  for (double a : {1.0, 2.0}) {
    for (int div : {16, 8, 4, 2}) {
      Options v = o;
      v.a = a;
      v.m_max = std::max(1, o.n / div);
      if (v.m_max >= o.n) continue;
      const std::string tag = "a" + std::to_string(static_cast<int>(a)) + "_M" + std::to_string(v.m_max);
      rows.push_back(run_ensemble_into(v, "stochastic", out / ("stochastic_" + tag), disc, "stochastic " + tag));
      rows.push_back(run_ensemble_into(v, "nide", out / ("nide_" + tag), disc, "nide " + tag));
    }
  }
  std::ofstream manifest(out / "manifest.csv");
  manifest << "label,model,a,m_max,summary\n";
  for (const auto& r : rows) manifest << r.label << ',' << r.model << ',' << r.a << ',' << r.m_max << ',' << r.file << '\n';
  write_run_meta(out, "ensemble", o, {{"runs", std::to_string(rows.size())}});
  return 0;
}

int cmd_analyze(const Options& o) {
  const ScalingNorms norms = scaling_norms(o.a, o.m_max, o.nu_salt);
  const NoiseScaling scaling = build_noise_scaling(o.a, o.m_max, o.nu_salt, o.n);
  const Discretization disc = load_discretization(o);
  const Matrix w = initial_state({o.ic_seed, o.ic_lmax}, disc);

  const NideOperator power(PowerLawNide{scaling}, disc);
  const NideOperator avm(AvmNide{}, disc);
  const NideRates pr = nide_rates(w, power, *disc.laplace);
  const NideRates ar = nide_rates(w, avm, *disc.laplace);

  auto kv = [](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::cout << key << " = " << buf << '\n';
  };
  kv("a", o.a);
  kv("m_max", o.m_max);
  kv("nu_salt", o.nu_salt);
  kv("c_l2", norms.c_l2);
  kv("alpha_inf", norms.alpha_inf);
  std::cout << "regime = " << to_string(norms.regime) << '\n';
  double sum_alpha2 = 0.0;
  for (int l = 1; l <= scaling.max_degree; ++l) sum_alpha2 += (2.0 * l + 1.0) * scaling.alpha(l) * scaling.alpha(l);
  kv("sum_alpha2", sum_alpha2);
  kv("energy", energy(w, *disc.laplace));
  kv("enstrophy", enstrophy(w));
  kv("power_law.energy_rate", pr.energy_rate);
  kv("power_law.enstrophy_rate", pr.enstrophy_rate);
  kv("avm.energy_rate", ar.energy_rate);
  kv("avm.enstrophy_rate", ar.enstrophy_rate);
  kv("matched_nu", matched_viscosity(w, power, disc));
  return 0;
}

int cmd_synth(const Options& o) {
  if (o.state.empty()) throw Error(ErrorKind::config, "synth needs --state");
  const HarmonicCoefficients c = read_coefficients(o.state);
  const int nlat = o.nlat > 0 ? o.nlat : std::max(16, 4 * c.max_degree());
  const int nlon = o.nlon > 0 ? o.nlon : 2 * nlat;
  const Synthesis s = synthesize_grid(c, nlat, nlon);
  fs::path target(o.out);
  if (fs::is_directory(target)) target /= fs::path(o.state).stem().string() + ".zgrd";
  write_grid_file(target, s.field, 0.0);
  std::cout << target.string() << '\n';
  return 0;
}

void validate(const Options& o, const std::string& command) {
  if (command == "synth" || command == "basis") return;
  if (o.m_max >= o.n && (o.model == "stochastic" || o.model == "nide" || command == "analyze")) {
    throw Error(ErrorKind::truncation_overflow, "--m-max must be below --n");
  }
  if (o.ic_lmax >= o.n) throw Error(ErrorKind::truncation_overflow, "--ic-lmax must be below --n");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Structure-preserving 2D flow on the sphere"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");

  Options o;
  if (const char* env = std::getenv("ZSPH_CACHE_DIR")) o.cache_dir = env;

  app.add_option("--n", o.n, "matrix size N")->check(CLI::Range(2, 1 << 14));
  app.add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
  app.add_option("--t-end", o.t_end, "final time")->check(CLI::PositiveNumber);
  app.add_option("--model", o.model)->check(CLI::IsMember({"euler", "ns", "nide", "stochastic"}));
  app.add_option("--a", o.a, "noise spectrum exponent")->check(CLI::NonNegativeNumber);
  app.add_option("--m-max", o.m_max, "highest noise degree M")->check(CLI::PositiveNumber);
  app.add_option("--nu", o.nu, "Navier-Stokes viscosity")->check(CLI::NonNegativeNumber);
  app.add_option("--nu-salt", o.nu_salt, "total noise strength")->check(CLI::PositiveNumber);
  app.add_option("--nide-mode", o.nide_mode)->check(CLI::IsMember({"power-law", "avm"}));
  app.add_option("--seed", o.seed, "noise seed");
  app.add_option("--ic-seed", o.ic_seed, "initial-condition seed");
  app.add_option("--ic-lmax", o.ic_lmax, "initial-condition degree")->check(CLI::PositiveNumber);
  app.add_option("--realizations", o.realizations)->check(CLI::PositiveNumber);
  app.add_option("--workers", o.workers)->check(CLI::PositiveNumber);
  app.add_option("--sample-every", o.sample_every, "steps between samples")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory (synth: output file or directory)");
  app.add_option("--cache-dir", o.cache_dir, "basis cache directory (default $ZSPH_CACHE_DIR)");
  app.add_option("--snapshots-every", o.snapshots_every, "steps between grid snapshots, 0 = off")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--preset", o.preset)->check(CLI::IsMember({"paper-fig2"}));
  app.add_option("--state", o.state, "coefficient CSV for synth");
  app.add_option("--nlat", o.nlat, "grid latitudes")->check(CLI::Range(2, 1 << 16));
  app.add_option("--nlon", o.nlon, "grid longitudes")->check(CLI::Range(2, 1 << 16));

  auto* basis = app.add_subcommand("basis", "build and store the basis cache");
  auto* simulate = app.add_subcommand("simulate", "run one trajectory");
  auto* ensemble = app.add_subcommand("ensemble", "run an ensemble or a preset");
  auto* analyze = app.add_subcommand("analyze", "report noise norms and dissipation rates");
  auto* synth = app.add_subcommand("synth", "coefficient CSV to grid file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string command;
    for (auto* s : {basis, simulate, ensemble, analyze, synth}) {
      if (s->parsed()) command = s->get_name();
    }
    validate(o, command);
    if (command == "basis") return cmd_basis(o);
    if (command == "simulate") return cmd_simulate(o);
    if (command == "ensemble") return cmd_ensemble(o);
    if (command == "analyze") return cmd_analyze(o);
    return cmd_synth(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::config || e.kind() == ErrorKind::truncation_overflow ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zsph
