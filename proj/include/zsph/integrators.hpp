#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "zsph/dynamics.hpp"
#include "zsph/rng.hpp"

namespace zsph {

struct FixedPointSettings {
  double tolerance = 1e-13;  // relative Frobenius change between iterates
  int max_iterations = 100;
};

/// Truncated standard normals for one step, one per noise mode.
struct NoiseDraw {
  std::vector<double> zetas;
  double bound = 0.0;
};

/// A = sqrt(2 l |log h|).
double truncation_bound(double h, int truncation_l = 2);

NoiseDraw sample_noise_draw(double h, const NoiseScaling& scaling, int truncation_l, CounterRng& rng);

struct EulerModel {};
struct NavierStokesModel {
  double nu = 0.0;
};
struct NideModel {
  NideSpec spec;
};
struct StochasticModel {
  NoiseScaling scaling;
};
using ModelVariant = std::variant<EulerModel, NavierStokesModel, NideModel, StochasticModel>;

struct ModelSpec {
  ModelVariant variant;
  double h = 0.01;
  /// RK4 updates per NIDE half-step; 0 derives the count from a stability estimate.
  int dissipative_substeps = 0;
  /// Test hook: false drops the Hamiltonian bracket from the midpoint step.
  bool transport = true;

  bool is_stochastic() const { return std::holds_alternative<StochasticModel>(variant); }
};

struct StepStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Advances one trajectory. Holds the precomputed noise fields and NIDE
/// operator for its model; immutable after construction and safe to share.
class Stepper {
 public:
  Stepper(Discretization disc, ModelSpec model, FixedPointSettings settings = {});

  const ModelSpec& model() const { return model_; }
  const Discretization& discretization() const { return disc_; }
  const std::vector<NoiseMode>& noise_modes() const { return noise_modes_; }

  /// Isospectral midpoint step for the Lie-Poisson part. `draw` must be
  /// present exactly when the model is stochastic.
  Matrix midpoint_step(const Matrix& w, const NoiseDraw* draw, StepStats* stats = nullptr) const;
  /// Exact viscous decay (Navier-Stokes) or one classical RK4 update of the NIDE flow.
  Matrix dissipative_substep(const Matrix& w, double h_sub) const;
  /// Strang composition for dissipative models, a bare midpoint step otherwise.
  Matrix step(const Matrix& w, const NoiseDraw* draw, StepStats* stats = nullptr) const;

  /// Sum of alpha_k zeta_k X_k, the noise stream field of one step (before scaling).
  Matrix noise_field(const NoiseDraw& draw) const;
  int substeps_for(const Matrix& w) const;

 private:
  Discretization disc_;
  ModelSpec model_;
  FixedPointSettings settings_;
  std::vector<NoiseMode> noise_modes_;
  std::optional<NideOperator> nide_;
  int nide_substeps_ = 1;
};

Matrix isospectral_midpoint_step(const Matrix& w, const ModelSpec& model, const NoiseDraw* draw,
                                 const FixedPointSettings& settings, const Discretization& disc);
Matrix dissipative_substep(const Matrix& w, const ModelSpec& model, double h_sub, const Discretization& disc);
Matrix composite_step(const Matrix& w, const ModelSpec& model, const NoiseDraw* draw,
                      const FixedPointSettings& settings, const Discretization& disc);

}  // namespace zsph
