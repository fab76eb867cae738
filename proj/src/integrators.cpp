#include "zsph/integrators.hpp"

#include <algorithm>
#include <cmath>

namespace zsph {

namespace {
// Classical RK4 is stable on the negative real axis up to |z| ~ 2.785.
constexpr double kRk4StableReach = 2.5;
}  // namespace

double truncation_bound(double h, int truncation_l) {
  if (!(h > 0.0) || !(h < 1.0)) throw Error(ErrorKind::invalid_step, "truncated noise needs 0 < h < 1");
  if (truncation_l < 1) throw Error(ErrorKind::invalid_step, "truncation degree must be >= 1");
  return std::sqrt(2.0 * truncation_l * std::abs(std::log(h)));
}

NoiseDraw sample_noise_draw(double h, const NoiseScaling& scaling, int truncation_l, CounterRng& rng) {
  NoiseDraw draw;
  draw.bound = truncation_bound(h, truncation_l);
  draw.zetas.resize(static_cast<std::size_t>(scaling.mode_count()));
  for (auto& z : draw.zetas) z = std::clamp(rng.normal(), -draw.bound, draw.bound);
  return draw;
}

Stepper::Stepper(Discretization disc, ModelSpec model, FixedPointSettings settings)
    : disc_(std::move(disc)), model_(std::move(model)), settings_(settings) {
  if (!(model_.h > 0.0)) throw Error(ErrorKind::invalid_step, "step size must be positive");
  if (settings_.tolerance <= 0.0 || settings_.max_iterations < 1) {
    throw Error(ErrorKind::config, "invalid fixed-point settings");
  }
  if (const auto* s = std::get_if<StochasticModel>(&model_.variant)) {
    noise_modes_ = build_noise_modes(*disc_.basis, s->scaling);
  }
  if (const auto* ns = std::get_if<NavierStokesModel>(&model_.variant)) {
    if (ns->nu < 0.0) throw Error(ErrorKind::config, "viscosity must be non-negative");
  }
  if (const auto* nide = std::get_if<NideModel>(&model_.variant)) {
    nide_.emplace(nide->spec, disc_);
    if (model_.dissipative_substeps > 0) {
      nide_substeps_ = model_.dissipative_substeps;
    } else if (nide_->is_linear()) {
      const double rho = nide_->spectral_radius(Matrix::Zero(disc_.n(), disc_.n()));
      nide_substeps_ = std::max(1, static_cast<int>(std::ceil(0.5 * model_.h * rho * 1.05 / kRk4StableReach)));
    }
  }
}

int Stepper::substeps_for(const Matrix& w) const {
  if (!nide_) return 1;
  if (nide_->is_linear() || model_.dissipative_substeps > 0) return nide_substeps_;
  const double rho = nide_->spectral_radius(w);
  return std::max(1, static_cast<int>(std::ceil(0.5 * model_.h * rho / kRk4StableReach)));
}

Matrix Stepper::noise_field(const NoiseDraw& draw) const {
  if (draw.zetas.size() != noise_modes_.size()) {
    throw Error(ErrorKind::shape, "noise draw has " + std::to_string(draw.zetas.size()) + " entries, model needs " +
                                      std::to_string(noise_modes_.size()));
  }
  Matrix field = Matrix::Zero(disc_.n(), disc_.n());
  for (std::size_t k = 0; k < noise_modes_.size(); ++k) {
    const double weight = noise_modes_[k].alpha * draw.zetas[k];
    if (weight != 0.0) noise_modes_[k].field.add_to(field, weight);
  }
  return field;
}

Matrix Stepper::midpoint_step(const Matrix& w, const NoiseDraw* draw, StepStats* stats) const {
  const int n = disc_.n();
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::shape, "state size does not match resolution");
  if (model_.is_stochastic() != (draw != nullptr)) {
    throw Error(ErrorKind::config, "a noise draw is required exactly for the stochastic model");
  }
  const double h = model_.h;
  const double inv_hbar = 1.0 / disc_.hbar();

  // dW = -(1/hbar)[P, W] dt - (1/hbar) sum alpha [X, W] o dB, so the
  // midpoint generator carries a minus sign on both parts.
  Matrix frozen = Matrix::Zero(n, n);
  if (draw) frozen = -(std::sqrt(h) * inv_hbar) * noise_field(*draw);

  const Matrix identity = Matrix::Identity(n, n);
  // W = (I - G/2) W_mid (I + G/2) with (I + G/2) = (I - G/2)^dagger.
  auto solve_mid = [&](const Matrix& g) -> Matrix {
    Eigen::PartialPivLU<Matrix> lu(identity - 0.5 * g);
    const Matrix half = lu.solve(w);
    return lu.solve(half.adjoint()).adjoint();
  };

  Matrix generator = skew_part(frozen);
  Matrix w_mid = w;
  double residual = 0.0;
  int iteration = 0;
  bool converged = false;
  if (!model_.transport) {
    w_mid = solve_mid(generator);
    converged = true;
  }
  while (!converged && iteration < settings_.max_iterations) {
    ++iteration;
    // W_mid is congruent, not similar, to W, so it picks up an O(h^2) trace;
    // the identity commutes with everything and is dropped before the solve.
    Matrix traceless = w_mid;
    traceless.diagonal().array() -= w_mid.trace() / static_cast<double>(n);
    generator = skew_part(frozen - (h * inv_hbar) * solve_stream(traceless, *disc_.laplace));
    Matrix next = solve_mid(generator);
    if (!next.allFinite()) throw StepFailure("non-finite midpoint iterate", residual);
    const double scale = next.norm();
    residual = scale > 0.0 ? (next - w_mid).norm() / scale : 0.0;
    w_mid = std::move(next);
    converged = residual <= settings_.tolerance;
  }
  if (!converged) {
    throw StepFailure("fixed-point iteration did not converge in " + std::to_string(settings_.max_iterations) +
                          " iterations (residual " + std::to_string(residual) + ")",
                      residual);
  }
  if (stats) *stats = {iteration, residual};

  const Matrix upper = identity + 0.5 * generator;
  return skew_part(upper * w_mid * upper.adjoint());
}

Matrix Stepper::dissipative_substep(const Matrix& w, double h_sub) const {
  if (h_sub == 0.0) return w;
  if (const auto* ns = std::get_if<NavierStokesModel>(&model_.variant)) {
    HarmonicCoefficients c = extract(w, *disc_.basis);
    c.at(0, 0) = 0.0;
    for (int l = 1; l <= c.max_degree(); ++l) {
      const double factor = std::exp(-ns->nu * l * (l + 1.0) * h_sub);
      for (int m = -l; m <= l; ++m) c.at(l, m) *= factor;
    }
    return skew_part(project(c, *disc_.basis));
  }
  if (nide_) {
    const Matrix k1 = nide_->apply(w);
    const Matrix k2 = nide_->apply(w + (0.5 * h_sub) * k1);
    const Matrix k3 = nide_->apply(w + (0.5 * h_sub) * k2);
    const Matrix k4 = nide_->apply(w + h_sub * k3);
    return skew_part(w + (h_sub / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }
  throw Error(ErrorKind::config, "dissipative substep needs a Navier-Stokes or NIDE model");
}

Matrix Stepper::step(const Matrix& w, const NoiseDraw* draw, StepStats* stats) const {
  const bool dissipative = std::holds_alternative<NavierStokesModel>(model_.variant) ||
                           std::holds_alternative<NideModel>(model_.variant);
  if (!dissipative) return midpoint_step(w, draw, stats);

  const int k = substeps_for(w);
  const double h_sub = 0.5 * model_.h / k;
  Matrix state = w;
  if (std::holds_alternative<NavierStokesModel>(model_.variant)) {
    state = dissipative_substep(state, 0.5 * model_.h);
  } else {
    for (int i = 0; i < k; ++i) state = dissipative_substep(state, h_sub);
  }
  state = midpoint_step(state, draw, stats);
  if (std::holds_alternative<NavierStokesModel>(model_.variant)) {
    return dissipative_substep(state, 0.5 * model_.h);
  }
  const int k2 = substeps_for(state);
  const double h_sub2 = 0.5 * model_.h / k2;
  for (int i = 0; i < k2; ++i) state = dissipative_substep(state, h_sub2);
  return state;
}

Matrix isospectral_midpoint_step(const Matrix& w, const ModelSpec& model, const NoiseDraw* draw,
                                 const FixedPointSettings& settings, const Discretization& disc) {
  return Stepper(disc, model, settings).midpoint_step(w, draw);
}

Matrix dissipative_substep(const Matrix& w, const ModelSpec& model, double h_sub, const Discretization& disc) {
  return Stepper(disc, model).dissipative_substep(w, h_sub);
}

Matrix composite_step(const Matrix& w, const ModelSpec& model, const NoiseDraw* draw,
                      const FixedPointSettings& settings, const Discretization& disc) {
  return Stepper(disc, model, settings).step(w, draw);
}

}  // namespace zsph
