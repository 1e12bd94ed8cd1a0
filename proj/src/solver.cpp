#include "ramsia/solver.hpp"

#include "ramsia/linop.hpp"
#include "ramsia/prox.hpp"
#include "ramsia/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace ramsia::solver {

namespace {

constexpr double kDivergenceFactor = 1e6;
constexpr double kObjectiveFloor = 1e-12;

// Objective from a precomputed image phi * x.
double objective_from_image(const ProblemInstance& inst, const WeightState& w, double lambda,
                            const Vector& image, const Vector& x) {
  return 0.5 * (image - inst.y()).squaredNorm() +
         lambda * weighted_penalty(w, inst.side_infos(), x);
}

SolverResult run_impl(const ProblemInstance& inst, const SolverConfig& cfg, WeightState weights,
                      WeightPolicy policy, SolverTrace* trace) {
  cfg.validate();
  const Eigen::Index n = inst.cols();
  if (weights.num_slots() != inst.num_side_infos() + 1 || weights.intra.cols() != n ||
      weights.intra.rows() != weights.inter.size()) {
    throw InvariantError("solver: starting weights do not match the instance");
  }

  const Matrix& phi = inst.phi();
  const auto& side_infos = inst.side_infos();
  const double lipschitz = resolve_lipschitz(phi, cfg);
  const double lam_over_L = cfg.lambda / lipschitz;
  const bool adaptive = policy == WeightPolicy::Adaptive;

  SolverResult result;
  result.lipschitz = lipschitz;
  result.objective_trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 100000)));

  // x^(0) = u^(1) = 0; images under phi are tracked alongside so each
  // iteration costs one product with phi and one with phi^T.
  Vector x_prev = Vector::Zero(n);
  Vector x(n);
  Vector u = Vector::Zero(n);
  Vector image_prev = Vector::Zero(inst.rows());
  Vector image(inst.rows());
  Vector image_u = Vector::Zero(inst.rows());
  Vector grad(n);
  Vector step(n);
  double t = 1.0;

  result.initial_objective = objective_from_image(inst, weights, cfg.lambda, image_prev, x_prev);
  double previous_objective = result.initial_objective;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    grad.noalias() = phi.transpose() * (image_u - inst.y());
    step = u - grad / lipschitz;
    prox::prox_vector_into(step, weights, side_infos, lam_over_L, x);
    image.noalias() = phi * x;

    const double objective = objective_from_image(inst, weights, cfg.lambda, image, x);
    // Compare against x^(k-1) under the weights that produced x^(k).
    if (adaptive && k > 1) {
      previous_objective = objective_from_image(inst, weights, cfg.lambda, image_prev, x_prev);
    }

    const bool diverged = !std::isfinite(objective) ||
                          (result.initial_objective > 0.0 &&
                           objective > kDivergenceFactor * result.initial_objective);
    if (diverged) {
      std::ostringstream msg;
      msg << "objective " << objective << " at iteration " << k << " (initial "
          << result.initial_objective << ", L = " << lipschitz << ")";
      result.diagnostics = msg.str();
      result.termination = Termination::Stalled;
      result.iterations = k - 1;
      result.x_hat = x_prev;
      result.final_weights = std::move(weights);
      return result;
    }

    result.objective_trace.push_back(objective);
    result.iterations = k;

    if (adaptive) weights::refresh(weights, x, side_infos, cfg.epsilon);

    const double t_next = next_momentum(t);
    const double momentum = (t - 1.0) / t_next;
    u = x + momentum * (x - x_prev);
    image_u = image + momentum * (image - image_prev);
    t = t_next;

    if (trace) {
      trace->weight_history.push_back(weights);
      trace->iterates.push_back(x);
    }

    const double variation =
        std::abs(objective - previous_objective) / std::max(previous_objective, kObjectiveFloor);
    std::swap(x_prev, x);
    std::swap(image_prev, image);
    previous_objective = objective;
    if (variation < cfg.stop_tol) {
      result.termination = Termination::ToleranceReached;
      break;
    }
    if (k == cfg.max_iters) result.termination = Termination::MaxIters;
  }

  result.x_hat = x_prev;
  result.final_weights = std::move(weights);
  return result;
}

WeightState starting_weights(const ProblemInstance& inst, Variant variant) {
  switch (variant) {
    case Variant::L1L1: return WeightState::l1_l1(inst.num_side_infos(), inst.cols());
    case Variant::PlainL1:
    case Variant::Ramsia: break;
  }
  return WeightState::initial(inst.num_side_infos(), inst.cols());
}

WeightPolicy policy_for(Variant variant) {
  return variant == Variant::Ramsia ? WeightPolicy::Adaptive : WeightPolicy::Frozen;
}

}  // namespace

double next_momentum(double t) { return (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0; }

double resolve_lipschitz(const Matrix& phi, const SolverConfig& cfg) {
  if (const auto* explicit_l = std::get_if<double>(&cfg.lipschitz)) return *explicit_l;
  const auto& p = std::get<PowerIterationSettings>(cfg.lipschitz);
  return linop::estimate_lipschitz(phi, p.iterations, p.safety, cfg.rng_seed).spectral_norm_sq;
}

SolverResult run(const ProblemInstance& inst, const SolverConfig& cfg, WeightState weights,
                 WeightPolicy policy) {
  return run_impl(inst, cfg, std::move(weights), policy, nullptr);
}

SolverTrace run_trace(const ProblemInstance& inst, const SolverConfig& cfg, WeightState weights,
                      WeightPolicy policy) {
  SolverTrace trace;
  trace.result = run_impl(inst, cfg, std::move(weights), policy, &trace);
  return trace;
}

SolverResult solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  return run(inst, cfg, starting_weights(inst, cfg.variant), policy_for(cfg.variant));
}

SolverTrace solve_trace(const ProblemInstance& inst, const SolverConfig& cfg) {
  return run_trace(inst, cfg, starting_weights(inst, cfg.variant), policy_for(cfg.variant));
}

}  // namespace ramsia::solver
