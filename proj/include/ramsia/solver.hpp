#pragma once

#include "ramsia/model.hpp"

#include <vector>

namespace ramsia::solver {

enum class WeightPolicy { Frozen, Adaptive };

struct SolverTrace {
  SolverResult result;
  // Weights after the refresh of iteration k (what iteration k + 1 uses).
  std::vector<WeightState> weight_history;
  // x^(k) for k = 1..iterations.
  std::vector<Vector> iterates;
};

// FISTA momentum step t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
double next_momentum(double t);

// Step constant L resolved from the config: explicit value or a seeded power
// iteration on phi^T phi.
double resolve_lipschitz(const Matrix& phi, const SolverConfig& cfg);

// Accelerated proximal gradient on H(x) with the given starting weights.
// Adaptive refreshes both weight levels at x^(k) after every prox step;
// Frozen keeps `weights` throughout. cfg.variant is ignored here.
SolverResult run(const ProblemInstance& inst, const SolverConfig& cfg, WeightState weights,
                 WeightPolicy policy);
SolverTrace run_trace(const ProblemInstance& inst, const SolverConfig& cfg, WeightState weights,
                      WeightPolicy policy);

// Reconstruction per cfg.variant:
//   PlainL1  classical FISTA (side information ignored, W_0 = I, beta_0 = 1)
//   L1L1     W_0 = W_1 = I, beta_0 = beta_1 = 1, other slots zero, frozen
//   Ramsia   WeightState::initial, both levels refreshed every iteration
// Divergence or a non-finite objective ends with Termination::Stalled.
SolverResult solve(const ProblemInstance& inst, const SolverConfig& cfg);
SolverTrace solve_trace(const ProblemInstance& inst, const SolverConfig& cfg);

}  // namespace ramsia::solver
