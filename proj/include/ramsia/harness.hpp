#pragma once

#include "ramsia/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ramsia::harness {

enum class AmplitudeLaw { StandardNormal };

// Entry law of the measurement matrix: N(0, 1/m) keeps the columns at unit
// expected norm, N(0, 1) is the unscaled alternative.
enum class MatrixScaling { Normalized, StandardNormal };

std::string_view to_string(AmplitudeLaw law);
std::string_view to_string(MatrixScaling scaling);
MatrixScaling parse_matrix_scaling(std::string_view name);

struct GeneratorSpec {
  Eigen::Index n = 1000;
  Eigen::Index sparsity = 100;
  // Support size of x - z_j, one entry per side information.
  std::vector<Eigen::Index> si_diff_supports{300, 300, 300};
  AmplitudeLaw amplitude_law = AmplitudeLaw::StandardNormal;
  MatrixScaling matrix_scaling = MatrixScaling::Normalized;
  std::uint64_t seed = 1;

  void validate() const;
};

struct VariantSpec {
  Variant variant = Variant::Ramsia;
  std::size_t num_sis = 0;

  // "ramsia-3", "plain_l1", "l1_l1-1".
  std::string label() const;
  bool operator==(const VariantSpec&) const = default;
};

struct SweepSpec {
  std::vector<Eigen::Index> m_values;
  int trials = 100;
  double success_threshold = 1e-3;
  std::vector<VariantSpec> variants;
  // lambda, epsilon, stopping rule and Lipschitz directive for every solve;
  // variant and rng_seed are overridden per trial.
  SolverConfig solver;
  // Worker threads; affects wall time only, never the report contents.
  int workers = 1;

  void validate(const GeneratorSpec& gen) const;
};

struct CellSummary {
  VariantSpec variant;
  Eigen::Index m = 0;
  int trials = 0;
  int successes = 0;
  double success_probability = 0.0;
  double mean_relative_error = 0.0;
  double mean_iterations = 0.0;
};

struct SweepReport {
  GeneratorSpec generator;
  SweepSpec sweep;
  std::vector<CellSummary> cells;
  // Ordered by variant, then m, then trial index.
  std::vector<TrialReport> trials;
  std::string version;
  std::string timestamp;
};

struct Preset {
  GeneratorSpec generator;
  SweepSpec sweep;
};

// "paper": n = 1000, s = 100, three SIs with diff support 300, 100 trials.
// "desk": n = 200, s = 20, three SIs with diff support 60, 20 trials.
Preset preset(std::string_view name);

// Synthetic instance for one (m, trial) cell: x has exactly s standard-normal
// nonzeros, z_j = x - d_j with d_j having exactly si_diff_supports[j]
// standard-normal nonzeros (positions independent of supp(x)), phi is m x n
// i.i.d. Gaussian per `matrix_scaling` and y = phi x. Depends only on
// (seed, m, trial).
ProblemInstance generate_instance(const GeneratorSpec& spec, Eigen::Index m, int trial = 0);

// Seed used for the stochastic parts of one solve (power iteration start).
std::uint64_t solver_seed(std::uint64_t master, const VariantSpec& variant, Eigen::Index m,
                          int trial);

double relative_error(const Vector& estimate, const Vector& truth);

// Monte-Carlo success probabilities over every (variant, m, trial). Stalled
// solves count as failures. The report is identical for any worker count.
SweepReport run_sweep(const GeneratorSpec& gen, const SweepSpec& sweep);

}  // namespace ramsia::harness
