#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ramsia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Thrown when an input violates a documented precondition (dimensions,
// positivity, finiteness).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A reconstruction problem: measurements y = phi * x of an unknown x, plus
// side-information vectors z_1..z_J. The zero reference z_0 is implicit and
// never stored.
class ProblemInstance {
 public:
  ProblemInstance(Matrix phi, Vector y, std::vector<Vector> side_infos,
                  std::optional<Vector> x_true = std::nullopt);

  const Matrix& phi() const { return phi_; }
  const Vector& y() const { return y_; }
  const std::vector<Vector>& side_infos() const { return side_infos_; }
  const std::optional<Vector>& x_true() const { return x_true_; }

  Eigen::Index rows() const { return phi_.rows(); }
  Eigen::Index cols() const { return phi_.cols(); }
  std::size_t num_side_infos() const { return side_infos_.size(); }

  // Copy keeping only the first `count` side-information vectors.
  ProblemInstance with_side_infos(std::size_t count) const;

 private:
  Matrix phi_;
  Vector y_;
  std::vector<Vector> side_infos_;
  std::optional<Vector> x_true_;
};

// Two-level weights of the n-l1 penalty. Row j of `intra` holds the diagonal
// of W_j and inter(j) is beta_j, for j = 0..J with slot 0 the zero reference.
struct WeightState {
  Matrix intra;
  Vector inter;

  std::size_t num_slots() const { return static_cast<std::size_t>(inter.size()); }
  Eigen::Index dimension() const { return intra.cols(); }

  // W_0 = I, beta_0 = 1 and W_j = 0, beta_j = 0 for j >= 1.
  static WeightState initial(std::size_t num_side_infos, Eigen::Index n);
  // W_0 = W_1 = I, beta_0 = beta_1 = 1, every other slot zero.
  static WeightState l1_l1(std::size_t num_side_infos, Eigen::Index n);
  // Every slot W_j = I, beta_j = 1.
  static WeightState uniform(std::size_t num_side_infos, Eigen::Index n);
};

enum class Variant { PlainL1, L1L1, Ramsia };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct PowerIterationSettings {
  int iterations = 100;
  double safety = 1.01;
};

// Either an explicit step constant L or a directive to estimate it.
using LipschitzSetting = std::variant<double, PowerIterationSettings>;

struct SolverConfig {
  double lambda = 1e-5;
  double epsilon = 0.1;
  Variant variant = Variant::Ramsia;
  double stop_tol = 1e-12;
  int max_iters = 30000;
  LipschitzSetting lipschitz = PowerIterationSettings{};
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class Termination { ToleranceReached, MaxIters, Stalled };

std::string_view to_string(Termination t);

struct SolverResult {
  Vector x_hat;
  // H(x^(0)) under the initial weights.
  double initial_objective = 0.0;
  // H(x^(k)) for k = 1..iterations, each under the weights that produced x^(k).
  std::vector<double> objective_trace;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
  WeightState final_weights;
  double lipschitz = 0.0;
  std::string diagnostics;
};

struct TrialReport {
  Eigen::Index m = 0;
  int trial_index = 0;
  double relative_error = 0.0;
  bool success = false;
  Variant solver_variant = Variant::Ramsia;
  std::size_t num_sis_used = 0;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
  double wall_time = 0.0;
};

// H(x) = 1/2 ||phi x - y||^2 + lambda sum_j beta_j sum_i w_ji |x_i - z_ji|,
// z_0 = 0. Slots beyond the instance's side-information count are rejected.
double objective_value(const ProblemInstance& inst, const WeightState& w,
                       const SolverConfig& cfg, const Vector& x);

// Penalty part only, without lambda: sum_j beta_j sum_i w_ji |x_i - z_ji|.
double weighted_penalty(const WeightState& w, const std::vector<Vector>& side_infos,
                        const Vector& x);

}  // namespace ramsia
