#include "ramsia/harness.hpp"

#include "ramsia/seeding.hpp"
#include "ramsia/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#ifndef RAMSIA_VERSION
#define RAMSIA_VERSION "0.0.0"
#endif

namespace ramsia::harness {

namespace {

enum Stream : std::uint64_t { kSignalStream = 1, kMatrixStream = 2, kSolverStream = 3 };

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

double nonzero_normal(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  double v = 0.0;
  while (v == 0.0) v = normal(rng);
  return v;
}

// `count` distinct positions in [0, n), uniformly at random.
std::vector<Eigen::Index> pick_support(std::mt19937_64& rng, Eigen::Index n, Eigen::Index count) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  // Partial Fisher-Yates.
  for (Eigen::Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(count));
  return all;
}

Vector sparse_normal(std::mt19937_64& rng, Eigen::Index n, Eigen::Index count) {
  std::normal_distribution<double> normal;
  Vector v = Vector::Zero(n);
  for (Eigen::Index pos : pick_support(rng, n, count)) v(pos) = nonzero_normal(rng, normal);
  return v;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

struct TrialTask {
  std::size_t m_index;
  int trial;
};

}  // namespace

std::string_view to_string(AmplitudeLaw law) {
  switch (law) {
    case AmplitudeLaw::StandardNormal: return "standard_normal";
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  require(n >= 1, "generator: n must be positive");
  require(sparsity > 0 && sparsity <= n, "generator: sparsity must lie in (0, n]");
  for (Eigen::Index d : si_diff_supports) {
    require(d >= 0 && d <= n, "generator: side-information difference support must lie in [0, n]");
  }
}

std::string_view to_string(MatrixScaling scaling) {
  switch (scaling) {
    case MatrixScaling::Normalized: return "normalized";
    case MatrixScaling::StandardNormal: return "standard_normal";
  }
  return "unknown";
}

MatrixScaling parse_matrix_scaling(std::string_view name) {
  if (name == "normalized") return MatrixScaling::Normalized;
  if (name == "standard_normal") return MatrixScaling::StandardNormal;
  throw InvariantError("unknown matrix scaling '" + std::string(name) + "'");
}

std::string VariantSpec::label() const {
  std::string name(to_string(variant));
  if (variant == Variant::PlainL1) return name;
  return name + "-" + std::to_string(num_sis);
}

void SweepSpec::validate(const GeneratorSpec& gen) const {
  gen.validate();
  require(trials >= 1, "sweep: trials must be at least 1");
  require(success_threshold > 0, "sweep: success threshold must be positive");
  require(workers >= 1, "sweep: workers must be at least 1");
  for (Eigen::Index m : m_values) {
    require(m >= 1 && m <= gen.n, "sweep: every m must lie in [1, n]");
  }
  for (const VariantSpec& v : variants) {
    require(v.num_sis <= gen.si_diff_supports.size(),
            "sweep: variant " + v.label() + " uses more side information than generated");
    require(v.variant != Variant::L1L1 || v.num_sis >= 1,
            "sweep: l1_l1 needs at least one side information");
  }
  SolverConfig probe = solver;
  probe.validate();
}

Preset preset(std::string_view name) {
  Preset p;
  p.sweep.success_threshold = 1e-3;
  p.sweep.solver.lambda = 1e-5;
  p.sweep.solver.epsilon = 0.1;
  p.sweep.variants = {{Variant::PlainL1, 0},
                      {Variant::L1L1, 1},
                      {Variant::Ramsia, 1},
                      {Variant::Ramsia, 2},
                      {Variant::Ramsia, 3}};
  if (name == "paper") {
    p.generator.n = 1000;
    p.generator.sparsity = 100;
    p.generator.si_diff_supports = {300, 300, 300};
    p.sweep.trials = 100;
    for (Eigen::Index m = 250; m <= 600; m += 50) p.sweep.m_values.push_back(m);
  } else if (name == "desk") {
    p.generator.n = 200;
    p.generator.sparsity = 20;
    p.generator.si_diff_supports = {60, 60, 60};
    p.sweep.trials = 20;
    for (Eigen::Index m = 40; m <= 120; m += 10) p.sweep.m_values.push_back(m);
  } else {
    throw InvariantError("unknown preset '" + std::string(name) + "' (expected paper or desk)");
  }
  return p;
}

ProblemInstance generate_instance(const GeneratorSpec& spec, Eigen::Index m, int trial) {
  spec.validate();
  require(m >= 1, "generator: m must be positive");
  require(trial >= 0, "generator: trial index must be non-negative");
  const auto m_key = static_cast<std::uint64_t>(m);
  const auto trial_key = static_cast<std::uint64_t>(trial);

  std::mt19937_64 signal_rng(derive_seed(spec.seed, {kSignalStream, m_key, trial_key}));
  Vector x = sparse_normal(signal_rng, spec.n, spec.sparsity);
  std::vector<Vector> side_infos;
  side_infos.reserve(spec.si_diff_supports.size());
  for (Eigen::Index diff : spec.si_diff_supports) {
    side_infos.push_back(x - sparse_normal(signal_rng, spec.n, diff));
  }

  std::mt19937_64 matrix_rng(derive_seed(spec.seed, {kMatrixStream, m_key, trial_key}));
  const double stddev = spec.matrix_scaling == MatrixScaling::Normalized
                            ? 1.0 / std::sqrt(static_cast<double>(m))
                            : 1.0;
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix phi(m, spec.n);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < spec.n; ++c) phi(r, c) = normal(matrix_rng);
  }
  Vector y = phi * x;
  return ProblemInstance(std::move(phi), std::move(y), std::move(side_infos), std::move(x));
}

std::uint64_t solver_seed(std::uint64_t master, const VariantSpec& variant, Eigen::Index m,
                          int trial) {
  return derive_seed(master, {kSolverStream, static_cast<std::uint64_t>(variant.variant),
                              variant.num_sis, static_cast<std::uint64_t>(m),
                              static_cast<std::uint64_t>(trial)});
}

double relative_error(const Vector& estimate, const Vector& truth) {
  require(estimate.size() == truth.size(), "relative_error: length mismatch");
  const double denom = truth.norm();
  require(denom > 0.0, "relative_error: reference vector is zero");
  return (estimate - truth).norm() / denom;
}

SweepReport run_sweep(const GeneratorSpec& gen, const SweepSpec& sweep) {
  sweep.validate(gen);
  const std::size_t num_m = sweep.m_values.size();
  const std::size_t num_variants = sweep.variants.size();
  const auto trials = static_cast<std::size_t>(sweep.trials);

  std::vector<TrialTask> tasks;
  tasks.reserve(num_m * trials);
  for (std::size_t mi = 0; mi < num_m; ++mi) {
    for (int t = 0; t < sweep.trials; ++t) tasks.push_back({mi, t});
  }

  // Slot (variant, m, trial) is written by exactly one task.
  std::vector<TrialReport> reports(num_variants * num_m * trials);
  auto slot = [&](std::size_t vi, std::size_t mi, int t) -> TrialReport& {
    return reports[(vi * num_m + mi) * trials + static_cast<std::size_t>(t)];
  };

  auto run_task = [&](const TrialTask& task) {
    const Eigen::Index m = sweep.m_values[task.m_index];
    const ProblemInstance full = generate_instance(gen, m, task.trial);
    for (std::size_t vi = 0; vi < num_variants; ++vi) {
      const VariantSpec& spec = sweep.variants[vi];
      const ProblemInstance inst = full.with_side_infos(spec.num_sis);
      SolverConfig cfg = sweep.solver;
      cfg.variant = spec.variant;
      cfg.rng_seed = solver_seed(gen.seed, spec, m, task.trial);

      const auto start = std::chrono::steady_clock::now();
      const SolverResult result = solver::solve(inst, cfg);
      const auto stop = std::chrono::steady_clock::now();

      TrialReport& r = slot(vi, task.m_index, task.trial);
      r.m = m;
      r.trial_index = task.trial;
      r.solver_variant = spec.variant;
      r.num_sis_used = spec.num_sis;
      r.iterations = result.iterations;
      r.termination = result.termination;
      r.relative_error = relative_error(result.x_hat, *full.x_true());
      r.success = result.termination != Termination::Stalled &&
                  r.relative_error <= sweep.success_threshold;
      r.wall_time = std::chrono::duration<double>(stop - start).count();
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(sweep.workers), tasks.size());
  if (workers <= 1) {
    for (const TrialTask& task : tasks) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
          try {
            run_task(tasks[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(tasks.size());
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepReport report;
  report.generator = gen;
  report.sweep = sweep;
  report.version = RAMSIA_VERSION;
  report.timestamp = utc_timestamp();
  report.cells.reserve(num_variants * num_m);
  for (std::size_t vi = 0; vi < num_variants; ++vi) {
    for (std::size_t mi = 0; mi < num_m; ++mi) {
      CellSummary cell;
      cell.variant = sweep.variants[vi];
      cell.m = sweep.m_values[mi];
      cell.trials = sweep.trials;
      double err_sum = 0.0;
      double iter_sum = 0.0;
      for (int t = 0; t < sweep.trials; ++t) {
        const TrialReport& r = slot(vi, mi, t);
        cell.successes += r.success ? 1 : 0;
        err_sum += r.relative_error;
        iter_sum += r.iterations;
      }
      cell.success_probability =
          static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
      cell.mean_relative_error = err_sum / cell.trials;
      cell.mean_iterations = iter_sum / cell.trials;
      report.cells.push_back(cell);
    }
  }
  report.trials = std::move(reports);
  return report;
}

}  // namespace ramsia::harness
