#include "ramsia/harness.hpp"
#include "ramsia/io.hpp"
#include "ramsia/solver.hpp"
#include "ramsia/testing/prox_oracle.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

using namespace ramsia;

namespace {

// Generator and solver flags shared by `generate` and `benchmark`. Unset flags
// fall back to the preset (if any), then to the built-in defaults.
struct CommonFlags {
  std::string preset;
  std::optional<Eigen::Index> n;
  std::optional<Eigen::Index> sparsity;
  std::optional<std::vector<Eigen::Index>> si_diffs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> matrix_scaling;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  std::optional<double> stop_tol;
};

void add_generator_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--preset", f.preset, "Start from a named configuration")
      ->check(CLI::IsMember({"paper", "desk"}));
  app->add_option("--n", f.n, "Signal length (default 1000; desk 200)");
  app->add_option("--sparsity", f.sparsity, "Nonzeros in x (default 100; desk 20)");
  app->add_option("--si-diffs", f.si_diffs,
                  "Support of x - z_j, one value per side information (default 300 300 300; desk 60 60 60)")
      ->delimiter(',');
  app->add_option("--seed", f.seed, "Master seed (default 1)");
  app->add_option("--matrix-scaling", f.matrix_scaling,
                  "Measurement matrix entries: normalized = N(0,1/m), standard_normal = N(0,1) (default normalized)")
      ->check(CLI::IsMember({"normalized", "standard_normal"}));
}

void add_solver_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--lambda", f.lambda, "Regularization weight (default 1e-5)");
  app->add_option("--epsilon", f.epsilon, "Weight smoothing constant (default 0.1)");
  app->add_option("--max-iters", f.max_iters, "Iteration cap per solve (default 30000)");
  app->add_option("--stop-tol", f.stop_tol,
                  "Stop when the relative objective change drops below this (default 1e-12)");
}

harness::Preset resolve(const CommonFlags& f) {
  harness::Preset p;
  if (!f.preset.empty()) p = harness::preset(f.preset);
  if (f.n) p.generator.n = *f.n;
  if (f.sparsity) p.generator.sparsity = *f.sparsity;
  if (f.si_diffs) p.generator.si_diff_supports = *f.si_diffs;
  if (f.seed) p.generator.seed = *f.seed;
  if (f.matrix_scaling) p.generator.matrix_scaling = harness::parse_matrix_scaling(*f.matrix_scaling);
  if (f.lambda) p.sweep.solver.lambda = *f.lambda;
  if (f.epsilon) p.sweep.solver.epsilon = *f.epsilon;
  if (f.max_iters) p.sweep.solver.max_iters = *f.max_iters;
  if (f.stop_tol) p.sweep.solver.stop_tol = *f.stop_tol;
  return p;
}

// "ramsia-3", "l1_l1-1", "plain_l1", or a bare name that takes --num-sis.
harness::VariantSpec parse_variant_label(const std::string& label, std::optional<std::size_t> num_sis,
                                         std::size_t available) {
  harness::VariantSpec spec;
  const auto dash = label.rfind('-');
  if (dash != std::string::npos && dash + 1 < label.size() &&
      label.find_first_not_of("0123456789", dash + 1) == std::string::npos) {
    spec.variant = parse_variant(label.substr(0, dash));
    spec.num_sis = std::stoul(label.substr(dash + 1));
  } else {
    spec.variant = parse_variant(label);
    spec.num_sis = num_sis.value_or(available);
  }
  if (spec.variant == Variant::PlainL1) spec.num_sis = 0;
  return spec;
}

int cmd_generate(const CommonFlags& f, Eigen::Index m, int trial, const std::string& out) {
  const harness::Preset p = resolve(f);
  const ProblemInstance inst = harness::generate_instance(p.generator, m, trial);
  io::BundleManifest manifest;
  manifest.seed = p.generator.seed;
  manifest.trial = trial;
  manifest.lambda = p.sweep.solver.lambda;
  manifest.epsilon = p.sweep.solver.epsilon;
  io::write_instance_bundle(out, inst, manifest);
  std::printf("wrote %s: n=%ld m=%ld J=%zu\n", out.c_str(), static_cast<long>(inst.cols()),
              static_cast<long>(inst.rows()), inst.num_side_infos());
  return 0;
}

int cmd_reconstruct(const CommonFlags& f, const std::string& dir, const std::string& variant,
                    std::optional<std::size_t> num_sis, const std::string& out) {
  const io::LoadedBundle bundle = io::read_instance_bundle(dir);
  const harness::VariantSpec spec =
      parse_variant_label(variant, num_sis, bundle.instance.num_side_infos());
  const ProblemInstance inst = bundle.instance.with_side_infos(spec.num_sis);

  SolverConfig cfg;
  cfg.variant = spec.variant;
  cfg.lambda = f.lambda.value_or(bundle.manifest.lambda);
  cfg.epsilon = f.epsilon.value_or(bundle.manifest.epsilon);
  if (f.max_iters) cfg.max_iters = *f.max_iters;
  if (f.stop_tol) cfg.stop_tol = *f.stop_tol;
  cfg.rng_seed = harness::solver_seed(bundle.manifest.seed, spec, inst.rows(), bundle.manifest.trial);

  const SolverResult r = solver::solve(inst, cfg);
  std::printf("variant=%s iterations=%d termination=%s", spec.label().c_str(), r.iterations,
              std::string(to_string(r.termination)).c_str());
  if (inst.x_true()) {
    std::printf(" relative_error=%.6e", harness::relative_error(r.x_hat, *inst.x_true()));
  }
  std::printf("\n");
  if (!r.diagnostics.empty()) std::fprintf(stderr, "%s\n", r.diagnostics.c_str());
  if (!out.empty()) io::write_vectors(out, {r.x_hat});
  return r.termination == Termination::Stalled ? 1 : 0;
}

int cmd_benchmark(const CommonFlags& f, const std::vector<Eigen::Index>& m_list,
                  std::optional<int> trials, std::optional<double> threshold,
                  const std::vector<std::string>& variants, std::optional<std::size_t> num_sis,
                  int workers, const std::string& out_csv, const std::string& out_json,
                  bool timing) {
  harness::Preset p = resolve(f);
  if (p.sweep.variants.empty()) {
    p.sweep.variants = {{Variant::PlainL1, 0}, {Variant::L1L1, 1}};
    for (std::size_t j = 1; j <= p.generator.si_diff_supports.size(); ++j) {
      p.sweep.variants.push_back({Variant::Ramsia, j});
    }
  }
  // A preset's variant list may ask for more side information than --si-diffs provides.
  std::erase_if(p.sweep.variants, [&](const harness::VariantSpec& v) {
    return v.num_sis > p.generator.si_diff_supports.size();
  });
  if (!variants.empty()) {
    p.sweep.variants.clear();
    for (const auto& v : variants) {
      p.sweep.variants.push_back(parse_variant_label(v, num_sis, p.generator.si_diff_supports.size()));
    }
  }
  if (!m_list.empty()) p.sweep.m_values = m_list;
  if (p.sweep.m_values.empty()) {
    for (Eigen::Index m = p.generator.n / 4; m <= 3 * p.generator.n / 5; m += p.generator.n / 20) {
      p.sweep.m_values.push_back(m);
    }
  }
  if (trials) p.sweep.trials = *trials;
  if (threshold) p.sweep.success_threshold = *threshold;
  p.sweep.workers = workers;

  const harness::SweepReport report = harness::run_sweep(p.generator, p.sweep);
  const io::ExportOptions options{timing};
  if (!out_csv.empty()) io::export_report(report, out_csv, io::ReportFormat::Csv, options);
  if (!out_json.empty()) io::export_report(report, out_json, io::ReportFormat::Json, options);
  if (out_csv.empty()) std::cout << io::report_csv(report);
  return 0;
}

int cmd_prox_check(int cases, std::uint64_t seed, double tolerance) {
  const auto r = testing::run_prox_oracle_suite(cases, seed, tolerance);
  std::printf("cases=%d mismatches=%d max_abs_error=%.3e seconds=%.2f\n", r.cases, r.mismatches,
              r.max_abs_error, r.seconds);
  return r.mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse reconstruction with multiple side informations and adaptive weights"};
  app.set_version_flag("--version", RAMSIA_VERSION);
  app.require_subcommand(1);

  CommonFlags flags;

  auto* gen = app.add_subcommand("generate", "Write a synthetic instance bundle");
  add_generator_flags(gen, flags);
  add_solver_flags(gen, flags);
  Eigen::Index gen_m = 250;
  int gen_trial = 0;
  std::string gen_out;
  gen->add_option("--m", gen_m, "Number of measurements")->capture_default_str();
  gen->add_option("--trial", gen_trial, "Trial index (selects the random draw)")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  auto* rec = app.add_subcommand("reconstruct", "Solve one instance bundle");
  add_solver_flags(rec, flags);
  std::string rec_dir, rec_variant = "ramsia", rec_out;
  std::optional<std::size_t> rec_num_sis;
  rec->add_option("--instance", rec_dir, "Instance bundle directory")->required();
  rec->add_option("--variant", rec_variant, "plain_l1, l1_l1 or ramsia; a -J suffix sets the SI count")
      ->capture_default_str();
  rec->add_option("--num-sis", rec_num_sis, "Side informations to use (default all in the bundle)");
  rec->add_option("--out", rec_out, "Write the estimate as a one-row CSV");

  auto* bench = app.add_subcommand("benchmark", "Monte-Carlo success probabilities over m");
  add_generator_flags(bench, flags);
  add_solver_flags(bench, flags);
  std::vector<Eigen::Index> m_list;
  std::optional<int> trials;
  std::optional<double> threshold;
  std::vector<std::string> bench_variants;
  std::optional<std::size_t> bench_num_sis;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out_csv, out_json;
  bool timing = false;
  bench->add_option("--m-list", m_list, "Measurement counts, comma-separated (default n/4..3n/5 step n/20)")
      ->delimiter(',');
  bench->add_option("--trials", trials, "Trials per cell (default 100; desk 20)");
  bench->add_option("--threshold", threshold, "Success threshold on relative error (default 1e-3)");
  bench->add_option("--variant", bench_variants,
                    "Variant labels, e.g. plain_l1,l1_l1-1,ramsia-3 (default plain_l1, l1_l1-1, ramsia-1..J)")
      ->delimiter(',');
  bench->add_option("--num-sis", bench_num_sis, "SI count for variant labels without a -J suffix (default all)");
  bench->add_option("--workers", workers, "Worker threads")->capture_default_str();
  bench->add_option("--out-csv", out_csv, "Per-cell summary CSV (printed to stdout if omitted)");
  bench->add_option("--out-json", out_json, "Full report JSON");
  bench->add_flag("--timing", timing, "Include wall times and a timestamp in the JSON report");

  auto* pc = app.add_subcommand("prox-check", "Compare the prox against a grid-search oracle");
  int cases = 1000;
  std::uint64_t pc_seed = 1;
  double tolerance = 1e-6;
  pc->add_option("--cases", cases, "Random coordinate cases")->capture_default_str();
  pc->add_option("--seed", pc_seed, "Seed")->capture_default_str();
  pc->add_option("--tolerance", tolerance, "Allowed absolute deviation")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(flags, gen_m, gen_trial, gen_out);
    if (*rec) return cmd_reconstruct(flags, rec_dir, rec_variant, rec_num_sis, rec_out);
    if (*bench) {
      return cmd_benchmark(flags, m_list, trials, threshold, bench_variants, bench_num_sis, workers,
                           out_csv, out_json, timing);
    }
    if (*pc) return cmd_prox_check(cases, pc_seed, tolerance);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
