#pragma once

#include "ramsia/harness.hpp"
#include "ramsia/model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ramsia::io {

// Malformed input, with 1-based row and column (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t row, std::size_t column,
             const std::string& what);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One vector per line, comma-separated decimals, no header. Finite values only;
// every row must have the same length.
std::vector<Vector> parse_vectors(const std::string& text, const std::string& source = "<string>");
std::vector<Vector> ingest_vectors(const std::filesystem::path& path);

// Writes with 17 significant digits, which round-trips doubles exactly.
std::string format_vectors(const std::vector<Vector>& rows);
void write_vectors(const std::filesystem::path& path, const std::vector<Vector>& rows);
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

enum class ReportFormat { Csv, Json };

struct ExportOptions {
  // Wall times and the creation timestamp make reports non-reproducible, so
  // they are only written on request.
  bool include_timing = false;
};

std::string report_csv(const harness::SweepReport& report);
std::string report_json(const harness::SweepReport& report, const ExportOptions& options = {});
void export_report(const harness::SweepReport& report, const std::filesystem::path& path,
                   ReportFormat format, const ExportOptions& options = {});

// Instance bundle: phi.csv, y.csv, z.csv (one row per side information),
// optional x.csv, and manifest.json with n, m, J, seeds, lambda, epsilon.
struct BundleManifest {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::size_t num_side_infos = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  double lambda = 1e-5;
  double epsilon = 0.1;
  bool has_x_true = false;
};

void write_instance_bundle(const std::filesystem::path& dir, const ProblemInstance& inst,
                           const BundleManifest& manifest);

struct LoadedBundle {
  ProblemInstance instance;
  BundleManifest manifest;
};

LoadedBundle read_instance_bundle(const std::filesystem::path& dir);

}  // namespace ramsia::io
