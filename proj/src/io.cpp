#include "ramsia/io.hpp"

#include "ramsia/harness.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ramsia::io {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

Json lipschitz_json(const LipschitzSetting& setting) {
  if (const auto* explicit_l = std::get_if<double>(&setting)) {
    return Json{{"mode", "explicit"}, {"value", *explicit_l}};
  }
  const auto& p = std::get<PowerIterationSettings>(setting);
  return Json{{"mode", "power_iteration"}, {"iterations", p.iterations}, {"safety", p.safety}};
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t row, std::size_t column,
                       const std::string& what)
    : std::runtime_error(source + ": row " + std::to_string(row) +
                         (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                         what),
      row_(row),
      column_(column) {}

std::vector<Vector> parse_vectors(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    ++row;
    if (line.empty()) {
      // Only trailing blank lines are tolerated.
      if (std::string_view(text).substr(std::min(pos, text.size())).find_first_not_of(" \t\r\n") !=
          std::string_view::npos) {
        throw ParseError(source, row, 0, "blank line");
      }
      break;
    }
    std::vector<double> values;
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view token =
          trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      ++column;
      double value = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw ParseError(source, row, column, "not a number: '" + std::string(token) + "'");
      }
      if (!std::isfinite(value)) {
        throw ParseError(source, row, column, "non-finite value '" + std::string(token) + "'");
      }
      values.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(source, row, 0,
                       "ragged row: " + std::to_string(values.size()) + " values, expected " +
                           std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(values));
  }

  std::vector<Vector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
  }
  return out;
}

std::vector<Vector> ingest_vectors(const std::filesystem::path& path) {
  return parse_vectors(read_file(path), path.string());
}

std::string format_vectors(const std::vector<Vector>& rows) {
  std::string out;
  for (const Vector& v : rows) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out.push_back(',');
      append_double(out, v(i));
    }
    out.push_back('\n');
  }
  return out;
}

void write_vectors(const std::filesystem::path& path, const std::vector<Vector>& rows) {
  write_file(path, format_vectors(rows));
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::vector<Vector> rows;
  rows.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).transpose());
  write_vectors(path, rows);
}

Matrix read_matrix(const std::filesystem::path& path) {
  const auto rows = ingest_vectors(path);
  if (rows.empty()) throw ParseError(path.string(), 1, 0, "empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = rows[r];
  return m;
}

std::string report_csv(const harness::SweepReport& report) {
  std::string out = "variant,num_sis,m,trials,successes,success_probability,mean_rel_err,mean_iters\n";
  for (const auto& cell : report.cells) {
    out += to_string(cell.variant.variant);
    out += ',' + std::to_string(cell.variant.num_sis);
    out += ',' + std::to_string(cell.m);
    out += ',' + std::to_string(cell.trials);
    out += ',' + std::to_string(cell.successes);
    out += ',' + format_double(cell.success_probability);
    out += ',' + format_double(cell.mean_relative_error);
    out += ',' + format_double(cell.mean_iterations);
    out += '\n';
  }
  return out;
}

std::string report_json(const harness::SweepReport& report, const ExportOptions& options) {
  const auto& gen = report.generator;
  const auto& sweep = report.sweep;

  Json variants = Json::array();
  for (const auto& v : sweep.variants) {
    variants.push_back({{"variant", to_string(v.variant)}, {"num_sis", v.num_sis}, {"label", v.label()}});
  }

  Json doc;
  doc["version"] = report.version;
  if (options.include_timing) doc["timestamp"] = report.timestamp;
  doc["generator"] = {
      {"n", gen.n},
      {"sparsity", gen.sparsity},
      {"si_diff_supports", gen.si_diff_supports},
      {"amplitude_law", harness::to_string(gen.amplitude_law)},
      {"matrix_scaling", harness::to_string(gen.matrix_scaling)},
      {"seed", gen.seed},
      {"support_positions", "uniform without replacement, independent of supp(x)"},
      {"per_trial_redraw", "x, side informations and phi"},
  };
  doc["sweep"] = {
      {"m_values", sweep.m_values},
      {"trials", sweep.trials},
      {"success_threshold", sweep.success_threshold},
      {"variants", variants},
      {"solver",
       {{"lambda", sweep.solver.lambda},
        {"epsilon", sweep.solver.epsilon},
        {"stop_tol", sweep.solver.stop_tol},
        {"max_iters", sweep.solver.max_iters},
        {"lipschitz", lipschitz_json(sweep.solver.lipschitz)}}},
  };

  Json cells = Json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"variant", to_string(c.variant.variant)},
                     {"num_sis", c.variant.num_sis},
                     {"m", c.m},
                     {"trials", c.trials},
                     {"successes", c.successes},
                     {"success_probability", c.success_probability},
                     {"mean_rel_err", c.mean_relative_error},
                     {"mean_iters", c.mean_iterations}});
  }
  doc["cells"] = std::move(cells);

  Json trials = Json::array();
  for (const auto& t : report.trials) {
    const harness::VariantSpec spec{t.solver_variant, t.num_sis_used};
    Json row = {{"variant", to_string(t.solver_variant)},
                {"num_sis", t.num_sis_used},
                {"m", t.m},
                {"trial", t.trial_index},
                {"relative_error", t.relative_error},
                {"success", t.success},
                {"iterations", t.iterations},
                {"termination", to_string(t.termination)},
                {"solver_seed", harness::solver_seed(gen.seed, spec, t.m, t.trial_index)}};
    if (options.include_timing) row["wall_time"] = t.wall_time;
    trials.push_back(std::move(row));
  }
  doc["trials"] = std::move(trials);
  return doc.dump(2) + "\n";
}

void export_report(const harness::SweepReport& report, const std::filesystem::path& path,
                   ReportFormat format, const ExportOptions& options) {
  write_file(path, format == ReportFormat::Csv ? report_csv(report) : report_json(report, options));
}

void write_instance_bundle(const std::filesystem::path& dir, const ProblemInstance& inst,
                           const BundleManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  write_matrix(dir / "phi.csv", inst.phi());
  write_vectors(dir / "y.csv", {inst.y()});
  write_vectors(dir / "z.csv", inst.side_infos());
  if (inst.x_true()) write_vectors(dir / "x.csv", {*inst.x_true()});

  Json doc = {{"n", inst.cols()},
              {"m", inst.rows()},
              {"J", inst.num_side_infos()},
              {"seeds", {{"master", manifest.seed}, {"trial", manifest.trial}}},
              {"lambda", manifest.lambda},
              {"epsilon", manifest.epsilon},
              {"has_x_true", inst.x_true().has_value()}};
  write_file(dir / "manifest.json", doc.dump(2) + "\n");
}

LoadedBundle read_instance_bundle(const std::filesystem::path& dir) {
  BundleManifest manifest;
  try {
    const Json doc = Json::parse(read_file(dir / "manifest.json"));
    manifest.n = doc.at("n").get<Eigen::Index>();
    manifest.m = doc.at("m").get<Eigen::Index>();
    manifest.num_side_infos = doc.at("J").get<std::size_t>();
    manifest.seed = doc.at("seeds").at("master").get<std::uint64_t>();
    manifest.trial = doc.at("seeds").at("trial").get<int>();
    manifest.lambda = doc.at("lambda").get<double>();
    manifest.epsilon = doc.at("epsilon").get<double>();
    manifest.has_x_true = doc.value("has_x_true", false);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / "manifest.json").string(), 0, 0, e.what());
  }

  Matrix phi = read_matrix(dir / "phi.csv");
  const auto y_rows = ingest_vectors(dir / "y.csv");
  if (y_rows.size() != 1) throw ParseError((dir / "y.csv").string(), 1, 0, "expected exactly one row");
  std::vector<Vector> side_infos;
  if (std::filesystem::exists(dir / "z.csv")) side_infos = ingest_vectors(dir / "z.csv");
  std::optional<Vector> x_true;
  if (manifest.has_x_true) {
    auto x_rows = ingest_vectors(dir / "x.csv");
    if (x_rows.size() != 1) throw ParseError((dir / "x.csv").string(), 1, 0, "expected exactly one row");
    x_true = std::move(x_rows.front());
  }
  if (phi.rows() != manifest.m || phi.cols() != manifest.n ||
      side_infos.size() != manifest.num_side_infos) {
    throw InvariantError("instance bundle '" + dir.string() + "' disagrees with its manifest");
  }
  return {ProblemInstance(std::move(phi), y_rows.front(), std::move(side_infos), std::move(x_true)),
          manifest};
}

}  // namespace ramsia::io
