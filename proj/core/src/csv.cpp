#include "smoothck/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "smoothck/error.hpp"

namespace smoothck {

std::string format_csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& names,
                  std::initializer_list<const char*> tail) {
  bool first = true;
  for (const auto& n : names) {
    out << (first ? "" : ",") << n;
    first = false;
  }
  for (const char* t : tail) {
    out << (first ? "" : ",") << t;
    first = false;
  }
  out << '\n';
}

void write_point(std::ostream& out, const Points& points, Eigen::Index row) {
  for (Eigen::Index k = 0; k < points.cols(); ++k) out << format_csv_number(points(row, k)) << ',';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_predictions_csv(std::ostream& out, const std::vector<std::string>& names,
                           const std::vector<Prediction>& predictions) {
  write_header(out, names, {"prob_mean", "ci_low", "ci_high"});
  for (const auto& p : predictions) {
    for (double x : p.point) out << format_csv_number(x) << ',';
    out << format_csv_number(p.prob_mean) << ',' << format_csv_number(p.ci_low) << ','
        << format_csv_number(p.ci_high) << '\n';
  }
}

void write_training_csv(std::ostream& out, const std::vector<std::string>& names,
                        const Points& points, const std::vector<Observation>& observations) {
  write_header(out, names, {"successes", "trials", "empirical"});
  for (std::size_t j = 0; j < observations.size(); ++j) {
    const auto& o = observations[j];
    write_point(out, points, static_cast<Eigen::Index>(j));
    out << o.successes << ',' << o.trials << ','
        << format_csv_number(static_cast<double>(o.successes) / static_cast<double>(o.trials))
        << '\n';
  }
}

void write_baseline_csv(std::ostream& out, const std::vector<std::string>& names,
                        const Points& points, const std::vector<BernoulliEstimate>& estimates) {
  write_header(out, names, {"successes", "trials", "p_hat", "ci_low", "ci_high"});
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    const auto& e = estimates[j];
    write_point(out, points, static_cast<Eigen::Index>(j));
    out << e.successes << ',' << e.trials << ',' << format_csv_number(e.p_hat) << ','
        << format_csv_number(e.ci_low) << ',' << format_csv_number(e.ci_high) << '\n';
  }
}

void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
}

void write_csv(const ExperimentResult& result, const std::filesystem::path& predictions_path,
               const std::filesystem::path& training_path) {
  {
    auto out = open_for_write(predictions_path);
    write_predictions_csv(out, result.names, result.predictions);
    finish(out, predictions_path);
  }
  {
    auto out = open_for_write(training_path);
    write_training_csv(out, result.names, result.training_points, result.training.observations);
    finish(out, training_path);
  }
  std::filesystem::path meta_path = predictions_path;
  meta_path += ".meta";
  auto out = open_for_write(meta_path);
  write_metadata(out, result.metadata);
  finish(out, meta_path);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV input is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw IoError("non-numeric CSV cell on line " + std::to_string(line_no));
      row.push_back(v);
      p = next;
      if (p == end) break;
      if (*p != ',') throw IoError("malformed CSV line " + std::to_string(line_no));
      ++p;
    }
    if (row.size() != table.header.size()) {
      throw IoError("CSV line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                    " cells, expected " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_csv(in);
}

}  // namespace smoothck
