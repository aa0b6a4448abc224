#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smoothck/experiment.hpp"
#include "smoothck/smc.hpp"

namespace smoothck {

/// "%.17g": round-trips every double.
std::string format_csv_number(double v);

/// Header "<params...>,prob_mean,ci_low,ci_high", one row per prediction.
void write_predictions_csv(std::ostream& out, const std::vector<std::string>& names,
                           const std::vector<Prediction>& predictions);

/// Header "<params...>,successes,trials,empirical", one row per training point.
void write_training_csv(std::ostream& out, const std::vector<std::string>& names,
                        const Points& points, const std::vector<Observation>& observations);

/// Header "<params...>,successes,trials,p_hat,ci_low,ci_high".
void write_baseline_csv(std::ostream& out, const std::vector<std::string>& names,
                        const Points& points, const std::vector<BernoulliEstimate>& estimates);

/// key=value lines.
void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, std::string>>& entries);

/// Writes both CSVs and "<predictions_path>.meta", overwriting. Throws IoError.
void write_csv(const ExperimentResult& result, const std::filesystem::path& predictions_path,
               const std::filesystem::path& training_path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with one header line. Throws IoError on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace smoothck
