#pragma once

#include "sympler/learner.hpp"
#include "sympler/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sympler {

/// Which columns of a CSV file feed the learner. Unselected columns are
/// ignored; a timestamp column, when present, is never parsed numerically.
struct DatasetSchema {
  std::vector<std::string> feature_columns;
  std::string target_column;
  bool has_timestamp = false;
};

/// Per-column normalization constants (feature columns first, target
/// last). stds are population standard deviations.
struct StandardizationStats {
  Vector means;
  Vector stds;
};

/// Shortest decimal representation that parses back to the same double;
/// locale-independent ("." decimal separator, "nan"/"inf" for specials).
std::string format_double(double value);

/// Strict double parser over a full cell; throws on any leftover input.
double parse_double(const std::string& cell);

/// Header row of a CSV file.
std::vector<std::string> read_csv_header(const std::filesystem::path& path);

/// Loads samples in file order with sequential indices. Throws on a
/// missing file, a missing schema column, or an unparseable cell (the
/// error names the row and column).
std::vector<Sample> load_csv(const std::filesystem::path& path,
                             const DatasetSchema& schema);

/// Loads only the named feature columns (for inference data without a
/// target column).
std::vector<Vector> load_feature_rows(
    const std::filesystem::path& path,
    const std::vector<std::string>& feature_columns);

/// Writes samples as CSV under the schema's column names.
void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<Sample>& samples,
                       const DatasetSchema& schema);

/// Per-column mean and population standard deviation (features then
/// target).
StandardizationStats compute_stats(const std::vector<Sample>& samples);

/// Stats files: header "stat,<feature...>,<target>", one "mean" row and
/// one "std" row.
void write_stats_csv(const std::filesystem::path& path,
                     const StandardizationStats& stats,
                     const DatasetSchema& schema);
StandardizationStats load_stats_csv(const std::filesystem::path& path);

/// Learner snapshot as JSON. Lossless for every coefficient: a loaded
/// learner predicts bit-identically. The novelty buffer and baseline state
/// are transient and not part of a snapshot.
void save_snapshot(const SymplerLearner& learner,
                   const std::filesystem::path& path);
SymplerLearner load_snapshot(const std::filesystem::path& path);
std::string snapshot_to_json(const SymplerLearner& learner);
SymplerLearner snapshot_from_json(const std::string& text);

/// Generic CSV trace writer: declared header, one row per record,
/// deterministic bytes for identical input.
void write_trace(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

}  // namespace sympler
