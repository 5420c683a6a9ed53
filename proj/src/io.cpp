#include "sympler/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sympler {

namespace {

using nlohmann::json;

constexpr int kSnapshotVersion = 1;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name,
                         const std::filesystem::path& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw std::runtime_error("column '" + name + "' not found in " +
                             path.string());
  }
  return static_cast<std::size_t>(it - header.begin());
}

Vector json_to_vector(const json& arr) {
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("not a number: '" + cell + "'");
  }
  return value;
}

std::vector<std::string> read_csv_header(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty file: " + path.string());
  }
  return split_line(strip_cr(line));
}

namespace {

/// Shared row walker: parses the selected columns of every data row,
/// reporting parse failures with their row and column.
template <typename OnRow>
void for_each_csv_row(const std::filesystem::path& path,
                      const std::vector<std::size_t>& columns,
                      const OnRow& on_row) {
  std::ifstream in = open_for_read(path);
  std::string line;
  std::getline(in, line);  // checked by the caller via read_csv_header
  const auto header = split_line(strip_cr(line));

  std::vector<double> values(columns.size());
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error(path.string() + " row " + std::to_string(row) +
                               ": expected " + std::to_string(header.size()) +
                               " cells, got " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      try {
        values[j] = parse_double(cells[columns[j]]);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + " row " + std::to_string(row) +
                                 ", column '" + header[columns[j]] +
                                 "': cannot parse '" + cells[columns[j]] + "'");
      }
    }
    on_row(values);
  }
}

}  // namespace

std::vector<Sample> load_csv(const std::filesystem::path& path,
                             const DatasetSchema& schema) {
  if (schema.target_column.empty()) {
    throw std::invalid_argument("load_csv: schema has no target column");
  }
  for (const std::string& f : schema.feature_columns) {
    if (f == schema.target_column) {
      throw std::invalid_argument("load_csv: target '" + f +
                                  "' also listed as a feature");
    }
  }

  const auto header = read_csv_header(path);
  std::vector<std::size_t> columns;
  columns.reserve(schema.feature_columns.size() + 1);
  for (const std::string& name : schema.feature_columns) {
    columns.push_back(column_index(header, name, path));
  }
  columns.push_back(column_index(header, schema.target_column, path));

  const auto n = static_cast<Index>(schema.feature_columns.size());
  std::vector<Sample> samples;
  for_each_csv_row(path, columns, [&](const std::vector<double>& values) {
    Sample s;
    s.x.resize(n);
    for (Index j = 0; j < n; ++j) s.x(j) = values[static_cast<std::size_t>(j)];
    s.y = values.back();
    s.index = samples.size();
    samples.push_back(std::move(s));
  });
  return samples;
}

std::vector<Vector> load_feature_rows(
    const std::filesystem::path& path,
    const std::vector<std::string>& feature_columns) {
  const auto header = read_csv_header(path);
  std::vector<std::size_t> columns;
  columns.reserve(feature_columns.size());
  for (const std::string& name : feature_columns) {
    columns.push_back(column_index(header, name, path));
  }
  const auto n = static_cast<Index>(feature_columns.size());
  std::vector<Vector> rows;
  for_each_csv_row(path, columns, [&](const std::vector<double>& values) {
    Vector x(n);
    for (Index j = 0; j < n; ++j) x(j) = values[static_cast<std::size_t>(j)];
    rows.push_back(std::move(x));
  });
  return rows;
}

void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<Sample>& samples,
                       const DatasetSchema& schema) {
  std::ofstream out = open_for_write(path);
  for (std::size_t j = 0; j < schema.feature_columns.size(); ++j) {
    out << schema.feature_columns[j] << ',';
  }
  out << schema.target_column << '\n';
  for (const Sample& s : samples) {
    if (s.x.size() != static_cast<Index>(schema.feature_columns.size())) {
      throw std::invalid_argument("write_samples_csv: sample dimension mismatch");
    }
    for (Index j = 0; j < s.x.size(); ++j) out << format_double(s.x(j)) << ',';
    out << format_double(s.y) << '\n';
  }
}

StandardizationStats compute_stats(const std::vector<Sample>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("compute_stats: empty sample list");
  }
  const Index n = samples.front().x.size();
  const auto m = static_cast<double>(samples.size());

  Vector mean = Vector::Zero(n + 1);
  for (const Sample& s : samples) {
    mean.head(n) += s.x;
    mean(n) += s.y;
  }
  mean /= m;

  Vector var = Vector::Zero(n + 1);
  for (const Sample& s : samples) {
    var.head(n) += (s.x - mean.head(n)).cwiseAbs2();
    var(n) += (s.y - mean(n)) * (s.y - mean(n));
  }
  var /= m;  // population variance
  return {mean, var.cwiseSqrt()};
}

void write_stats_csv(const std::filesystem::path& path,
                     const StandardizationStats& stats,
                     const DatasetSchema& schema) {
  if (stats.means.size() !=
      static_cast<Index>(schema.feature_columns.size()) + 1) {
    throw std::invalid_argument("write_stats_csv: stats/schema size mismatch");
  }
  std::ofstream out = open_for_write(path);
  out << "stat";
  for (const std::string& name : schema.feature_columns) out << ',' << name;
  out << ',' << schema.target_column << '\n';
  out << "mean";
  for (Index i = 0; i < stats.means.size(); ++i) {
    out << ',' << format_double(stats.means(i));
  }
  out << '\n' << "std";
  for (Index i = 0; i < stats.stds.size(); ++i) {
    out << ',' << format_double(stats.stds(i));
  }
  out << '\n';
}

StandardizationStats load_stats_csv(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string header_line;
  std::string mean_line;
  std::string std_line;
  if (!std::getline(in, header_line) || !std::getline(in, mean_line) ||
      !std::getline(in, std_line)) {
    throw std::runtime_error("stats file " + path.string() +
                             " needs a header, a mean row and a std row");
  }
  const auto means = split_line(strip_cr(mean_line));
  const auto stds = split_line(strip_cr(std_line));
  if (means.size() != stds.size() || means.size() < 2 || means[0] != "mean" ||
      stds[0] != "std") {
    throw std::runtime_error("malformed stats file " + path.string());
  }
  StandardizationStats stats;
  const auto n = static_cast<Index>(means.size() - 1);
  stats.means.resize(n);
  stats.stds.resize(n);
  for (Index i = 0; i < n; ++i) {
    stats.means(i) = parse_double(means[static_cast<std::size_t>(i) + 1]);
    stats.stds(i) = parse_double(stds[static_cast<std::size_t>(i) + 1]);
  }
  return stats;
}

std::string snapshot_to_json(const SymplerLearner& learner) {
  json j;
  j["version"] = kSnapshotVersion;
  j["n"] = learner.input_dim;
  j["lambda"] = learner.config.lambda;
  j["selection"] = to_string(learner.config.selection);
  j["sigma"] = learner.config.sigma;
  json models = json::array();
  for (const LocalModel& m : learner.models) {
    json entry;
    entry["point"] = vector_to_json(m.point);
    entry["weights"] = vector_to_json(m.weights);
    entry["created_at"] = m.created_at;
    models.push_back(std::move(entry));
  }
  j["models"] = std::move(models);
  return j.dump(2) + "\n";
}

SymplerLearner snapshot_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid snapshot: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != kSnapshotVersion) {
      throw std::runtime_error("unsupported snapshot version " +
                               std::to_string(version));
    }
    const auto n = j.at("n").get<Index>();
    LearnerConfig cfg;
    cfg.lambda = j.at("lambda").get<double>();
    cfg.selection = selection_from_string(j.at("selection").get<std::string>());
    cfg.sigma = j.at("sigma").get<double>();

    SymplerLearner learner = make_learner(n, cfg);
    for (const json& entry : j.at("models")) {
      LocalModel m;
      m.point = json_to_vector(entry.at("point"));
      m.weights = json_to_vector(entry.at("weights"));
      m.created_at = entry.at("created_at").get<std::size_t>();
      m.lambda_used = cfg.lambda;
      if (m.point.size() != n || m.weights.size() != n + 1) {
        throw std::runtime_error("snapshot model dimensions do not match n");
      }
      learner.models.push_back(std::move(m));
    }
    return learner;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid snapshot: ") + e.what());
  }
}

void save_snapshot(const SymplerLearner& learner,
                   const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << snapshot_to_json(learner);
}

SymplerLearner load_snapshot(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return snapshot_from_json(buffer.str());
}

void write_trace(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_for_write(path);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j > 0) out << ',';
    out << header[j];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("write_trace: row width differs from header");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

}  // namespace sympler
