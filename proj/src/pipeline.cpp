#include "shclust/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "shclust/io.hpp"

namespace shclust {

DataMatrix MaskedMatrix::to_data() const {
  if (!complete())
    throw algorithm_error("missing-data", "matrix still has missing cells");
  DataMatrix out;
  out.values = values;
  out.feature_names = feature_names;
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace; the format is plain unquoted CSV.
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

IngestResult ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw algorithm_error("io-error", "cannot open " + path);

  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_csv_line(line);
      if (header.empty())
        throw algorithm_error("parse-error", "empty header row in " + path);
      continue;
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw algorithm_error("parse-error",
                            "ragged row " + std::to_string(rows.size() + 2) +
                                " in " + path + ": expected " +
                                std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  if (rows.size() < 2)
    throw algorithm_error("parse-error", path + " has fewer than 2 data rows");

  const bool has_label = header.back() == "label";
  const int p = static_cast<int>(header.size()) - (has_label ? 1 : 0);
  if (p < 1) throw algorithm_error("parse-error", path + " has no feature columns");
  const int n = static_cast<int>(rows.size());

  IngestResult result;
  result.data.values = Eigen::MatrixXd::Zero(n, p);
  result.data.mask.setConstant(n, p, true);
  result.data.feature_names.assign(header.begin(), header.begin() + p);

  std::vector<int> raw_labels;
  for (int i = 0; i < n; ++i) {
    const std::vector<std::string>& fields = rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < p; ++j) {
      const std::string& cell = fields[static_cast<std::size_t>(j)];
      if (cell == "NA") {
        result.data.mask(i, j) = false;
        continue;
      }
      double value;
      if (!parse_double(cell, value) || !std::isfinite(value))
        throw algorithm_error("parse-error", "non-numeric cell '" + cell +
                                                 "' at row " + std::to_string(i + 2) +
                                                 " column " + header[static_cast<std::size_t>(j)]);
      result.data.values(i, j) = value;
    }
    if (has_label) {
      const std::string& cell = fields.back();
      double value;
      if (!parse_double(cell, value) || value != std::floor(value))
        throw algorithm_error("parse-error",
                              "label column must hold integers, got '" + cell + "'");
      raw_labels.push_back(static_cast<int>(value));
    }
  }
  if (has_label) result.labels = Partition::from_labels(raw_labels);
  return result;
}

void export_csv(const std::string& path, const DataMatrix& x,
                const Partition* labels, const std::string& schema) {
  if (labels && static_cast<int>(labels->labels.size()) != x.n())
    throw algorithm_error("bad-data", "label count does not match rows");
  std::ofstream out(path);
  if (!out) throw algorithm_error("io-error", "cannot write " + path);
  if (!schema.empty()) out << "# schema: " << schema << "\n";

  const std::vector<std::string> names =
      x.feature_names.empty() ? default_feature_names(x.p()) : x.feature_names;
  for (int j = 0; j < x.p(); ++j) {
    if (j) out << ',';
    out << names[static_cast<std::size_t>(j)];
  }
  if (labels) out << ",label";
  out << '\n';
  for (int i = 0; i < x.n(); ++i) {
    for (int j = 0; j < x.p(); ++j) {
      if (j) out << ',';
      out << format_double(x.values(i, j));
    }
    if (labels) out << ',' << labels->labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw algorithm_error("io-error", "write failed for " + path);
}

MaskedMatrix knn_impute(const MaskedMatrix& x, int k) {
  if (k < 1) throw algorithm_error("bad-data", "neighbor count must be positive");
  const int n = x.n();
  const int p = x.p();
  for (int i = 0; i < n; ++i)
    if (!x.mask.row(i).any())
      throw algorithm_error("missing-data",
                            "row " + std::to_string(i + 1) + " has no observed values");
  for (int j = 0; j < p; ++j)
    if (!x.mask.col(j).any())
      throw algorithm_error("missing-data",
                            "column " + std::to_string(j + 1) + " is missing in every row");

  MaskedMatrix out = x;
  for (int i = 0; i < n; ++i) {
    if (x.mask.row(i).all()) continue;

    // Rank all other rows by distance over mutually observed features.
    std::vector<std::pair<double, int>> order;
    order.reserve(static_cast<std::size_t>(n - 1));
    for (int r = 0; r < n; ++r) {
      if (r == i) continue;
      double sum = 0.0;
      int shared = 0;
      for (int j = 0; j < p; ++j) {
        if (!x.mask(i, j) || !x.mask(r, j)) continue;
        const double diff = x.values(i, j) - x.values(r, j);
        sum += diff * diff;
        ++shared;
      }
      if (shared == 0) continue;
      order.emplace_back(std::sqrt(sum), r);
    }
    std::sort(order.begin(), order.end(),
              [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
                return a.first != b.first ? a.first < b.first : a.second < b.second;
              });

    for (int j = 0; j < p; ++j) {
      if (x.mask(i, j)) continue;
      double sum = 0.0;
      int used = 0;
      for (const auto& [dist, r] : order) {
        if (!x.mask(r, j)) continue;  // donor misses this feature too
        sum += x.values(r, j);
        if (++used == k) break;
      }
      if (used == 0)
        throw algorithm_error("missing-data",
                              "no donor row observes feature " + std::to_string(j + 1) +
                                  " for row " + std::to_string(i + 1));
      out.values(i, j) = sum / used;
      out.mask(i, j) = true;
    }
  }
  return out;
}

namespace {

struct ColumnStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

ColumnStats masked_stats(const MaskedMatrix& x, int j) {
  ColumnStats s;
  for (int i = 0; i < x.n(); ++i) {
    if (!x.mask(i, j)) continue;
    s.min = std::min(s.min, x.values(i, j));
    s.max = std::max(s.max, x.values(i, j));
  }
  return s;
}

}  // namespace

PreprocessReport preprocess_microarray(const MaskedMatrix& x,
                                       const PreprocessConfig& cfg) {
  if (cfg.floor >= cfg.ceiling)
    throw algorithm_error("bad-data", "thresholding window is empty");
  if (cfg.min_ratio <= 0.0 || cfg.min_spread <= 0.0)
    throw algorithm_error("bad-data", "filter cutoffs must be positive");

  MaskedMatrix work = x;
  int imputed = 0;
  if (cfg.impute_first && !work.complete()) {
    for (int i = 0; i < work.n(); ++i)
      for (int j = 0; j < work.p(); ++j)
        if (!work.mask(i, j)) ++imputed;
    work = knn_impute(work, cfg.impute_k);
  }

  // Clamp observed values into the window.
  for (int i = 0; i < work.n(); ++i)
    for (int j = 0; j < work.p(); ++j)
      if (work.mask(i, j))
        work.values(i, j) = std::clamp(work.values(i, j), cfg.floor, cfg.ceiling);

  PreprocessReport report;
  for (int j = 0; j < work.p(); ++j) {
    const ColumnStats s = masked_stats(work, j);
    if (s.max / s.min <= cfg.min_ratio) continue;
    if (s.max - s.min <= cfg.min_spread) continue;
    report.kept_features.push_back(j);
  }
  if (report.kept_features.empty())
    throw algorithm_error("all-filtered", "every feature failed the variation filters");

  MaskedMatrix kept;
  kept.values.resize(work.n(), static_cast<Eigen::Index>(report.kept_features.size()));
  kept.mask.resize(work.n(), static_cast<Eigen::Index>(report.kept_features.size()));
  if (!work.feature_names.empty()) kept.feature_names.reserve(report.kept_features.size());
  for (std::size_t c = 0; c < report.kept_features.size(); ++c) {
    kept.values.col(static_cast<Eigen::Index>(c)) = work.values.col(report.kept_features[c]);
    kept.mask.col(static_cast<Eigen::Index>(c)) = work.mask.col(report.kept_features[c]);
    if (!work.feature_names.empty())
      kept.feature_names.push_back(
          work.feature_names[static_cast<std::size_t>(report.kept_features[c])]);
  }

  if (!cfg.impute_first && !kept.complete()) {
    for (int i = 0; i < kept.n(); ++i)
      for (int j = 0; j < kept.p(); ++j)
        if (!kept.mask(i, j)) ++imputed;
    kept = knn_impute(kept, cfg.impute_k);
    // Late-imputed values may land outside the window; clamp them too.
    for (int i = 0; i < kept.n(); ++i)
      for (int j = 0; j < kept.p(); ++j)
        kept.values(i, j) = std::clamp(kept.values(i, j), cfg.floor, cfg.ceiling);
  }

  if (cfg.log_transform) {
    for (int i = 0; i < kept.n(); ++i)
      for (int j = 0; j < kept.p(); ++j) {
        if (kept.values(i, j) <= 0.0)
          throw algorithm_error("bad-data",
                                "log transform requires positive values");
        kept.values(i, j) = std::log(kept.values(i, j));
      }
  }

  if (cfg.standardize) {
    for (int j = 0; j < kept.p(); ++j) {
      const double mean = kept.values.col(j).mean();
      const double var =
          (kept.values.col(j).array() - mean).square().sum() / (kept.n() - 1);
      const double sd = std::sqrt(var);
      if (sd == 0.0)
        throw algorithm_error("bad-data",
                              "feature " + std::to_string(j + 1) +
                                  " is constant after filtering; cannot standardize");
      kept.values.col(j) = (kept.values.col(j).array() - mean) / sd;
    }
  }

  report.imputed_cells = imputed;
  report.data = kept.to_data();
  return report;
}

}  // namespace shclust
