#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cobra/error.hpp"

namespace cobra {

using InstanceId = std::size_t;

/// Dense instance-by-feature matrix (row-major) with optional class labels.
///
/// Instance ids are row indices 0..size()-1. A Dataset is never mutated
/// after construction; `dedupe` and `normalize` return new datasets.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<double> values, std::size_t dim,
          std::optional<std::vector<std::string>> labels = std::nullopt,
          std::vector<std::string> feature_names = {})
      : values_(std::move(values)),
        dim_(dim),
        labels_(std::move(labels)),
        feature_names_(std::move(feature_names)) {
    if (dim_ == 0) throw DataError("dataset must have at least one feature");
    if (values_.size() % dim_ != 0)
      throw DataError("feature matrix size is not a multiple of the dimension");
    if (labels_ && labels_->size() != size())
      throw DataError("label count " + std::to_string(labels_->size()) +
                      " does not match instance count " +
                      std::to_string(size()));
    if (!feature_names_.empty() && feature_names_.size() != dim_)
      throw DataError("feature name count does not match the dimension");
  }

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(InstanceId i) const {
    return {values_.data() + i * dim_, dim_};
  }

  const std::vector<double>& values() const { return values_; }
  bool has_labels() const { return labels_.has_value(); }
  const std::vector<std::string>& labels() const {
    if (!labels_) throw DataError("dataset has no labels");
    return *labels_;
  }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<double> values_;
  std::size_t dim_ = 0;
  std::optional<std::vector<std::string>> labels_;
  std::vector<std::string> feature_names_;
};

struct CsvOptions {
  std::optional<std::string> label_column;
  char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double quotes group a field and "" escapes a quote.
inline std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

inline std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses CSV text with a mandatory header row. Errors name the 1-based data
/// row and feature column of the offending cell.
inline Dataset parse_csv(std::istream& in, const CsvOptions& opts = {}) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) {
      header = detail::split_record(line, opts.delimiter);
      break;
    }
  }
  if (header.empty()) throw DataError("CSV input has no header row");
  if (!header.empty() && header[0].size() >= 3 &&
      header[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
    header[0].erase(0, 3);

  std::optional<std::size_t> label_idx;
  if (opts.label_column) {
    const auto it = std::find(header.begin(), header.end(), *opts.label_column);
    if (it == header.end())
      throw DataError("label column '" + *opts.label_column +
                      "' not found in header");
    label_idx = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) names.push_back(header[c]);
  if (names.empty()) throw DataError("CSV has no feature columns");

  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_record(line, opts.delimiter);
    if (fields.size() != header.size())
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    std::size_t feature_col = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_idx) {
        labels.push_back(fields[c]);
        continue;
      }
      ++feature_col;
      const auto v = detail::parse_real(fields[c]);
      if (!v)
        throw DataError("row " + std::to_string(row) + ", column " +
                        std::to_string(feature_col) + " ('" + header[c] +
                        "'): '" + fields[c] + "' is not a finite number");
      values.push_back(*v);
    }
  }
  std::optional<std::vector<std::string>> lab;
  if (label_idx) lab = std::move(labels);
  const std::size_t dim = names.size();
  return Dataset(std::move(values), dim, std::move(lab), std::move(names));
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return parse_csv(in, opts);
}

/// Keeps the first occurrence of every distinct feature vector (exact
/// comparison on the values as given).
inline Dataset dedupe(const Dataset& d) {
  const std::size_t m = d.dim();
  auto less = [&d](InstanceId a, InstanceId b) {
    const auto ra = d.row(a);
    const auto rb = d.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                        rb.end());
  };
  std::set<InstanceId, decltype(less)> seen(less);
  std::vector<double> values;
  std::vector<std::string> labels;
  for (InstanceId i = 0; i < d.size(); ++i) {
    if (!seen.insert(i).second) continue;
    const auto r = d.row(i);
    values.insert(values.end(), r.begin(), r.end());
    if (d.has_labels()) labels.push_back(d.labels()[i]);
  }
  std::optional<std::vector<std::string>> lab;
  if (d.has_labels()) lab = std::move(labels);
  return Dataset(std::move(values), m, std::move(lab), d.feature_names());
}

/// Per-feature min-max scaling into [0, 1]; constant features map to 0.
inline Dataset normalize(const Dataset& d) {
  const std::size_t n = d.size();
  const std::size_t m = d.dim();
  std::vector<double> lo(m, 0.0), hi(m, 0.0);
  for (std::size_t j = 0; j < m && n > 0; ++j) {
    lo[j] = hi[j] = d.row(0)[j];
    for (InstanceId i = 1; i < n; ++i) {
      lo[j] = std::min(lo[j], d.row(i)[j]);
      hi[j] = std::max(hi[j], d.row(i)[j]);
    }
  }
  std::vector<double> out(d.values().size());
  for (InstanceId i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double range = hi[j] - lo[j];
      out[i * m + j] = range > 0.0 ? (d.row(i)[j] - lo[j]) / range : 0.0;
    }
  }
  std::optional<std::vector<std::string>> lab;
  if (d.has_labels()) lab = d.labels();
  return Dataset(std::move(out), m, std::move(lab), d.feature_names());
}

inline double squared_distance(std::span<const double> x,
                               std::span<const double> y) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = x[j] - y[j];
    s += t * t;
  }
  return s;
}

/// Euclidean distance between two feature vectors of equal length.
inline double distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ConfigError("distance: vector lengths differ (" +
                      std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  return std::sqrt(squared_distance(x, y));
}

/// 64-bit FNV-1a over the shape, feature bit patterns and labels; printed as
/// 16 hex digits.
inline std::string fingerprint(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t n = d.size(), m = d.dim();
  mix(&n, sizeof n);
  mix(&m, sizeof m);
  for (double v : d.values()) mix(&v, sizeof v);
  if (d.has_labels())
    for (const auto& l : d.labels()) mix(l.data(), l.size() + 1);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cobra
