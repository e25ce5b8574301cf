#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cobra/cobra.hpp"
#include "cobra/evaluation.hpp"

namespace cobra {

inline constexpr int kSchemaVersion = 1;

using ojson = nlohmann::ordered_json;

/// Parameters that determine a run's outcome.
struct RunSettings {
  std::string data;
  std::string label_column;
  char delimiter = ',';
  std::size_t n_super = 0;
  std::uint64_t seed = 0;
  bool operator==(const RunSettings&) const = default;
};

struct ResultDocument {
  int schema_version = kSchemaVersion;
  std::string dataset_fingerprint;
  RunSettings config;
  std::vector<std::size_t> assignment;
  std::vector<std::vector<InstanceId>> super_instances;
  std::vector<InstanceId> medoids;
  QueryLog query_log;
  std::size_t oracle_count = 0;
  std::size_t n_clusters_found = 0;
  DerivedStats derived_stats;
  double wall_time = 0.0;
  bool operator==(const ResultDocument&) const = default;
};

inline ResultDocument make_result_document(const Dataset& d,
                                           const RunSettings& cfg,
                                           const CobraResult& r,
                                           double wall_time) {
  ResultDocument doc;
  doc.dataset_fingerprint = fingerprint(d);
  doc.config = cfg;
  doc.assignment = r.clustering.assignment;
  doc.super_instances = r.super_instances.groups;
  doc.medoids = r.super_instances.medoids;
  doc.query_log = r.log;
  doc.oracle_count = r.log.oracle_count();
  doc.n_clusters_found = r.clustering.n_clusters();
  doc.derived_stats = r.store.derived_stats();
  doc.wall_time = wall_time;
  return doc;
}

inline ojson to_json(const QueryLog& log) {
  ojson arr = ojson::array();
  for (const auto& e : log.entries) {
    ojson j;
    j["a"] = e.a;
    j["b"] = e.b;
    j["answer"] = to_string(e.answer);
    j["source"] = e.source == AnswerSource::Oracle ? "oracle" : "closure";
    arr.push_back(std::move(j));
  }
  return arr;
}

inline QueryLog query_log_from_json(const ojson& arr) {
  QueryLog log;
  for (const auto& j : arr) {
    QueryEntry e;
    e.a = j.at("a").get<InstanceId>();
    e.b = j.at("b").get<InstanceId>();
    e.answer = relation_from_string(j.at("answer").get<std::string>());
    const auto src = j.value("source", std::string("oracle"));
    if (src != "oracle" && src != "closure")
      throw DataError("unknown query source '" + src + "'");
    e.source = src == "oracle" ? AnswerSource::Oracle : AnswerSource::Closure;
    log.entries.push_back(e);
  }
  return log;
}

inline ojson to_json(const RunSettings& c) {
  ojson j;
  j["data"] = c.data;
  j["label_column"] = c.label_column;
  j["delimiter"] = std::string(1, c.delimiter);
  j["n_super"] = c.n_super;
  j["seed"] = c.seed;
  return j;
}

inline RunSettings run_settings_from_json(const ojson& j) {
  RunSettings c;
  c.data = j.at("data").get<std::string>();
  c.label_column = j.at("label_column").get<std::string>();
  const auto delim = j.at("delimiter").get<std::string>();
  if (delim.size() != 1) throw DataError("delimiter must be one character");
  c.delimiter = delim[0];
  c.n_super = j.at("n_super").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline ojson to_json(const ResultDocument& doc) {
  ojson j;
  j["schema_version"] = doc.schema_version;
  j["dataset_fingerprint"] = doc.dataset_fingerprint;
  j["config"] = to_json(doc.config);
  j["assignment"] = doc.assignment;
  j["super_instances"] = doc.super_instances;
  j["medoids"] = doc.medoids;
  j["query_log"] = to_json(doc.query_log);
  j["oracle_count"] = doc.oracle_count;
  j["n_clusters_found"] = doc.n_clusters_found;
  j["derived_stats"] = {{"queried", doc.derived_stats.queried},
                        {"derivable_pairs", doc.derived_stats.derivable_pairs}};
  j["wall_time"] = doc.wall_time;
  return j;
}

inline ResultDocument result_document_from_json(const ojson& j) {
  try {
    ResultDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != kSchemaVersion)
      throw DataError("unsupported result schema version " +
                      std::to_string(doc.schema_version));
    doc.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    doc.config = run_settings_from_json(j.at("config"));
    doc.assignment = j.at("assignment").get<std::vector<std::size_t>>();
    doc.super_instances =
        j.at("super_instances").get<std::vector<std::vector<InstanceId>>>();
    doc.medoids = j.at("medoids").get<std::vector<InstanceId>>();
    doc.query_log = query_log_from_json(j.at("query_log"));
    doc.oracle_count = j.at("oracle_count").get<std::size_t>();
    doc.n_clusters_found = j.at("n_clusters_found").get<std::size_t>();
    doc.derived_stats.queried =
        j.at("derived_stats").at("queried").get<std::size_t>();
    doc.derived_stats.derivable_pairs =
        j.at("derived_stats").at("derivable_pairs").get<std::size_t>();
    doc.wall_time = j.at("wall_time").get<double>();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed result document: ") + e.what());
  }
}

inline std::string dump(const ResultDocument& doc) {
  return to_json(doc).dump(2) + "\n";
}

inline ResultDocument parse_result_document(const std::string& text) {
  try {
    return result_document_from_json(ojson::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("result document is not valid JSON: ") + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Benchmark report

struct BenchRow {
  std::size_t n_super = 0;
  std::vector<FoldResult> folds;
};

struct BenchReport {
  int schema_version = kSchemaVersion;
  std::string dataset_fingerprint;
  std::string data;
  std::string label_column;
  std::size_t k_folds = 0;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
};

namespace detail {

template <typename F>
Summary summarize_field(const std::vector<FoldResult>& folds, F f) {
  std::vector<double> xs;
  for (const auto& r : folds) xs.push_back(static_cast<double>(f(r)));
  return summarize(xs);
}

}  // namespace detail

inline ojson to_json(const BenchReport& rep) {
  ojson j;
  j["schema_version"] = rep.schema_version;
  j["dataset_fingerprint"] = rep.dataset_fingerprint;
  j["config"] = {{"data", rep.data},
                 {"label_column", rep.label_column},
                 {"folds", rep.k_folds},
                 {"seed", rep.seed}};
  ojson rows = ojson::array();
  for (const auto& row : rep.rows) {
    ojson r;
    r["n_super"] = row.n_super;
    ojson folds = ojson::array();
    for (const auto& f : row.folds) {
      folds.push_back({{"fold_index", f.fold_index},
                       {"ari_test", f.ari_test},
                       {"oracle_count", f.oracle_count},
                       {"n_clusters_found", f.n_clusters_found},
                       {"n_super_effective", f.n_super_effective},
                       {"wall_time", f.wall_time}});
    }
    r["folds"] = std::move(folds);
    auto agg = [&](auto f) {
      const auto s = detail::summarize_field(row.folds, f);
      return ojson{{"mean", s.mean}, {"std", s.stddev}};
    };
    r["ari_test"] = agg([](const FoldResult& f) { return f.ari_test; });
    r["oracle_count"] = agg([](const FoldResult& f) { return f.oracle_count; });
    r["n_clusters_found"] =
        agg([](const FoldResult& f) { return f.n_clusters_found; });
    r["wall_time"] = agg([](const FoldResult& f) { return f.wall_time; });
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

/// Aligned plain-text summary, one line per n_super setting.
inline std::string format_table(const BenchReport& rep) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%8s  %16s  %16s  %12s  %10s\n", "n_super",
                "queries (mean)", "ARI test (mean)", "clusters", "time [s]");
  out += buf;
  for (const auto& row : rep.rows) {
    const auto q = detail::summarize_field(
        row.folds, [](const FoldResult& f) { return f.oracle_count; });
    const auto a = detail::summarize_field(
        row.folds, [](const FoldResult& f) { return f.ari_test; });
    const auto c = detail::summarize_field(
        row.folds, [](const FoldResult& f) { return f.n_clusters_found; });
    const auto t = detail::summarize_field(
        row.folds, [](const FoldResult& f) { return f.wall_time; });
    std::snprintf(buf, sizeof buf, "%8zu  %9.1f ±%5.1f  %9.3f ±%5.3f  %12.1f  %10.4f\n",
                  row.n_super, q.mean, q.stddev, a.mean, a.stddev, c.mean, t.mean);
    out += buf;
  }
  return out;
}

}  // namespace cobra
