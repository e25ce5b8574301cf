// Command-line entry point: cluster, bench, baseline and serve.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 oracle contradiction or replay divergence.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cobra/evaluation.hpp"
#include "cobra/pipeline.hpp"
#include "cobra/result_io.hpp"
#include "cobra/service.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kOracle = 4 };

struct DataFlags {
  std::string data;
  std::string label_column;
  std::string delimiter = ",";
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool label_required) {
  cmd->add_option("--data", f.data, "CSV file with a header row")
      ->required()
      ->envname("COBRA_DATA");
  auto* label = cmd->add_option("--label-column", f.label_column,
                                "Name of the ground-truth label column")
                    ->envname("COBRA_LABEL_COLUMN");
  if (label_required) label->required();
  cmd->add_option("--delimiter", f.delimiter, "Field delimiter")
      ->envname("COBRA_DELIMITER");
}

cobra::CsvOptions csv_options(const DataFlags& f) {
  if (f.delimiter.size() != 1)
    throw cobra::ConfigError("--delimiter must be a single character");
  cobra::CsvOptions o;
  if (!f.label_column.empty()) o.label_column = f.label_column;
  o.delimiter = f.delimiter[0];
  return o;
}

std::vector<std::string> labels_or_throw(const cobra::Dataset& d) {
  if (!d.has_labels()) throw cobra::ConfigError("this command needs --label-column");
  return d.labels();
}

struct ClusterFlags {
  DataFlags data;
  std::size_t n_super = 25;
  std::uint64_t seed = 0;
  std::string oracle = "label";
  std::string replay;
  std::string out = "result.json";
  std::string save_log;
  bool no_timing = false;
};

int cmd_cluster(const ClusterFlags& f) {
  if (f.n_super < 2) throw cobra::ConfigError("--n-super must be at least 2");
  if (f.oracle == "label" && f.data.label_column.empty())
    throw cobra::ConfigError("--oracle label requires --label-column");
  if (f.oracle == "replay" && f.replay.empty())
    throw cobra::ConfigError("--oracle replay requires --replay <query log>");

  const auto data = cobra::prepare(f.data.data, csv_options(f.data));
  if (f.n_super > data.normalized.size())
    throw cobra::ConfigError("--n-super exceeds the number of distinct instances (" +
                             std::to_string(data.normalized.size()) + ")");

  std::unique_ptr<cobra::Oracle> oracle;
  if (f.oracle == "label")
    oracle = std::make_unique<cobra::LabelOracle>(labels_or_throw(data.normalized));
  else
    oracle = std::make_unique<cobra::ReplayOracle>(cobra::ReplayOracle::from_file(f.replay));

  cobra::RunSettings cfg{f.data.data, f.data.label_column, f.data.delimiter[0],
                         f.n_super, f.seed};
  const auto doc = cobra::cluster_document(data, cfg, *oracle, !f.no_timing);
  cobra::write_text_file(f.out, cobra::dump(doc));
  if (!f.save_log.empty()) {
    std::ofstream log(f.save_log);
    if (!log) throw cobra::ConfigError("cannot write '" + f.save_log + "'");
    cobra::write_ndjson(log, doc.query_log);
  }

  const auto bounds = cobra::query_bounds(doc.super_instances.size(), doc.n_clusters_found);
  std::printf("instances         %zu\n", doc.assignment.size());
  std::printf("super-instances   %zu\n", doc.super_instances.size());
  std::printf("oracle queries    %zu\n", doc.oracle_count);
  std::printf("clusters found    %zu\n", doc.n_clusters_found);
  std::printf("query bounds      [%zu, %zu] for %zu clusters\n", bounds.lower,
              bounds.upper, doc.n_clusters_found);
  if (data.normalized.has_labels())
    std::printf("ARI vs labels     %.4f\n",
                cobra::ari(doc.assignment, data.normalized.labels()));
  std::printf("result written to %s\n", f.out.c_str());
  return kOk;
}

struct BenchFlags {
  DataFlags data;
  std::vector<std::size_t> n_super{25, 50, 100};
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
};

int cmd_bench(const BenchFlags& f) {
  if (f.folds < 2) throw cobra::ConfigError("--folds must be at least 2");
  const auto data = cobra::prepare(f.data.data, csv_options(f.data));
  labels_or_throw(data.normalized);

  cobra::BenchReport rep;
  rep.dataset_fingerprint = cobra::fingerprint(data.normalized);
  rep.data = f.data.data;
  rep.label_column = f.data.label_column;
  rep.k_folds = f.folds;
  rep.seed = f.seed;
  for (std::size_t ns : f.n_super) {
    if (ns < 2) throw cobra::ConfigError("--n-super must be at least 2");
    if (ns > data.normalized.size()) {
      std::fprintf(stderr, "skipping n_super=%zu: only %zu instances\n", ns,
                   data.normalized.size());
      continue;
    }
    cobra::BenchRow row;
    row.n_super = ns;
    row.folds = cobra::cross_validate(data.normalized, {ns, f.folds, f.seed});
    if (f.no_timing)
      for (auto& fr : row.folds) fr.wall_time = 0.0;
    rep.rows.push_back(std::move(row));
  }
  std::cout << cobra::format_table(rep);
  if (!f.out.empty()) cobra::write_text_file(f.out, cobra::to_json(rep).dump(2) + "\n");
  return kOk;
}

struct BaselineFlags {
  DataFlags data;
  std::string strategy = "closest";
  std::uint64_t seed = 0;
};

int cmd_baseline(const BaselineFlags& f) {
  const auto data = cobra::prepare(f.data.data, csv_options(f.data));
  const auto labels = labels_or_throw(data.normalized);
  cobra::LabelOracle oracle(labels);
  cobra::BaselineResult r;
  if (f.strategy == "full")
    r = cobra::baseline_full(data.normalized, oracle);
  else if (f.strategy == "random")
    r = cobra::baseline_closure(data.normalized, oracle, cobra::RandomOrder{f.seed});
  else if (f.strategy == "closest")
    r = cobra::baseline_closure(data.normalized, oracle, cobra::ClosestFirst{});
  else
    throw cobra::ConfigError("unknown --strategy '" + f.strategy + "'");
  const auto stats = r.store.derived_stats();
  std::printf("instances         %zu\n", data.normalized.size());
  std::printf("total pairs       %zu\n", cobra::choose2(data.normalized.size()));
  std::printf("oracle queries    %zu\n", r.oracle_count);
  std::printf("derivable pairs   %zu\n", stats.derivable_pairs);
  std::printf("ARI vs labels     %.4f\n", cobra::ari(r.assignment, labels));
  return kOk;
}

struct ServeFlags {
  DataFlags data;
  std::size_t n_super = 25;
  std::uint64_t seed = 0;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string ui;
  std::size_t max_sessions = 8;
};

cobra::SessionService* g_service = nullptr;

extern "C" void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const ServeFlags& f) {
  if (f.n_super < 2) throw cobra::ConfigError("--n-super must be at least 2");
  auto data = std::make_shared<cobra::PreparedData>(
      cobra::prepare(f.data.data, csv_options(f.data)));
  if (f.n_super > data->normalized.size())
    throw cobra::ConfigError("--n-super exceeds the number of distinct instances");
  cobra::ServiceOptions opts;
  opts.sessions.max_active = f.max_sessions;
  opts.static_dir = f.ui;
  cobra::SessionService service(
      data, {f.data.data, f.data.label_column, f.data.delimiter[0], f.n_super, f.seed},
      opts);
  const int port = service.bind(f.host, f.port);
  if (port < 0) throw cobra::ConfigError("cannot bind " + f.host + ":" + std::to_string(f.port));
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::printf("serving %zu instances on http://%s:%d\n", data->normalized.size(),
              f.host.c_str(), port);
  std::fflush(stdout);
  service.listen();
  g_service = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COBRA: active constraint-based clustering with super-instances"};
  app.require_subcommand(1);

  ClusterFlags cf;
  auto* cluster = app.add_subcommand("cluster", "Cluster a dataset and write a result document");
  add_data_flags(cluster, cf.data, false);
  cluster->add_option("--n-super", cf.n_super, "Number of super-instances")->envname("COBRA_N_SUPER");
  cluster->add_option("--seed", cf.seed, "K-means seed")->envname("COBRA_SEED");
  cluster->add_option("--oracle", cf.oracle, "Answer source")
      ->check(CLI::IsMember({"label", "replay"}))
      ->envname("COBRA_ORACLE");
  cluster->add_option("--replay", cf.replay, "Query log (NDJSON) for --oracle replay")
      ->envname("COBRA_REPLAY");
  cluster->add_option("--out", cf.out, "Result document path")->envname("COBRA_OUT");
  cluster->add_option("--save-log", cf.save_log, "Also write the oracle queries as NDJSON");
  cluster->add_flag("--no-timing", cf.no_timing, "Write wall_time as 0 for byte-stable output");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Constrained cross-validation benchmark");
  add_data_flags(bench, bf.data, true);
  bench->add_option("--n-super", bf.n_super, "Super-instance counts")->envname("COBRA_N_SUPER");
  bench->add_option("--folds", bf.folds, "Number of folds")->envname("COBRA_FOLDS");
  bench->add_option("--seed", bf.seed, "Seed for folds and K-means")->envname("COBRA_SEED");
  bench->add_option("--out", bf.out, "Write the JSON report here")->envname("COBRA_OUT");
  bench->add_flag("--no-timing", bf.no_timing, "Write wall_time as 0 for byte-stable output");

  BaselineFlags lf;
  auto* baseline = app.add_subcommand("baseline", "Count queries of a pairwise baseline strategy");
  add_data_flags(baseline, lf.data, true);
  baseline->add_option("--strategy", lf.strategy, "full, random or closest")
      ->check(CLI::IsMember({"full", "random", "closest"}))
      ->envname("COBRA_STRATEGY");
  baseline->add_option("--seed", lf.seed, "Seed for the random ordering")->envname("COBRA_SEED");

  ServeFlags sf;
  auto* serve = app.add_subcommand("serve", "Run the interactive session service");
  add_data_flags(serve, sf.data, false);
  serve->add_option("--n-super", sf.n_super, "Default number of super-instances")
      ->envname("COBRA_N_SUPER");
  serve->add_option("--seed", sf.seed, "Default K-means seed")->envname("COBRA_SEED");
  serve->add_option("--port", sf.port, "TCP port (0 picks a free one)")->envname("COBRA_PORT");
  serve->add_option("--host", sf.host, "Bind address")->envname("COBRA_HOST");
  serve->add_option("--ui", sf.ui, "Directory with the web UI bundle")->envname("COBRA_UI");
  serve->add_option("--max-sessions", sf.max_sessions, "Concurrent session limit")
      ->envname("COBRA_MAX_SESSIONS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*cluster) return cmd_cluster(cf);
    if (*bench) return cmd_bench(bf);
    if (*baseline) return cmd_baseline(lf);
    if (*serve) return cmd_serve(sf);
  } catch (const cobra::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const cobra::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kData;
  } catch (const cobra::ContradictionError& e) {
    std::fprintf(stderr, "oracle contradiction: %s\n", e.what());
    return kOracle;
  } catch (const cobra::ReplayDivergence& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kOracle;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
