#pragma once

#include <chrono>
#include <string>

#include "cobra/cobra.hpp"
#include "cobra/dataset.hpp"
#include "cobra/result_io.hpp"

namespace cobra {

/// Deduplicated data in original units plus its normalized counterpart.
/// Instance ids are shared by both.
struct PreparedData {
  Dataset raw;
  Dataset normalized;
};

/// load_csv, then dedupe on raw values, then min-max normalize.
inline PreparedData prepare(const std::string& path, const CsvOptions& opts = {}) {
  PreparedData p;
  p.raw = dedupe(load_csv(path, opts));
  p.normalized = normalize(p.raw);
  return p;
}

/// Runs COBRA on prepared data and packages the result document. With
/// `timing` off, wall_time is written as 0 so documents compare byte-exact.
inline ResultDocument cluster_document(const PreparedData& data,
                                       const RunSettings& cfg, Oracle& oracle,
                                       bool timing = true,
                                       const CobraHooks& hooks = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto res = run_cobra(data.normalized, cfg.n_super, oracle, cfg.seed,
                             std::nullopt, hooks);
  const double secs =
      timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                   .count()
             : 0.0;
  return make_result_document(data.normalized, cfg, res, secs);
}

}  // namespace cobra
