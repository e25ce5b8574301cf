#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include "cobra/constraint_store.hpp"
#include "cobra/dataset.hpp"
#include "cobra/oracle.hpp"
#include "cobra/query_log.hpp"
#include "cobra/super_instances.hpp"

namespace cobra {

/// Partition of super-instances into clusters plus the induced instance-level
/// assignment. Clusters hold ascending super-instance indices and are ordered
/// by their smallest index.
struct Clustering {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> assignment;

  std::size_t n_clusters() const { return clusters.size(); }
  bool operator==(const Clustering&) const = default;
};

inline Clustering make_clustering(std::vector<std::vector<std::size_t>> clusters,
                                  const SuperInstanceSet& si,
                                  std::size_t n_instances) {
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  Clustering out;
  out.assignment.assign(n_instances, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t s : clusters[c])
      for (InstanceId i : si.groups[s]) out.assignment[i] = c;
  out.clusters = std::move(clusters);
  return out;
}

/// Single-linkage distance between two sets of representatives.
inline double cluster_distance(const std::vector<InstanceId>& reps1,
                               const std::vector<InstanceId>& reps2,
                               const Dataset& d) {
  if (reps1.empty() || reps2.empty())
    throw ConfigError("cluster_distance: empty cluster");
  double best = std::numeric_limits<double>::infinity();
  for (InstanceId a : reps1)
    for (InstanceId b : reps2) best = std::min(best, distance(d.row(a), d.row(b)));
  return best;
}

/// Closest representative pair (first from reps1, second from reps2); equal
/// distances resolve to the lexicographically smallest id pair.
inline IdPair closest_rep_pair(const std::vector<InstanceId>& reps1,
                               const std::vector<InstanceId>& reps2,
                               const Dataset& d) {
  if (reps1.empty() || reps2.empty())
    throw ConfigError("closest_rep_pair: empty cluster");
  IdPair best{reps1.front(), reps2.front()};
  double best_d = std::numeric_limits<double>::infinity();
  for (InstanceId a : reps1) {
    for (InstanceId b : reps2) {
      const double dab = distance(d.row(a), d.row(b));
      if (dab < best_d || (dab == best_d && IdPair{a, b} < best)) {
        best_d = dab;
        best = {a, b};
      }
    }
  }
  return best;
}

struct QueryBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool operator==(const QueryBounds&) const = default;
};

inline std::size_t choose2(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Query-count estimate: n_super - n_clusters + C(n_clusters, 2) up to
/// C(n_super, 2).
inline QueryBounds query_bounds(std::size_t n_super, std::size_t n_clusters) {
  if (n_clusters < 1 || n_clusters > n_super)
    throw ConfigError("query_bounds: need 1 <= n_clusters <= n_super (got " +
                      std::to_string(n_clusters) + ", " +
                      std::to_string(n_super) + ")");
  return {n_super - n_clusters + choose2(n_clusters), choose2(n_super)};
}

struct CobraResult {
  SuperInstanceSet super_instances;
  Clustering clustering;
  QueryLog log;
  ConstraintStore store;
};

/// Optional observation points for callers that show progress.
struct CobraHooks {
  // Called right before each oracle query with the current cluster count and
  // the number of oracle queries answered so far.
  std::function<void(std::size_t n_clusters, std::size_t oracle_count)>
      before_query;
};

/// Merges super-instances into clusters by querying the oracle about the
/// closest representative pair of each cluster pair, closest pairs first.
///
/// Every outer pass sorts the cluster pairs that have no cannot-link between
/// them by single-linkage distance and walks them in order. A must-link
/// merges the two clusters and restarts the pass; a cannot-link is recorded
/// and the walk continues. Pairs whose relation already follows from earlier
/// answers are logged as closure answers without asking the oracle. The run
/// ends after a full pass with no merge.
inline CobraResult run_cobra(const Dataset& d, SuperInstanceSet si,
                             Oracle& oracle, const CobraHooks& hooks = {}) {
  const std::size_t ns = si.size();
  if (ns == 0) throw ConfigError("run_cobra: no super-instances");

  std::vector<std::vector<double>> dist(ns, std::vector<double>(ns, 0.0));
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t t = s + 1; t < ns; ++t)
      dist[s][t] = dist[t][s] =
          distance(d.row(si.medoids[s]), d.row(si.medoids[t]));

  std::vector<std::vector<std::size_t>> clusters(ns);
  for (std::size_t s = 0; s < ns; ++s) clusters[s] = {s};

  ConstraintStore store;
  QueryLog log;
  std::size_t asked = 0;

  struct Candidate {
    double distance;
    InstanceId lo, hi;    // closest representative pair, ordered ids
    std::size_t c1, c2;   // cluster positions
    InstanceId a, b;      // representative from c1, from c2
  };

  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<Candidate> pairs;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const InstanceId ri = si.medoids[clusters[i].front()];
        const InstanceId rj = si.medoids[clusters[j].front()];
        if (store.relation(ri, rj) == Relation::CannotLink) continue;
        Candidate best{std::numeric_limits<double>::infinity(), 0, 0, i, j, 0, 0};
        for (std::size_t s : clusters[i]) {
          for (std::size_t t : clusters[j]) {
            const InstanceId a = si.medoids[s], b = si.medoids[t];
            const double dst = dist[s][t];
            if (dst < best.distance ||
                (dst == best.distance && IdPair{a, b} < IdPair{best.a, best.b})) {
              best.distance = dst;
              best.a = a;
              best.b = b;
            }
          }
        }
        std::tie(best.lo, best.hi) = ordered(best.a, best.b);
        pairs.push_back(best);
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Candidate& x, const Candidate& y) {
      return std::tie(x.distance, x.lo, x.hi) < std::tie(y.distance, y.lo, y.hi);
    });

    for (const Candidate& p : pairs) {
      Relation r = store.relation(p.a, p.b);
      if (r == Relation::Unknown) {
        if (hooks.before_query) hooks.before_query(clusters.size(), asked);
        r = oracle.query(p.a, p.b);
        if (r == Relation::Unknown)
          throw ContradictionError("oracle returned no answer");
        store.add(p.a, p.b, r);
        ++asked;
        log.entries.push_back({p.a, p.b, r, AnswerSource::Oracle});
      } else {
        log.entries.push_back({p.a, p.b, r, AnswerSource::Closure});
      }
      if (r == Relation::MustLink) {
        auto& into = clusters[p.c1];
        into.insert(into.end(), clusters[p.c2].begin(), clusters[p.c2].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(p.c2));
        merged = true;
        break;
      }
    }
  }

  CobraResult out;
  out.clustering = make_clustering(std::move(clusters), si, d.size());
  out.super_instances = std::move(si);
  out.log = std::move(log);
  out.store = std::move(store);
  return out;
}

/// Builds super-instances and runs COBRA on them.
inline CobraResult run_cobra(const Dataset& d, std::size_t n_super,
                             Oracle& oracle, std::uint64_t seed,
                             const TrainMask& train = std::nullopt,
                             const CobraHooks& hooks = {}) {
  return run_cobra(d, build_super_instances(d, n_super, seed, train), oracle,
                   hooks);
}

}  // namespace cobra
