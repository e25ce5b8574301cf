#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "cobra/cobra.hpp"
#include "cobra/random.hpp"

namespace cobra {

/// Adjusted Rand index of two assignments over `subset` (all ids when
/// omitted). Two single-cluster partitions score 1.
template <typename A, typename B>
double ari(const std::vector<A>& pred, const std::vector<B>& truth,
           const std::optional<std::vector<InstanceId>>& subset = std::nullopt) {
  std::vector<InstanceId> ids;
  if (subset) {
    ids = *subset;
  } else {
    if (pred.size() != truth.size())
      throw ConfigError("ari: assignments differ in length");
    ids.resize(pred.size());
    for (InstanceId i = 0; i < ids.size(); ++i) ids[i] = i;
  }
  std::map<A, std::size_t> pi;
  std::map<B, std::size_t> ti;
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  for (InstanceId i : ids) {
    if (i >= pred.size() || i >= truth.size())
      throw ConfigError("ari: instance " + std::to_string(i) +
                        " missing from an assignment");
    const auto p = pi.emplace(pred[i], pi.size()).first->second;
    const auto t = ti.emplace(truth[i], ti.size()).first->second;
    table[{p, t}] += 1.0;
  }
  auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::vector<double> rows(pi.size(), 0.0), cols(ti.size(), 0.0);
  double index = 0.0;
  for (const auto& [k, v] : table) {
    index += c2(v);
    rows[k.first] += v;
    cols[k.second] += v;
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double r : rows) sum_a += c2(r);
  for (double c : cols) sum_b += c2(c);
  const double n = static_cast<double>(ids.size());
  const double total = c2(n);
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

struct Fold {
  std::vector<InstanceId> train;
  std::vector<InstanceId> test;
};

/// Shuffled k-fold split. Test sets are disjoint, cover 0..n-1 and differ in
/// size by at most one (the first n % k folds get the extra instance).
inline std::vector<Fold> make_folds(std::size_t n, std::size_t k_folds,
                                    std::uint64_t seed) {
  if (k_folds < 2) throw ConfigError("folds must be at least 2");
  if (n < k_folds)
    throw ConfigError("cannot split " + std::to_string(n) + " instances into " +
                      std::to_string(k_folds) + " folds");
  std::vector<InstanceId> order(n);
  for (InstanceId i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  std::vector<Fold> folds(k_folds);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k_folds; ++f) {
    const std::size_t size = n / k_folds + (f < n % k_folds ? 1 : 0);
    folds[f].test.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                         order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].test.begin(), folds[f].test.end());
    pos += size;
  }
  for (auto& f : folds) {
    std::vector<bool> in_test(n, false);
    for (InstanceId i : f.test) in_test[i] = true;
    for (InstanceId i = 0; i < n; ++i)
      if (!in_test[i]) f.train.push_back(i);
  }
  return folds;
}

struct FoldResult {
  std::size_t fold_index = 0;
  double ari_test = 0.0;
  std::size_t oracle_count = 0;
  std::size_t n_clusters_found = 0;
  std::size_t n_super_effective = 0;
  double wall_time = 0.0;
  bool operator==(const FoldResult&) const = default;
};

struct CrossValidationOptions {
  std::size_t n_super = 25;
  std::size_t k_folds = 5;
  std::uint64_t seed = 0;
};

/// Constrained cross-validation: per fold, super-instances are built on all
/// data with medoids restricted to training instances, COBRA runs against the
/// label oracle, and ARI is scored on the held-out test instances only.
/// Throws if any oracle query touches a test instance.
inline std::vector<FoldResult> cross_validate(const Dataset& d,
                                              const CrossValidationOptions& opt) {
  const auto& labels = d.labels();
  const auto folds = make_folds(d.size(), opt.k_folds, opt.seed);
  std::vector<FoldResult> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto start = std::chrono::steady_clock::now();
    const auto mask = make_mask(d.size(), folds[f].train);
    LabelOracle oracle(labels);
    const std::size_t n_super = std::min(opt.n_super, d.size());
    const auto res = run_cobra(d, n_super, oracle, opt.seed + f, mask);
    for (const auto& e : res.log.entries) {
      if (e.source != AnswerSource::Oracle) continue;
      if (!(*mask)[e.a] || !(*mask)[e.b])
        throw Error("protocol violation: fold " + std::to_string(f) +
                    " queried a test instance");
    }
    FoldResult fr;
    fr.fold_index = f;
    fr.ari_test = ari(res.clustering.assignment, labels, folds[f].test);
    fr.oracle_count = res.log.oracle_count();
    fr.n_clusters_found = res.clustering.n_clusters();
    fr.n_super_effective = res.super_instances.size();
    fr.wall_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    out.push_back(fr);
  }
  return out;
}

/// Instance-level clustering produced by a baseline strategy.
struct BaselineResult {
  std::vector<std::size_t> assignment;
  std::size_t oracle_count = 0;
  ConstraintStore store;
};

namespace detail {

inline std::vector<std::size_t> components_assignment(const ConstraintStore& s,
                                                      std::size_t n) {
  std::vector<std::size_t> out(n, n);
  std::size_t next = 0;
  for (InstanceId i = 0; i < n; ++i) {
    if (out[i] != n) continue;
    for (InstanceId j : s.component(i))
      if (j < n) out[j] = next;
    out[i] = next;
    ++next;
  }
  return out;
}

}  // namespace detail

/// Queries every unordered pair; clusters are the must-link components.
inline BaselineResult baseline_full(const Dataset& d, Oracle& oracle) {
  BaselineResult r;
  for (InstanceId i = 0; i < d.size(); ++i) {
    for (InstanceId j = i + 1; j < d.size(); ++j) {
      r.store.add(i, j, oracle.query(i, j));
      ++r.oracle_count;
    }
  }
  r.assignment = detail::components_assignment(r.store, d.size());
  return r;
}

struct RandomOrder {
  std::uint64_t seed = 0;
};
struct ClosestFirst {};
using PairOrdering = std::variant<RandomOrder, ClosestFirst>;

/// All unordered pairs in the requested order. Closest-first sorts once by
/// distance, ties by id pair.
inline std::vector<IdPair> ordered_pairs(const Dataset& d, const PairOrdering& ord) {
  std::vector<IdPair> pairs;
  pairs.reserve(choose2(d.size()));
  for (InstanceId i = 0; i < d.size(); ++i)
    for (InstanceId j = i + 1; j < d.size(); ++j) pairs.emplace_back(i, j);
  if (const auto* r = std::get_if<RandomOrder>(&ord)) {
    Rng rng(r->seed);
    shuffle(pairs, rng);
  } else {
    std::vector<std::pair<double, IdPair>> keyed;
    keyed.reserve(pairs.size());
    for (const auto& p : pairs)
      keyed.emplace_back(distance(d.row(p.first), d.row(p.second)), p);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] = keyed[k].second;
  }
  return pairs;
}

/// Walks all pairs in order and queries only those whose relation does not
/// already follow by transitivity or entailment.
inline BaselineResult baseline_closure(const Dataset& d, Oracle& oracle,
                                       const PairOrdering& ord) {
  BaselineResult r;
  for (const auto& [a, b] : ordered_pairs(d, ord)) {
    if (r.store.relation(a, b) != Relation::Unknown) continue;
    r.store.add(a, b, oracle.query(a, b));
    ++r.oracle_count;
  }
  r.assignment = detail::components_assignment(r.store, d.size());
  return r;
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and population standard deviation.
inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.stddev += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(s.stddev / static_cast<double>(xs.size()));
  return s;
}

}  // namespace cobra
