#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library implementations they check.

#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "cobra/constraint_store.hpp"

namespace cobra::testing {

struct Constraint {
  InstanceId a, b;
  bool must_link;
};

/// Closure by explicit graph search: must-link components via BFS, then a
/// cannot-link between two components iff some stored cannot-link edge joins
/// a member of each.
class BruteClosure {
 public:
  BruteClosure(std::size_t n_ids, const std::vector<Constraint>& cs) : comp_(n_ids) {
    std::vector<std::vector<InstanceId>> adj(n_ids);
    for (const auto& c : cs)
      if (c.must_link) {
        adj[c.a].push_back(c.b);
        adj[c.b].push_back(c.a);
      }
    std::vector<bool> done(n_ids, false);
    std::size_t next = 0;
    for (InstanceId s = 0; s < n_ids; ++s) {
      if (done[s]) continue;
      std::queue<InstanceId> q;
      q.push(s);
      done[s] = true;
      while (!q.empty()) {
        const InstanceId u = q.front();
        q.pop();
        comp_[u] = next;
        for (InstanceId v : adj[u])
          if (!done[v]) {
            done[v] = true;
            q.push(v);
          }
      }
      ++next;
    }
    cl_.assign(next, std::vector<bool>(next, false));
    for (const auto& c : cs)
      if (!c.must_link) cl_[comp_[c.a]][comp_[c.b]] = cl_[comp_[c.b]][comp_[c.a]] = true;
    for (const auto& c : cs) {
      seen_.resize(n_ids, false);
      seen_[c.a] = seen_[c.b] = true;
    }
  }

  Relation relation(InstanceId a, InstanceId b) const {
    if (a == b) return Relation::MustLink;
    if (!is_seen(a) || !is_seen(b)) return Relation::Unknown;
    if (comp_[a] == comp_[b]) return Relation::MustLink;
    if (cl_[comp_[a]][comp_[b]]) return Relation::CannotLink;
    return Relation::Unknown;
  }

  bool is_seen(InstanceId a) const { return a < seen_.size() && seen_[a]; }

  /// Pairs among seen ids with a known relation, by enumeration.
  std::size_t derivable_pairs() const {
    std::size_t n = 0;
    for (InstanceId a = 0; a < seen_.size(); ++a)
      for (InstanceId b = a + 1; b < seen_.size(); ++b)
        if (is_seen(a) && is_seen(b) && relation(a, b) != Relation::Unknown) ++n;
    return n;
  }

 private:
  std::vector<std::size_t> comp_;
  std::vector<std::vector<bool>> cl_;
  std::vector<bool> seen_;
};

/// Random constraint sequence that is consistent by construction: answers
/// come from hidden labels.
inline std::vector<Constraint> random_consistent_constraints(std::mt19937_64& rng,
                                                             std::size_t n_ids,
                                                             std::size_t n_classes,
                                                             std::size_t count) {
  std::vector<std::size_t> label(n_ids);
  for (auto& l : label) l = rng() % n_classes;
  std::vector<Constraint> out;
  while (out.size() < count) {
    const InstanceId a = rng() % n_ids, b = rng() % n_ids;
    if (a == b) continue;
    out.push_back({a, b, label[a] == label[b]});
  }
  return out;
}

/// Adjusted Rand index straight from pair counting: every unordered pair is
/// classified as together/apart in each partition, then the adjustment uses
/// the hypergeometric expectation of the "together in both" count.
template <typename A, typename B>
double brute_ari(const std::vector<A>& x, const std::vector<B>& y) {
  const std::size_t n = x.size();
  double both = 0, in_x = 0, in_y = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sx = x[i] == x[j], sy = y[i] == y[j];
      both += sx && sy;
      in_x += sx;
      in_y += sy;
      pairs += 1;
    }
  const double expected = pairs > 0 ? in_x * in_y / pairs : 0.0;
  const double max_index = 0.5 * (in_x + in_y);
  if (max_index - expected == 0.0) return 1.0;
  return (both - expected) / (max_index - expected);
}

}  // namespace cobra::testing
