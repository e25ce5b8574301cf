#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cobra/dataset.hpp"
#include "cobra/error.hpp"

namespace cobra {

enum class Relation { MustLink, CannotLink, Unknown };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::MustLink: return "must-link";
    case Relation::CannotLink: return "cannot-link";
    case Relation::Unknown: return "unknown";
  }
  return "unknown";
}

inline Relation relation_from_string(const std::string& s) {
  if (s == "must-link") return Relation::MustLink;
  if (s == "cannot-link") return Relation::CannotLink;
  throw DataError("unknown answer '" + s + "' (expected must-link or cannot-link)");
}

using IdPair = std::pair<InstanceId, InstanceId>;

inline IdPair ordered(InstanceId a, InstanceId b) {
  return a < b ? IdPair{a, b} : IdPair{b, a};
}

struct DerivedStats {
  std::size_t queried = 0;
  std::size_t derivable_pairs = 0;
  bool operator==(const DerivedStats&) const = default;
};

/// Must-link / cannot-link constraints closed under transitivity and
/// entailment.
///
/// Must-link components live in a union-find forest. Cannot-links are edges
/// between component roots and are re-pointed at the new root on every union,
/// so relation() needs two finds and one set lookup.
class ConstraintStore {
 public:
  void add_must_link(InstanceId a, InstanceId b) {
    const InstanceId ra = find(touch(a));
    const InstanceId rb = find(touch(b));
    if (ra != rb && cannot_[ra].count(rb))
      throw ContradictionError("must-link(" + std::to_string(a) + ", " +
                               std::to_string(b) +
                               ") contradicts a derived cannot-link");
    if (a != b) queried_.insert(ordered(a, b));
    unite(ra, rb);
  }

  void add_cannot_link(InstanceId a, InstanceId b) {
    if (a == b)
      throw ContradictionError("cannot-link of instance " + std::to_string(a) +
                               " with itself");
    const InstanceId ra = find(touch(a));
    const InstanceId rb = find(touch(b));
    if (ra == rb)
      throw ContradictionError("cannot-link(" + std::to_string(a) + ", " +
                               std::to_string(b) +
                               ") contradicts a derived must-link");
    queried_.insert(ordered(a, b));
    cannot_[ra].insert(rb);
    cannot_[rb].insert(ra);
  }

  void add(InstanceId a, InstanceId b, Relation r) {
    if (r == Relation::MustLink)
      add_must_link(a, b);
    else if (r == Relation::CannotLink)
      add_cannot_link(a, b);
    else
      throw ConfigError("cannot add an Unknown constraint");
  }

  /// Relation derivable from stored constraints. Never consults an oracle.
  Relation relation(InstanceId a, InstanceId b) const {
    if (a == b) return Relation::MustLink;
    const auto ia = parent_.find(a);
    const auto ib = parent_.find(b);
    if (ia == parent_.end() || ib == parent_.end()) return Relation::Unknown;
    const InstanceId ra = root(a);
    const InstanceId rb = root(b);
    if (ra == rb) return Relation::MustLink;
    const auto it = cannot_.find(ra);
    if (it != cannot_.end() && it->second.count(rb)) return Relation::CannotLink;
    return Relation::Unknown;
  }

  /// Ids of the must-link component containing `a` (ascending).
  std::vector<InstanceId> component(InstanceId a) const {
    std::vector<InstanceId> out;
    if (!parent_.count(a)) return {a};
    const InstanceId r = root(a);
    for (InstanceId id : seen_)
      if (root(id) == r) out.push_back(id);
    return out;
  }

  const std::set<IdPair>& queried_pairs() const { return queried_; }
  const std::vector<InstanceId>& seen_ids() const { return seen_; }

  /// Number of queried pairs and of pairs (over seen ids) with a known
  /// relation.
  DerivedStats derived_stats() const {
    std::map<InstanceId, std::size_t> comp_size;
    for (InstanceId id : seen_) ++comp_size[root(id)];
    std::size_t pairs = 0;
    for (const auto& [r, s] : comp_size) pairs += s * (s - 1) / 2;
    for (const auto& [r, others] : cannot_) {
      const auto it = comp_size.find(r);
      if (it == comp_size.end()) continue;
      for (InstanceId o : others)
        if (r < o) pairs += it->second * comp_size.at(o);
    }
    return {queried_.size(), pairs};
  }

 private:
  InstanceId touch(InstanceId a) {
    if (parent_.emplace(a, a).second) {
      rank_[a] = 0;
      seen_.push_back(a);
    }
    return a;
  }

  InstanceId root(InstanceId a) const {
    while (true) {
      const InstanceId p = parent_.at(a);
      if (p == a) return a;
      a = p;
    }
  }

  InstanceId find(InstanceId a) {
    InstanceId r = root(a);
    while (parent_[a] != r) {
      const InstanceId next = parent_[a];
      parent_[a] = r;
      a = next;
    }
    return r;
  }

  void unite(InstanceId ra, InstanceId rb) {
    if (ra == rb) return;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    parent_[rb] = ra;
    const auto it = cannot_.find(rb);
    if (it == cannot_.end()) return;
    const std::set<InstanceId> moved = std::move(it->second);
    cannot_.erase(it);
    for (InstanceId o : moved) {
      auto& back = cannot_[o];
      back.erase(rb);
      back.insert(ra);
      cannot_[ra].insert(o);
    }
  }

  std::unordered_map<InstanceId, InstanceId> parent_;
  std::unordered_map<InstanceId, unsigned> rank_;
  std::unordered_map<InstanceId, std::set<InstanceId>> cannot_;
  std::set<IdPair> queried_;
  std::vector<InstanceId> seen_;
};

}  // namespace cobra
