#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cobra/constraint_store.hpp"
#include "cobra/query_log.hpp"

namespace cobra {

/// Answer source for pairwise queries. Implementations only answer; all
/// constraint bookkeeping happens in ConstraintStore.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Relation query(InstanceId a, InstanceId b) = 0;
};

/// Answers from ground-truth labels: must-link iff the labels are equal.
class LabelOracle final : public Oracle {
 public:
  explicit LabelOracle(std::vector<std::string> labels)
      : labels_(std::move(labels)) {}

  Relation query(InstanceId a, InstanceId b) override {
    if (a >= labels_.size() || b >= labels_.size())
      throw ConfigError("label oracle: no label for instance " +
                        std::to_string(a >= labels_.size() ? a : b));
    return labels_[a] == labels_[b] ? Relation::MustLink : Relation::CannotLink;
  }

 private:
  std::vector<std::string> labels_;
};

/// Answers from a previously recorded query log. Asking for a pair that is
/// not in the log means the run diverged from the recorded one.
class ReplayOracle final : public Oracle {
 public:
  explicit ReplayOracle(const QueryLog& log) {
    for (const auto& e : log.entries) answers_[ordered(e.a, e.b)] = e.answer;
  }

  static ReplayOracle from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open query log '" + path + "'");
    return ReplayOracle(read_ndjson(in));
  }

  Relation query(InstanceId a, InstanceId b) override {
    const auto it = answers_.find(ordered(a, b));
    if (it == answers_.end())
      throw ReplayDivergence("replay diverged: pair (" + std::to_string(a) +
                             ", " + std::to_string(b) +
                             ") is not in the recorded log");
    return it->second;
  }

 private:
  std::map<IdPair, Relation> answers_;
};

}  // namespace cobra
