#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cobra/constraint_store.hpp"

namespace cobra {

enum class AnswerSource { Oracle, Closure };

struct QueryEntry {
  InstanceId a = 0;
  InstanceId b = 0;
  Relation answer = Relation::Unknown;
  AnswerSource source = AnswerSource::Oracle;
  bool operator==(const QueryEntry&) const = default;
};

/// Ordered record of every pair COBRA asked about, whether the answer came
/// from the oracle or from the constraint closure.
struct QueryLog {
  std::vector<QueryEntry> entries;

  std::size_t oracle_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.source == AnswerSource::Oracle;
    return n;
  }

  bool operator==(const QueryLog&) const = default;
};

/// Writes oracle-sourced entries as newline-delimited
/// {"a": id, "b": id, "answer": "must-link"|"cannot-link"} records.
inline void write_ndjson(std::ostream& out, const QueryLog& log) {
  for (const auto& e : log.entries) {
    if (e.source != AnswerSource::Oracle) continue;
    nlohmann::ordered_json j;
    j["a"] = e.a;
    j["b"] = e.b;
    j["answer"] = to_string(e.answer);
    out << j.dump() << '\n';
  }
}

inline QueryLog read_ndjson(std::istream& in) {
  QueryLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      QueryEntry e;
      e.a = j.at("a").get<InstanceId>();
      e.b = j.at("b").get<InstanceId>();
      e.answer = relation_from_string(j.at("answer").get<std::string>());
      log.entries.push_back(e);
    } catch (const nlohmann::json::exception& ex) {
      throw DataError("query log line " + std::to_string(lineno) + ": " +
                      ex.what());
    }
  }
  return log;
}

}  // namespace cobra
