#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cobra/pipeline.hpp"

namespace cobra {

enum class SessionState { Created, AwaitingAnswer, Running, Completed, Cancelled };

inline const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::Created: return "created";
    case SessionState::AwaitingAnswer: return "awaiting_answer";
    case SessionState::Running: return "running";
    case SessionState::Completed: return "completed";
    case SessionState::Cancelled: return "cancelled";
  }
  return "unknown";
}

inline bool is_terminal(SessionState s) {
  return s == SessionState::Completed || s == SessionState::Cancelled;
}

enum class SubmitStatus { Accepted, Stale, Terminal };

struct PendingQuery {
  std::uint64_t seq = 0;
  InstanceId a = 0;
  InstanceId b = 0;
  std::size_t n_clusters = 0;
  std::size_t oracle_count = 0;
};

struct SessionSnapshot {
  std::string id;
  SessionState state = SessionState::Created;
  std::optional<PendingQuery> pending;
  std::size_t oracle_count = 0;
  std::size_t n_clusters = 0;
  std::optional<ResultDocument> result;
  QueryLog log;  // answers delivered so far
  std::string error;
  RunSettings config;
};

/// One interactive COBRA run whose oracle is a human behind the service.
///
/// The run executes on its own thread and blocks inside the oracle until an
/// answer with the matching sequence number arrives or the session is
/// cancelled. Each pending query accepts at most one answer.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const PreparedData> data,
          RunSettings cfg, bool timing = true)
      : id_(std::move(id)), data_(std::move(data)), cfg_(std::move(cfg)), timing_(timing) {}

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  ~Session() {
    cancel();
    if (worker_.joinable()) worker_.join();
  }

  const std::string& id() const { return id_; }

  void start() {
    worker_ = std::thread([this] { run(); });
  }

  SubmitStatus submit(std::uint64_t seq, Relation answer) {
    if (answer == Relation::Unknown)
      throw ConfigError("answer must be must-link or cannot-link");
    std::lock_guard lk(m_);
    if (is_terminal(state_)) return SubmitStatus::Terminal;
    if (state_ != SessionState::AwaitingAnswer || !pending_ || pending_->seq != seq)
      return SubmitStatus::Stale;
    answer_ = answer;
    pending_.reset();
    state_ = SessionState::Running;
    cv_.notify_all();
    return SubmitStatus::Accepted;
  }

  /// Returns false when the session had already ended.
  bool cancel() {
    std::lock_guard lk(m_);
    if (is_terminal(state_)) return false;
    state_ = SessionState::Cancelled;
    pending_.reset();
    cv_.notify_all();
    return true;
  }

  SessionSnapshot snapshot() const {
    std::lock_guard lk(m_);
    SessionSnapshot s;
    s.id = id_;
    s.state = state_;
    s.pending = pending_;
    s.oracle_count = log_.entries.size();
    s.n_clusters = n_clusters_;
    s.result = result_;
    s.log = log_;
    s.error = error_;
    s.config = cfg_;
    return s;
  }

  /// Blocks until the run is waiting for an answer or has ended.
  bool wait_settled(std::chrono::milliseconds timeout) const {
    std::unique_lock lk(m_);
    return cv_.wait_for(lk, timeout, [this] {
      return state_ == SessionState::AwaitingAnswer || is_terminal(state_);
    });
  }

  const PreparedData& data() const { return *data_; }

 private:
  class Bridge final : public Oracle {
   public:
    explicit Bridge(Session& s) : s_(s) {}
    Relation query(InstanceId a, InstanceId b) override { return s_.ask(a, b); }

   private:
    Session& s_;
  };

  Relation ask(InstanceId a, InstanceId b) {
    std::unique_lock lk(m_);
    if (state_ == SessionState::Cancelled) throw OracleAbort("session cancelled");
    pending_ = PendingQuery{++seq_, a, b, n_clusters_, log_.entries.size()};
    answer_.reset();
    state_ = SessionState::AwaitingAnswer;
    cv_.notify_all();
    cv_.wait(lk, [this] { return answer_.has_value() || state_ == SessionState::Cancelled; });
    if (!answer_) throw OracleAbort("session cancelled");
    const Relation r = *answer_;
    answer_.reset();
    log_.entries.push_back({a, b, r, AnswerSource::Oracle});
    return r;
  }

  void run() {
    {
      std::lock_guard lk(m_);
      if (state_ == SessionState::Cancelled) return;
      n_clusters_ = cfg_.n_super;
    }
    Bridge bridge(*this);
    CobraHooks hooks;
    hooks.before_query = [this](std::size_t n_clusters, std::size_t) {
      std::lock_guard lk(m_);
      n_clusters_ = n_clusters;
    };
    try {
      auto doc = cluster_document(*data_, cfg_, bridge, timing_, hooks);
      std::lock_guard lk(m_);
      if (state_ == SessionState::Cancelled) return;
      n_clusters_ = doc.n_clusters_found;
      result_ = std::move(doc);
      state_ = SessionState::Completed;
      cv_.notify_all();
    } catch (const std::exception& e) {
      std::lock_guard lk(m_);
      if (state_ != SessionState::Cancelled) error_ = e.what();
      state_ = SessionState::Cancelled;
      pending_.reset();
      cv_.notify_all();
    }
  }

  const std::string id_;
  const std::shared_ptr<const PreparedData> data_;
  const RunSettings cfg_;
  const bool timing_;

  mutable std::mutex m_;
  mutable std::condition_variable cv_;
  SessionState state_ = SessionState::Created;
  std::optional<PendingQuery> pending_;
  std::optional<Relation> answer_;
  std::uint64_t seq_ = 0;
  std::size_t n_clusters_ = 0;
  QueryLog log_;
  std::optional<ResultDocument> result_;
  std::string error_;
  std::thread worker_;
};

class SessionLimitError : public Error {
 public:
  using Error::Error;
};

struct SessionRequest {
  std::optional<std::size_t> n_super;
  std::optional<std::uint64_t> seed;
  bool timing = true;
};

struct SessionManagerOptions {
  std::size_t max_active = 8;
  std::chrono::milliseconds startup_budget{5000};
};

/// Owns the sessions of one service over one prepared dataset. The session
/// map lock is never held while a run blocks on its oracle.
class SessionManager {
 public:
  SessionManager(std::shared_ptr<const PreparedData> data, RunSettings defaults,
                 SessionManagerOptions opts = {})
      : data_(std::move(data)), defaults_(std::move(defaults)), opts_(opts),
        ids_(std::random_device{}()) {}

  ~SessionManager() { cancel_all(); }

  std::string create(const SessionRequest& req = {}) {
    RunSettings cfg = defaults_;
    if (req.n_super) cfg.n_super = *req.n_super;
    if (req.seed) cfg.seed = *req.seed;
    if (cfg.n_super < 2 || cfg.n_super > data_->normalized.size())
      throw ConfigError("n_super must be in [2, " +
                        std::to_string(data_->normalized.size()) + "]");

    std::shared_ptr<Session> s;
    {
      std::lock_guard lk(m_);
      std::size_t active = 0;
      for (const auto& [id, sess] : sessions_)
        active += !is_terminal(sess->snapshot().state);
      if (active >= opts_.max_active)
        throw SessionLimitError("too many active sessions (limit " +
                                std::to_string(opts_.max_active) + ")");
      std::string id;
      do {
        id = make_id();
      } while (sessions_.count(id));
      s = std::make_shared<Session>(id, data_, cfg, req.timing);
      sessions_.emplace(id, s);
    }
    s->start();
    s->wait_settled(opts_.startup_budget);
    return s->id();
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::lock_guard lk(m_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  void cancel_all() {
    std::vector<std::shared_ptr<Session>> all;
    {
      std::lock_guard lk(m_);
      for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    for (const auto& s : all) s->cancel();
  }

  const PreparedData& data() const { return *data_; }
  const RunSettings& defaults() const { return defaults_; }

 private:
  std::string make_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id(16, '0');
    auto v = ids_();
    for (char& c : id) {
      c = hex[v & 0xF];
      v >>= 4;
    }
    return id;
  }

  std::shared_ptr<const PreparedData> data_;
  RunSettings defaults_;
  SessionManagerOptions opts_;
  mutable std::mutex m_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 ids_;
};

}  // namespace cobra
