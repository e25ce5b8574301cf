#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

// Eigen must precede httplib: <resolv.h> defines a `_res` macro that breaks
// Eigen's kernels.
#include "cobra/projection.hpp"

#include <httplib.h>
#include <json.hpp>

#include "cobra/result_io.hpp"
#include "cobra/session.hpp"

namespace cobra {

struct ServiceOptions {
  SessionManagerOptions sessions;
  std::string static_dir;  // UI bundle; not served when empty
};

/// HTTP front end for interactive sessions. All bodies are JSON.
///
///   POST /sessions                 {n_super?, seed?, timing?} -> {id}
///   GET  /sessions/{id}            session view
///   GET  /sessions/{id}/pending    pending pair view or terminal state
///   POST /sessions/{id}/answer     {seq, answer}
///   POST /sessions/{id}/cancel
///   GET  /sessions/{id}/result     final result document
///   GET  /sessions/{id}/log        answers delivered so far
///   GET  /dataset/projection       2D coordinates + super-instance ids
class SessionService {
 public:
  SessionService(std::shared_ptr<const PreparedData> data, RunSettings defaults,
                 ServiceOptions opts = {})
      : manager_(data, defaults, opts.sessions),
        xy_(project_2d(data->normalized)),
        default_si_(build_super_instances(data->normalized, defaults.n_super,
                                          defaults.seed)) {
    routes();
    if (!opts.static_dir.empty()) server_.set_mount_point("/", opts.static_dir);
  }

  ~SessionService() { stop(); }

  /// Binds to `port` (0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host.c_str());
    return server_.bind_to_port(host.c_str(), port) ? port : -1;
  }

  /// Serves requests until stop() is called.
  bool listen() { return server_.listen_after_bind(); }

  void stop() {
    manager_.cancel_all();
    server_.stop();
  }

  void wait_until_ready() const { server_.wait_until_ready(); }

  SessionManager& sessions() { return manager_; }

 private:
  using Req = httplib::Request;
  using Res = httplib::Response;

  static void send(Res& res, int status, const ojson& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void error(Res& res, int status, const std::string& code,
                    const std::string& message) {
    send(res, status, {{"error", code}, {"message", message}});
  }

  ojson instance_view(const Session& s, InstanceId id) const {
    const auto raw = s.data().raw.row(id);
    return {{"id", id},
            {"features", std::vector<double>(raw.begin(), raw.end())},
            {"xy", {xy_[id][0], xy_[id][1]}}};
  }

  ojson pending_view(const Session& s, const SessionSnapshot& snap) const {
    ojson j;
    j["state"] = to_string(snap.state);
    if (snap.pending) {
      j["seq"] = snap.pending->seq;
      j["a"] = instance_view(s, snap.pending->a);
      j["b"] = instance_view(s, snap.pending->b);
    }
    j["progress"] = {{"oracle_count", snap.oracle_count},
                     {"n_clusters", snap.n_clusters}};
    if (snap.result)
      j["result"] = {{"oracle_count", snap.result->oracle_count},
                     {"n_clusters_found", snap.result->n_clusters_found}};
    return j;
  }

  ojson session_view(const Session& s, const SessionSnapshot& snap) const {
    ojson j;
    j["id"] = snap.id;
    j["state"] = to_string(snap.state);
    j["config"] = to_json(snap.config);
    j["oracle_count"] = snap.oracle_count;
    j["n_clusters"] = snap.n_clusters;
    if (snap.pending) j["pending"] = pending_view(s, snap);
    if (!snap.error.empty()) j["error"] = snap.error;
    return j;
  }

  template <typename F>
  void with_session(const Req& req, Res& res, F&& f) {
    const auto s = manager_.find(req.matches[1]);
    if (!s) return error(res, 404, "not_found", "unknown session");
    f(*s);
  }

  void routes() {
    server_.Post("/sessions", [this](const Req& req, Res& res) {
      SessionRequest sr;
      try {
        if (!req.body.empty()) {
          const auto j = ojson::parse(req.body);
          if (j.contains("n_super")) sr.n_super = j["n_super"].get<std::size_t>();
          if (j.contains("seed")) sr.seed = j["seed"].get<std::uint64_t>();
          if (j.contains("timing")) sr.timing = j["timing"].get<bool>();
        }
        send(res, 201, {{"id", manager_.create(sr)}});
      } catch (const SessionLimitError& e) {
        error(res, 429, "limit", e.what());
      } catch (const nlohmann::json::exception& e) {
        error(res, 400, "bad_request", e.what());
      } catch (const ConfigError& e) {
        error(res, 400, "bad_request", e.what());
      }
    });

    server_.Get(R"(/sessions/([^/]+))", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        send(res, 200, session_view(s, s.snapshot()));
      });
    });

    server_.Get(R"(/sessions/([^/]+)/pending)", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        send(res, 200, pending_view(s, s.snapshot()));
      });
    });

    server_.Post(R"(/sessions/([^/]+)/answer)", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        std::uint64_t seq = 0;
        Relation answer = Relation::Unknown;
        try {
          const auto j = ojson::parse(req.body);
          seq = j.at("seq").get<std::uint64_t>();
          answer = relation_from_string(j.at("answer").get<std::string>());
        } catch (const std::exception& e) {
          return error(res, 400, "bad_request", e.what());
        }
        switch (s.submit(seq, answer)) {
          case SubmitStatus::Accepted:
            return send(res, 200, {{"accepted", true}, {"seq", seq}});
          case SubmitStatus::Stale:
            return error(res, 409, "stale", "sequence number is not the pending query");
          case SubmitStatus::Terminal:
            return error(res, 409, "terminal", "session has ended");
        }
      });
    });

    server_.Post(R"(/sessions/([^/]+)/cancel)", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        if (!s.cancel()) return error(res, 409, "terminal", "session has ended");
        send(res, 200, {{"state", to_string(SessionState::Cancelled)}});
      });
    });

    server_.Get(R"(/sessions/([^/]+)/result)", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        const auto snap = s.snapshot();
        if (!snap.result)
          return error(res, 409, "not_completed",
                       std::string("session is ") + to_string(snap.state));
        res.status = 200;
        res.set_content(dump(*snap.result), "application/json");
      });
    });

    server_.Get(R"(/sessions/([^/]+)/log)", [this](const Req& req, Res& res) {
      with_session(req, res, [&](Session& s) {
        const auto snap = s.snapshot();
        send(res, 200, {{"state", to_string(snap.state)}, {"query_log", to_json(snap.log)}});
      });
    });

    server_.Get("/dataset/projection", [this](const Req& req, Res& res) {
      const SuperInstanceSet* si = &default_si_;
      SuperInstanceSet from_session;
      if (req.has_param("session")) {
        const auto s = manager_.find(req.get_param_value("session"));
        if (!s) return error(res, 404, "not_found", "unknown session");
        const auto snap = s->snapshot();
        if (!snap.result)
          return error(res, 409, "not_completed", "session has no result yet");
        from_session.groups = snap.result->super_instances;
        from_session.medoids = snap.result->medoids;
        si = &from_session;
      }
      const auto member = si->membership(xy_.size());
      ojson pts = ojson::array();
      for (InstanceId i = 0; i < xy_.size(); ++i)
        pts.push_back({{"id", i}, {"x", xy_[i][0]}, {"y", xy_[i][1]},
                       {"super_instance", member[i]}});
      send(res, 200, {{"points", std::move(pts)}, {"medoids", si->medoids}});
    });
  }

  SessionManager manager_;
  std::vector<std::array<double, 2>> xy_;
  SuperInstanceSet default_si_;
  httplib::Server server_;
};

}  // namespace cobra
