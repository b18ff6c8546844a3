/**
 * @file service.h
 * @brief HTTP/JSON front end: stateless optimize/analysis endpoints plus what-if sessions.
 *
 * Handlers are plain member functions returning {status, body} so they can be
 * exercised without a socket; `mount` wires them onto a cpp-httplib server.
 *
 *   POST /optimize                 ranked results for a composition
 *   POST /sessions                 start a what-if session
 *   GET  /sessions/{id}            current state and tuning-key path
 *   POST /whatif                   retune and/or transpose the session's current state
 *   GET  /analysis/redundancy      ?tuning=&capo=&anchor=
 *   GET  /analysis/isopitch        ?tuning=&anchor=
 *   GET  /tunings                  named tunings
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fretsolve/cipher.h"
#include "fretsolve/composition.h"
#include "fretsolve/cost_model.h"
#include "fretsolve/optimizer.h"

namespace httplib {
class Server;
}

namespace fretsolve {

struct HttpResponse {
  int status = 200;
  std::string body;
};

using QueryParams = std::map<std::string, std::string>;

struct ServiceConfig {
  std::chrono::seconds session_ttl{3600};
  CostWeights weights;
  OptimizerOptions optimizer;
};

/// One step of a session's tuning-key path.
struct SessionStep {
  Tuning6 tuning;
  int transposition = 0;
  Key key;
  Cipher cipher;  ///< from the previous step
  double cost = 0.0;
};

struct Session {
  std::string id;
  Composition composition;  ///< as submitted, untransposed
  Key original_key;
  CostWeights weights;
  ResolutionPolicy policy;
  OptimizationResult current;
  std::vector<SessionStep> history;
  std::chrono::steady_clock::time_point last_used;
};

/// In-memory sessions with idle-time eviction. Thread-safe.
class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionStore(std::chrono::seconds ttl, Clock clock = {});

  std::string insert(Session session);
  /// Runs `fn` on the session under the store lock; false when absent or expired.
  bool with_session(const std::string& id, const std::function<void(Session&)>& fn);
  std::size_t size();

 private:
  void evict_locked(std::chrono::steady_clock::time_point now);

  std::chrono::seconds ttl_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, Session> sessions_;
  std::uint64_t counter_ = 0;
};

class Service {
 public:
  explicit Service(ServiceConfig config = {}, SessionStore::Clock clock = {});

  HttpResponse optimize(std::string_view body) const;
  HttpResponse create_session(std::string_view body);
  HttpResponse get_session(const std::string& id);
  HttpResponse whatif(std::string_view body);
  HttpResponse redundancy(const QueryParams& params) const;
  HttpResponse isopitch(const QueryParams& params) const;
  HttpResponse tunings() const;

  void mount(httplib::Server& server);

  SessionStore& sessions() noexcept { return sessions_; }

 private:
  ServiceConfig config_;
  SessionStore sessions_;
};

/// Blocks serving on host:port (port 0 picks a free port). `on_bound` receives the
/// actual port before serving starts. Returns false when binding fails.
bool run_server(Service& service, const std::string& host, int port,
                const std::function<void(int)>& on_bound = {});

}  // namespace fretsolve
