/**
 * @file service.cpp
 * @brief HTTP handlers and the session store.
 */

#include "fretsolve/service.h"

#include <httplib.h>

#include <cstdio>
#include <random>

#include "fretsolve/errors.h"
#include "fretsolve/json_io.h"
#include "fretsolve/score_io.h"

namespace fretsolve {

using nlohmann::json;

namespace {

HttpResponse reply(const json& payload, int status = 200) {
  json body = payload;
  body["schema_version"] = kSchemaVersion;
  return {status, body.dump()};
}

HttpResponse fail(int status, const std::string& code, const std::string& message,
                  json details = nullptr) {
  json error = {{"code", code}, {"message", message}};
  if (!details.is_null()) error["details"] = std::move(details);
  return reply({{"error", error}}, status);
}

HttpResponse fail_parse(const ParseError& e, const std::string& field) {
  json details = {{"field", field}};
  if (e.line() > 0) {
    details["line"] = e.line();
    details["column"] = e.column();
  }
  return fail(400, "parse", e.what(), details);
}

std::optional<json> parse_body(std::string_view body, HttpResponse& error) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) {
      error = fail(400, "bad_request", "request body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error& e) {
    error = fail(400, "bad_json", e.what());
    return std::nullopt;
  }
}

Pitch anchor_param(const QueryParams& params) {
  const auto it = params.find("anchor");
  return it == params.end() ? Pitch(40) : parse_pitch(it->second);
}

Tuning6 tuning_from(const json& j, const Tuning6& fallback, Pitch anchor = Pitch(40)) {
  if (j.is_null()) return fallback;
  if (!j.is_string()) throw ArgumentError("tuning must be a string");
  const std::string text = j.get<std::string>();
  if (const auto named = find_named_tuning(text)) return *named;
  return parse_tuning(text, anchor);
}

json field(const json& j, const char* name) { return j.contains(name) ? j[name] : json(nullptr); }

int int_field(const json& j, const char* name, int fallback) {
  const json v = field(j, name);
  if (v.is_null()) return fallback;
  if (!v.is_number_integer()) throw ArgumentError(std::string("\"") + name + "\" must be an integer");
  return v.get<int>();
}

SearchSpace search_space_from(const json& j) {
  const Tuning6 base = tuning_from(field(j, "base_tuning"), standard_tuning());
  std::vector<int> transpositions = transposition_range(-6, 6);
  if (const json t = field(j, "transpositions"); !t.is_null()) {
    if (!t.is_array() || t.empty()) throw ArgumentError("transpositions must be a nonempty array");
    transpositions.clear();
    for (const json& v : t) {
      if (!v.is_number_integer()) throw ArgumentError("transpositions must be integers");
      transpositions.push_back(v.get<int>());
    }
  }

  const std::string mode = j.value("mode", std::string("named"));
  if (const json list = field(j, "tunings"); !list.is_null()) {
    if (!list.is_array() || list.empty()) throw ArgumentError("tunings must be a nonempty array");
    SearchSpace space{base, {}, transpositions};
    for (const json& t : list) space.tunings.push_back(tuning_from(t, base));
    return space;
  }
  if (mode == "fixed") return SearchSpace{base, {base}, transpositions};
  if (mode == "named") return SearchSpace::named(base, transpositions);
  if (mode == "neighborhood") {
    return SearchSpace::neighborhood(base, int_field(j, "max_retuned_strings", 1),
                                     int_field(j, "max_semitones_per_string", 2), transpositions);
  }
  throw ArgumentError("search mode must be fixed, named or neighborhood");
}

json history_json(const std::vector<SessionStep>& history) {
  json out = json::array();
  for (const SessionStep& s : history) {
    out.push_back({{"tuning", to_json(s.tuning)},
                   {"transposition", s.transposition},
                   {"key", to_json(s.key)},
                   {"cipher", to_json(s.cipher)},
                   {"cost", s.cost}});
  }
  return out;
}

json session_json(const Session& s) {
  return {{"session_id", s.id},
          {"state", to_json(s.current)},
          {"policy", s.policy.to_string()},
          {"history", history_json(s.history)}};
}

OptimizationResult make_result(const Composition& moved, const Tuning6& tuning, int transposition,
                               const Key& key, FingeringResult fr, const Cipher& cipher) {
  OptimizationResult r{tuning, transposition, key, std::move(fr.shapes), {}, moved.durations_ms(), fr.cost, cipher};
  for (const Chord& c : moved.chords) r.chord_pitches.push_back(c.numbers());
  return r;
}

std::string random_token() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

SessionStore::SessionStore(std::chrono::seconds ttl, Clock clock)
    : ttl_(ttl), clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })) {}

std::string SessionStore::insert(Session session) {
  std::lock_guard lock(mutex_);
  const auto now = clock_();
  evict_locked(now);
  session.id = random_token() + std::to_string(++counter_);
  session.last_used = now;
  const std::string id = session.id;
  sessions_.emplace(id, std::move(session));
  return id;
}

bool SessionStore::with_session(const std::string& id, const std::function<void(Session&)>& fn) {
  std::lock_guard lock(mutex_);
  const auto now = clock_();
  evict_locked(now);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  it->second.last_used = now;
  fn(it->second);
  return true;
}

std::size_t SessionStore::size() {
  std::lock_guard lock(mutex_);
  evict_locked(clock_());
  return sessions_.size();
}

void SessionStore::evict_locked(std::chrono::steady_clock::time_point now) {
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second.last_used > ttl_) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

Service::Service(ServiceConfig config, SessionStore::Clock clock)
    : config_(std::move(config)), sessions_(config_.session_ttl, std::move(clock)) {}

HttpResponse Service::optimize(std::string_view body) const {
  HttpResponse error;
  const auto request = parse_body(body, error);
  if (!request) return error;
  const json& j = *request;

  std::optional<Composition> composition;
  try {
    composition = composition_from_json(field(j, "composition"));
  } catch (const ParseError& e) {
    return fail_parse(e, "composition");
  } catch (const Error& e) {
    return fail(400, e.code(), e.what(), {{"field", "composition"}});
  }

  try {
    const CostWeights weights = weights_from_json(field(j, "weights"), config_.weights);
    const SearchSpace space = search_space_from(j.value("search", json::object()));
    const int top_k = int_field(j, "top_k", 5);
    if (top_k < 1) throw ArgumentError("top_k must be at least 1");
    OptimizerOptions options = config_.optimizer;
    if (const json lambda = field(j, "retune_lambda"); !lambda.is_null()) {
      if (!lambda.is_number() || lambda.get<double>() < 0.0) {
        throw ArgumentError("retune_lambda must be a nonnegative number");
      }
      options.retune_lambda = lambda.get<double>();
    }

    const auto results = joint_optimize(*composition, space, weights, top_k, options);
    json out = json::array();
    int rank = 0;
    for (const OptimizationResult& r : results) {
      json entry = to_json(r);
      entry["rank"] = ++rank;
      out.push_back(std::move(entry));
    }
    return reply({{"results", out}});
  } catch (const GlobalInfeasibilityError& e) {
    return fail(422, e.code(), e.what(), e.diagnostics());
  } catch (const ParseError& e) {
    return fail_parse(e, "search");
  } catch (const Error& e) {
    return fail(400, e.code(), e.what());
  }
}

HttpResponse Service::create_session(std::string_view body) {
  HttpResponse error;
  const auto request = parse_body(body, error);
  if (!request) return error;
  const json& j = *request;

  try {
    Composition composition = composition_from_json(field(j, "composition"));
    const Tuning6 tuning = tuning_from(field(j, "tuning"), standard_tuning());
    const Key key = j.contains("key") && j["key"].is_string() ? parse_key(j["key"].get<std::string>())
                                                              : effective_key(composition);
    const CostWeights weights = weights_from_json(field(j, "weights"), config_.weights);
    const ResolutionPolicy policy =
        j.contains("policy") ? parse_policy(j["policy"].get<std::string>()) : ResolutionPolicy::all();

    FingeringResult fr = best_fingering(composition, tuning, key, weights, config_.optimizer.max_candidates);
    OptimizationResult current = make_result(composition, tuning, 0, key, std::move(fr), Cipher::zero());
    const double cost = current.cost.total;
    Session session{{}, std::move(composition), key, weights, policy, std::move(current),
                    {SessionStep{tuning, 0, key, Cipher::zero(), cost}}, {}};
    const std::string id = sessions_.insert(std::move(session));

    HttpResponse out;
    sessions_.with_session(id, [&](Session& s) { out = reply(session_json(s), 201); });
    return out;
  } catch (const InfeasibleCompositionError& e) {
    return fail(422, e.code(), e.what(), {{"chords", e.chords()}, {"reasons", e.reasons()}});
  } catch (const ParseError& e) {
    return fail_parse(e, "composition");
  } catch (const json::exception& e) {
    return fail(400, "bad_request", e.what());
  } catch (const Error& e) {
    return fail(400, e.code(), e.what());
  }
}

HttpResponse Service::get_session(const std::string& id) {
  HttpResponse out = fail(404, "unknown_session", "no session with id \"" + id + "\"");
  sessions_.with_session(id, [&](Session& s) { out = reply(session_json(s)); });
  return out;
}

HttpResponse Service::whatif(std::string_view body) {
  HttpResponse error;
  const auto request = parse_body(body, error);
  if (!request) return error;
  const json& j = *request;
  if (!j.contains("session_id") || !j["session_id"].is_string()) {
    return fail(400, "bad_request", "session_id is required");
  }
  const std::string id = j["session_id"].get<std::string>();

  HttpResponse out = fail(404, "unknown_session", "no session with id \"" + id + "\"");
  sessions_.with_session(id, [&](Session& s) {
    try {
      const OptimizationResult& before = s.current;
      const Tuning6 tuning = tuning_from(field(j, "tuning"), before.tuning);
      const int delta = int_field(j, "transposition", 0);
      const ResolutionPolicy policy =
          j.contains("policy") ? parse_policy(j["policy"].get<std::string>()) : s.policy;
      const int transposition = before.transposition + delta;
      const Cipher step = compose_ciphers(cipher_from_retuning(before.tuning, tuning), cipher_from_rekey(-delta));

      std::vector<ChordShape> applied_shapes;
      json applied_reports = json::array();
      for (std::size_t c = 0; c < before.fingering.size(); ++c) {
        try {
          CipherApplication app = apply_cipher(before.fingering[c], step, tuning, policy);
          applied_reports.push_back(to_json(app));
          applied_shapes.push_back(app.shape);
        } catch (const ResolutionError& e) {
          out = fail(422, e.code(), "chord " + std::to_string(c + 1) + ": " + e.what(),
                     {{"chord", c + 1}, {"string", e.string_number()}, {"pitch", e.pitch()}});
          return;
        }
      }

      const Composition moved = s.composition.transposed(transposition);
      const Key key = s.original_key.transposed(transposition);
      const CostBreakdown applied_cost =
          total_cost(applied_shapes, moved.durations_ms(), tuning, key, s.weights);
      FingeringResult fr;
      try {
        fr = best_fingering(moved, tuning, key, s.weights, config_.optimizer.max_candidates);
      } catch (const InfeasibleCompositionError& e) {
        out = fail(422, e.code(), e.what(), {{"chords", e.chords()}, {"reasons", e.reasons()}});
        return;
      }
      const Cipher from_start =
          compose_ciphers(cipher_from_retuning(s.history.front().tuning, tuning), cipher_from_rekey(-transposition));
      OptimizationResult after = make_result(moved, tuning, transposition, key, std::move(fr), from_start);
      const double cost_delta = after.cost.total - before.cost.total;

      s.history.push_back(SessionStep{tuning, transposition, key, step, after.cost.total});
      s.current = std::move(after);

      json applied = {{"fingering", json::array()}, {"reports", applied_reports}, {"cost", to_json(applied_cost)}};
      for (const ChordShape& shape : applied_shapes) applied["fingering"].push_back(to_json(shape));
      out = reply({{"session_id", s.id},
                   {"cipher", to_json(step)},
                   {"applied", applied},
                   {"result", to_json(s.current)},
                   {"cost_delta", cost_delta},
                   {"history", history_json(s.history)}});
    } catch (const ParseError& e) {
      out = fail_parse(e, "tuning");
    } catch (const RangeError& e) {
      out = fail(422, e.code(), e.what());
    } catch (const json::exception& e) {
      out = fail(400, "bad_request", e.what());
    } catch (const Error& e) {
      out = fail(400, e.code(), e.what());
    }
  });
  return out;
}

HttpResponse Service::redundancy(const QueryParams& params) const {
  const auto t = params.find("tuning");
  if (t == params.end()) return fail(400, "bad_request", "query parameter \"tuning\" is required");
  try {
    const Tuning6 tuning = tuning_from(json(t->second), standard_tuning(), anchor_param(params));
    int capo = 0;
    if (const auto c = params.find("capo"); c != params.end()) {
      std::size_t used = 0;
      capo = std::stoi(c->second, &used);
      if (used != c->second.size()) throw ArgumentError("capo must be an integer");
    }
    const Tuning5 t5 = to_tuning5(tuning);
    const Redundancy1Sets sets = redundancy1_sets(t5);
    return reply({{"tuning", to_json(tuning)},
                  {"profile", to_json(capo_profile(t5, capo))},
                  {"redundancy1", {{"low", sets.low}, {"high", sets.high}}}});
  } catch (const ParseError& e) {
    return fail_parse(e, "tuning");
  } catch (const Error& e) {
    return fail(400, e.code(), e.what());
  } catch (const std::logic_error&) {
    return fail(400, "bad_request", "capo must be an integer");
  }
}

HttpResponse Service::isopitch(const QueryParams& params) const {
  const auto t = params.find("tuning");
  if (t == params.end()) return fail(400, "bad_request", "query parameter \"tuning\" is required");
  try {
    const Tuning6 tuning = tuning_from(json(t->second), standard_tuning(), anchor_param(params));
    return reply({{"tuning", to_json(tuning)}, {"iso_pitch", to_json(iso_pitch_map(to_tuning5(tuning)))}});
  } catch (const ParseError& e) {
    return fail_parse(e, "tuning");
  } catch (const Error& e) {
    return fail(400, e.code(), e.what());
  }
}

HttpResponse Service::tunings() const {
  json list = json::array();
  for (const NamedTuning& t : named_tunings()) list.push_back(to_json(t.tuning));
  return reply({{"tunings", list}});
}

void Service::mount(httplib::Server& server) {
  const auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  const auto params_of = [](const httplib::Request& req) {
    QueryParams out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
  };

  server.Post("/optimize", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, optimize(req.body));
  });
  server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Get(R"(/sessions/([A-Za-z0-9]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_session(req.matches[1]));
  });
  server.Post("/whatif", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, whatif(req.body));
  });
  server.Get("/analysis/redundancy", [this, send, params_of](const httplib::Request& req, httplib::Response& res) {
    send(res, redundancy(params_of(req)));
  });
  server.Get("/analysis/isopitch", [this, send, params_of](const httplib::Request& req, httplib::Response& res) {
    send(res, isopitch(params_of(req)));
  });
  server.Get("/tunings", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, tunings());
  });
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const HttpResponse r = fail(res.status, res.status == 404 ? "not_found" : "http_error",
                                "no handler for " + req.method + " " + req.path);
    res.set_content(r.body, "application/json");
  });
}

bool run_server(Service& service, const std::string& host, int port,
                const std::function<void(int)>& on_bound) {
  httplib::Server server;
  service.mount(server);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) return false;
  } else if (!server.bind_to_port(host, port)) {
    return false;
  }
  if (on_bound) on_bound(bound);
  return server.listen_after_bind();
}

}  // namespace fretsolve
