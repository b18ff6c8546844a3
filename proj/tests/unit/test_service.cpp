#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <set>
#include <thread>

#include "fretsolve/service.h"

using namespace fretsolve;
using nlohmann::json;

namespace {

const char* kEMajor =
    "key: E major\n"
    "E2 B2 E3 G#3 B3 E4\n"
    "A2 E3 A3 C#4 E4\n"
    "B2 D#3 A3 B3 F#4\n"
    "E2 B2 E3 G#3 B3 E4\n";

// Keeps a port bound without SO_REUSEPORT so a second bind fails.
struct PortHolder {
  int fd = -1;
  int port = 0;
  PortHolder() {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    socklen_t len = sizeof(addr);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), len) == 0 && ::listen(fd, 1) == 0 &&
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
      port = ntohs(addr.sin_port);
    }
  }
  ~PortHolder() { ::close(fd); }
};

json body_of(const HttpResponse& r) { return json::parse(r.body); }

std::string session(Service& service) {
  const HttpResponse r = service.create_session(json{{"composition", kEMajor}}.dump());
  REQUIRE(r.status == 201);
  return body_of(r)["session_id"].get<std::string>();
}

}  // namespace

TEST_CASE("optimize") {
  Service service;
  const HttpResponse r = service.optimize(json{{"composition", "C4 E4 G4\n"}}.dump());
  CHECK(r.status == 200);
  const json j = body_of(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["results"].size() >= 1);
  CHECK(j["results"][0]["rank"] == 1);
  CHECK(j["results"][0]["tab"].get<std::string>().rfind("# fretsolve-v1", 0) == 0);

  const std::string request =
      json{{"composition", kEMajor}, {"search", {{"mode", "neighborhood"}, {"transpositions", {-1, 0, 1}}}},
           {"top_k", 4}}
          .dump();
  const HttpResponse a = service.optimize(request);
  const HttpResponse b = service.optimize(request);
  CHECK(a.status == 200);
  CHECK(a.body == b.body);
  CHECK(body_of(a)["results"].size() == 4);
  const json ranked = body_of(a)["results"];
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    CHECK(ranked[i - 1]["cost"]["total"].get<double>() <= ranked[i]["cost"]["total"].get<double>());
  }
}

TEST_CASE("optimize errors") {
  Service service;
  const json seven = {{"composition", {{"chords", {{{"pitches", {"C3", "D3", "E3", "F3", "G3", "A3", "B3"}}}}}}}};
  const HttpResponse r = service.optimize(seven.dump());
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["message"].get<std::string>().find("chord 1") != std::string::npos);

  const HttpResponse text = service.optimize(json{{"composition", "C4 E4 X9\n"}}.dump());
  CHECK(text.status == 400);
  CHECK(body_of(text)["error"]["details"]["line"] == 1);
  CHECK(body_of(text)["error"]["details"]["column"] == 7);

  CHECK(service.optimize("{not json").status == 400);
  CHECK(service.optimize("[1,2]").status == 400);
  CHECK(service.optimize(json{{"composition", "C4\n"}, {"top_k", 0}}.dump()).status == 400);
  CHECK(service.optimize(json{{"composition", "C4\n"}, {"weights", {{"w_spam", 1}}}}.dump()).status == 400);
  CHECK(service.optimize(json{{"composition", "C4\n"}, {"search", {{"mode", "psychic"}}}}.dump()).status == 400);

  const HttpResponse none = service.optimize(
      json{{"composition", "E2 F2\n"}, {"search", {{"mode", "fixed"}, {"transpositions", {0}}}}}.dump());
  CHECK(none.status == 422);
  CHECK(body_of(none)["error"]["details"].size() == 1);
}

TEST_CASE("sessions and what-if") {
  Service service;
  const std::string id = session(service);
  const json state = body_of(service.get_session(id));
  CHECK(state["state"]["tuning"]["name"] == "standard");
  CHECK(state["history"].size() == 1);
  CHECK(service.get_session("nope").status == 404);

  const HttpResponse same = service.whatif(json{{"session_id", id}, {"tuning", "standard"}}.dump());
  REQUIRE(same.status == 200);
  CHECK(body_of(same)["cipher"]["offsets"] == json({0, 0, 0, 0, 0, 0}));
  CHECK(body_of(same)["cost_delta"] == 0.0);

  const HttpResponse drop = service.whatif(json{{"session_id", id}, {"tuning", "D-A-d-g-b-e'"}}.dump());
  REQUIRE(drop.status == 200);
  const json d = body_of(drop);
  CHECK(d["cipher"]["offsets"] == json({2, 0, 0, 0, 0, 0}));
  CHECK(d["applied"]["fingering"][0] == json({2, 2, 2, 1, 0, 0}));
  CHECK(d["result"]["tuning"]["name"] == "drop-d");
  CHECK(d["history"].size() == 3);

  const HttpResponse back = service.whatif(json{{"session_id", id}, {"tuning", "standard"}}.dump());
  const HttpResponse up = service.whatif(json{{"session_id", id}, {"transposition", 2}}.dump());
  REQUIRE(back.status == 200);
  REQUIRE(up.status == 200);
  const json k = body_of(up);
  CHECK(k["cipher"]["offsets"] == json({2, 2, 2, 2, 2, 2}));
  CHECK(k["result"]["key"]["name"] == "F# major");
  CHECK(k["result"]["transposition"] == 2);
  CHECK(k["applied"]["reports"][0]["report"].is_array());
  CHECK(body_of(service.get_session(id))["history"].size() == 5);

  // Below the written key the low E falls off the neck of standard tuning.
  const HttpResponse down = service.whatif(json{{"session_id", id}, {"transposition", -4}}.dump());
  CHECK(down.status == 422);
  CHECK(body_of(down)["error"]["code"] == "infeasible_composition");
  CHECK(body_of(service.get_session(id))["history"].size() == 5);

  CHECK(service.whatif(json{{"session_id", "missing"}}.dump()).status == 404);
  CHECK(service.whatif(json{{"tuning", "standard"}}.dump()).status == 400);
  CHECK(service.whatif(json{{"session_id", id}, {"tuning", "E-A-d"}}.dump()).status == 400);
}

TEST_CASE("what-if without resolution strategies reports the stuck tone") {
  Service service;
  const HttpResponse created =
      service.create_session(json{{"composition", "E2 B2\n"}, {"policy", "walk"}}.dump());
  REQUIRE(created.status == 201);
  const std::string id = body_of(created)["session_id"];
  const HttpResponse r = service.whatif(json{{"session_id", id}, {"transposition", -2}}.dump());
  CHECK(r.status == 422);
  CHECK(body_of(r)["error"]["details"]["string"] == 1);
  CHECK(body_of(r)["error"]["details"]["pitch"] == 38);
  CHECK(body_of(service.get_session(id))["history"].size() == 1);
}

TEST_CASE("sessions expire") {
  auto now = std::chrono::steady_clock::time_point{};
  ServiceConfig config;
  config.session_ttl = std::chrono::seconds(60);
  Service service(config, [&] { return now; });
  const std::string id = session(service);
  now += std::chrono::seconds(30);
  CHECK(service.get_session(id).status == 200);
  now += std::chrono::seconds(45);
  CHECK(service.get_session(id).status == 200);
  now += std::chrono::seconds(61);
  CHECK(service.get_session(id).status == 404);
  CHECK(service.sessions().size() == 0);
}

TEST_CASE("concurrent sessions") {
  Service service;
  std::vector<std::string> ids(8);
  std::vector<std::jthread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      const HttpResponse r = service.create_session(json{{"composition", kEMajor}}.dump());
      if (r.status != 201) return;
      ids[t] = json::parse(r.body)["session_id"];
      if (service.whatif(json{{"session_id", ids[t]}, {"transposition", t % 2 * 2}}.dump()).status == 200) ++ok;
    });
  }
  threads.clear();
  CHECK(ok == 8);
  CHECK(service.sessions().size() == 8);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 8);
}

TEST_CASE("analysis endpoints") {
  Service service;
  const HttpResponse r = service.redundancy({{"tuning", "55545"}, {"capo", "0"}});
  REQUIRE(r.status == 200);
  const json j = body_of(r);
  CHECK(j["profile"]["counts"][0] == 1);
  CHECK(j["profile"]["counts"][3] == 1);
  CHECK(j["profile"]["counts"][12] == 3);
  CHECK(j["redundancy1"]["low"].size() == 5);
  CHECK(j["redundancy1"]["high"].size() == 5);

  CHECK(body_of(service.redundancy({{"tuning", "75545"}, {"anchor", "D2"}}))["tuning"]["name"] == "drop-d");
  CHECK(service.redundancy({{"tuning", "55545"}, {"capo", "30"}}).status == 400);
  CHECK(service.redundancy({{"tuning", "55545"}, {"capo", "x"}}).status == 400);
  CHECK(service.redundancy({{"tuning", "5"}}).status == 400);
  CHECK(service.redundancy({}).status == 400);

  const json iso = body_of(service.isopitch({{"tuning", "standard"}}));
  CHECK(iso["iso_pitch"]["position_count"] == 150);
  CHECK(iso["iso_pitch"]["lines"][0]["positions"] == json({{1, 0}}));

  const json tunings = body_of(service.tunings());
  CHECK(tunings["tunings"].size() == 6);
  CHECK(tunings["tunings"][0]["name"] == "standard");
}

TEST_CASE("http server") {
  Service service;
  httplib::Server server;
  service.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::jthread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto tunings = client.Get("/tunings");
  REQUIRE(tunings);
  CHECK(tunings->status == 200);
  CHECK(tunings->get_header_value("Content-Type") == "application/json");

  const auto opt = client.Post("/optimize", json{{"composition", "C4 E4 G4\n"}}.dump(), "application/json");
  REQUIRE(opt);
  CHECK(opt->status == 200);

  const auto created = client.Post("/sessions", json{{"composition", kEMajor}}.dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["session_id"];
  const auto got = client.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(got->status == 200);
  const auto whatif = client.Post("/whatif", json{{"session_id", id}, {"tuning", "drop-d"}}.dump(), "application/json");
  REQUIRE(whatif);
  CHECK(json::parse(whatif->body)["cipher"]["text"] == "(2,0,0,0,0,0)");

  const auto bad_capo = client.Get("/analysis/redundancy?tuning=55545&capo=30");
  REQUIRE(bad_capo);
  CHECK(bad_capo->status == 400);
  const auto iso = client.Get("/analysis/isopitch?tuning=D-A-d-g-b-e%27");
  REQUIRE(iso);
  CHECK(iso->status == 200);
  const auto missing = client.Get("/nowhere");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["error"]["code"] == "not_found");

  server.stop();
}

TEST_CASE("run_server reports a busy port") {
  const PortHolder holder;
  const int port = holder.port;
  REQUIRE(port > 0);
  Service service;
  CHECK_FALSE(run_server(service, "127.0.0.1", port));
}
