#include <doctest.h>

#include <httplib.h>
#include <json.hpp>
#include <arpa/inet.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fretsolve/cli.h"
#include "fretsolve/score_io.h"

using namespace fretsolve;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fretsolve");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / ("fretsolve-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

const std::string kData = FRETSOLVE_TEST_DATA;

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"dance"}).code == kExitUsage);
  CHECK(run({"optimize"}).code == kExitUsage);
  CHECK(run({"optimize", kData + "/corpus/e_major_open.chords", "--search", "random"}).code == kExitUsage);
  CHECK(run({"optimize", kData + "/corpus/e_major_open.chords", "--transpose", "3..1"}).code == kExitUsage);
  CHECK(run({"analyze", "--tuning", "55545", "--format", "xml"}).code == kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("optimize") != std::string::npos);
}

TEST_CASE("optimize") {
  const std::string file = kData + "/corpus/e_major_open.chords";
  const Run r = run({"optimize", file});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("#1  tuning standard  transposition 0", 0) == 0);

  const Run three = run({"optimize", file, "--search", "named", "--top", "3", "--format", "json"});
  REQUIRE(three.code == 0);
  const json j = json::parse(three.out);
  CHECK(j["results"].size() == 3);
  bool found = false;
  for (const json& res : j["results"]) {
    found = found || (res["tuning"]["name"] == "standard" && res["transposition"] == 0);
  }
  CHECK(found);
  CHECK(run({"optimize", file, "--format", "json"}).out == run({"optimize", file, "--format", "json"}).out);

  const Run few = run({"optimize", file, "--search", "fixed", "--transpose", "0", "--top", "3"});
  CHECK(few.code == 0);
  CHECK(few.err.find("fewer than --top 3") != std::string::npos);

  // Below E the low string has to drop, so only the lowered tunings survive.
  const Run negative = run({"optimize", file, "--transpose=-2..-1", "--search", "named", "--format", "json"});
  REQUIRE(negative.code == 0);
  for (const json& res : json::parse(negative.out)["results"]) {
    CHECK(res["transposition"].get<int>() < 0);
    CHECK(res["tuning"]["name"] != "standard");
  }

  const Run near = run({"optimize", file, "--search", "neighborhood", "--max-retuned", "1", "--max-semitones", "1",
                        "--transpose", "0", "--top", "50", "--format", "json"});
  CHECK(near.code == 0);
  CHECK(json::parse(near.out)["results"].size() > 6);
}

TEST_CASE("optimize failures") {
  CHECK(run({"optimize", "/no/such/file.chords"}).code == kExitParse);
  const fs::path bad = scratch("bad.chords", "C4 E4 X9\n");
  const Run parse = run({"optimize", bad.string()});
  CHECK(parse.code == kExitParse);
  CHECK(parse.err.find("line 1, column 7") != std::string::npos);
  const fs::path clash = scratch("clash.chords", "E2 F2\n");
  const Run infeasible = run({"optimize", clash.string(), "--search", "fixed", "--transpose", "0"});
  CHECK(infeasible.code == kExitInfeasible);
  CHECK_FALSE(infeasible.err.empty());
}

TEST_CASE("weights from config files") {
  const std::string file = kData + "/corpus/e_major_open.chords";
  const fs::path cfg = scratch("weights.cfg", "w_key_affinity = 0\nw_position = 0\n");
  const Run r = run({"optimize", file, "--weights", cfg.string(), "--search", "fixed", "--transpose", "0", "--format",
                     "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["results"][0]["cost"]["key_affinity"] == 0.0);

  const Run global = run({"--config", cfg.string(), "optimize", file, "--search", "fixed", "--transpose", "0",
                          "--format", "json"});
  CHECK(json::parse(global.out)["results"][0]["cost"]["key_affinity"] == 0.0);

  ::setenv("FRETSOLVE_CONFIG", cfg.string().c_str(), 1);
  const Run env = run({"optimize", file, "--search", "fixed", "--transpose", "0", "--format", "json"});
  ::unsetenv("FRETSOLVE_CONFIG");
  CHECK(json::parse(env.out)["results"][0]["cost"]["key_affinity"] == 0.0);

  const fs::path broken = scratch("broken.cfg", "w_span = lots\n");
  CHECK(run({"optimize", file, "--weights", broken.string()}).code == kExitParse);
  CHECK(run({"optimize", file, "--weights", "/no/such.cfg"}).code == kExitParse);
}

TEST_CASE("analyze") {
  const Run csv = run({"analyze", "--tuning", "55545"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("pv,redundancy\n0,1\n", 0) == 0);
  CHECK(csv.out.find("\n48,1\n") != std::string::npos);

  CHECK(run({"analyze", "--tuning", "D-A-d-g-b-e'"}).out == run({"analyze", "--tuning", "75545", "--anchor", "D2"}).out);
  CHECK(run({"analyze", "--tuning", "D-A-d-g-b-e'", "--format", "json"}).out ==
        run({"analyze", "--tuning", "75545", "--anchor", "D2", "--format", "json"}).out);

  const json c0 = json::parse(run({"analyze", "--tuning", "55545", "--format", "json"}).out);
  const json c5 = json::parse(run({"analyze", "--tuning", "55545", "--capo", "5", "--format", "json"}).out);
  CHECK(c5["profile"]["mean"].get<double>() < c0["profile"]["mean"].get<double>());
  CHECK(c0["iso_pitch"]["position_count"] == 150);

  CHECK(run({"analyze", "--tuning", "5554"}).code == kExitParse);
  CHECK(run({"analyze", "--tuning", "55545", "--capo", "30"}).code == kExitParse);
}

TEST_CASE("retune") {
  const std::string standard_tab =
      render_tab(Tablature{*find_named_tuning("standard"),
                           {ChordShape({0, 2, 2, 1, 0, 0}), ChordShape({kMuted, 0, 2, 2, 2, 0}),
                            ChordShape({3, 2, 0, 0, 0, 3})},
                           {"three chords"}});
  const fs::path tab = scratch("song.tab", standard_tab);

  const Run same = run({"retune", tab.string(), "--to", "standard"});
  CHECK(same.code == 0);
  CHECK(same.out == standard_tab);

  const Run drop = run({"retune", tab.string(), "--to", "drop-d"});
  REQUIRE(drop.code == 0);
  const Tablature before = parse_tab(standard_tab);
  const Tablature after = parse_tab(drop.out);
  CHECK(after.tuning == *find_named_tuning("drop-d"));
  for (std::size_t c = 0; c < before.shapes.size(); ++c) {
    const int f = before.shapes[c].fret(1);
    CHECK(after.shapes[c].fret(1) == (f == kMuted ? kMuted : f + 2));
    for (int s = 2; s <= 6; ++s) CHECK(after.shapes[c].fret(s) == before.shapes[c].fret(s));
    CHECK(after.shapes[c].pitches(after.tuning) == before.shapes[c].pitches(before.tuning));
  }
  CHECK(drop.err.find("(2,0,0,0,0,0)") != std::string::npos);

  const Run json_out = run({"retune", tab.string(), "--to", "drop-d", "--format", "json"});
  CHECK(json::parse(json_out.out)["cipher"]["text"] == "(2,0,0,0,0,0)");

  // Tuning the low string up a tone strands the open E with only the walk allowed.
  const Run stuck = run({"retune", tab.string(), "--to", "F#2-A2-D3-G3-B3-E4", "--policy", "walk"});
  CHECK(stuck.code == kExitInfeasible);
  CHECK(stuck.err.find("chord 1") != std::string::npos);
  CHECK(stuck.err.find("chord 3") == std::string::npos);

  const Run rescued = run({"retune", tab.string(), "--to", "F#2-A2-D3-G3-B3-E4", "--policy", "all"});
  CHECK(rescued.code == 0);
  CHECK_FALSE(rescued.err.empty());

  const fs::path headless = scratch("headless.tab", "E |-0-|\n");
  CHECK(run({"retune", headless.string(), "--to", "standard"}).code == kExitParse);
  CHECK(run({"retune", tab.string(), "--to", "standard", "--policy", "magic"}).code == kExitParse);
}

namespace {

// Starts the real binary, returns its pid and the port it printed.
std::pair<pid_t, int> spawn_server() {
  int fds[2];
  REQUIRE(::pipe(fds) == 0);
  const pid_t pid = ::fork();
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::execl(FRETSOLVE_BIN, "fretsolve", "serve", "--port", "0", "--format", "json", static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  char c = 0;
  std::string text;
  while (::read(fds[0], &c, 1) == 1) {
    text += c;
    if (c == '}') break;
  }
  ::close(fds[0]);
  return {pid, json::parse(text)["port"].get<int>()};
}

}  // namespace

TEST_CASE("serve") {
  const auto [pid, port] = spawn_server();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  const auto r = client.Get("/tunings");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(json::parse(r->body)["tunings"].size() == 6);

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);

  // A plain listening socket without SO_REUSEPORT, which httplib would share.
  const int holder = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t len = sizeof(addr);
  REQUIRE(::bind(holder, reinterpret_cast<sockaddr*>(&addr), len) == 0);
  REQUIRE(::listen(holder, 1) == 0);
  REQUIRE(::getsockname(holder, reinterpret_cast<sockaddr*>(&addr), &len) == 0);
  const int busy = ntohs(addr.sin_port);
  const Run occupied = run({"serve", "--port", std::to_string(busy)});
  CHECK(occupied.code != 0);
  CHECK(occupied.err.find("cannot bind") != std::string::npos);
  ::close(holder);
}
