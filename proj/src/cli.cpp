/**
 * @file cli.cpp
 */

#include "fretsolve/cli.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fretsolve/errors.h"
#include "fretsolve/json_io.h"
#include "fretsolve/score_io.h"
#include "fretsolve/service.h"

namespace fretsolve {

using nlohmann::json;

namespace {

// Thrown for unreadable input files; maps to exit 1.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Tuning6 tuning_arg(const std::string& text, const std::string& anchor) {
  if (const auto named = find_named_tuning(text)) return *named;
  return parse_tuning(text, parse_pitch(anchor));
}

std::vector<int> transpose_arg(const std::string& text) {
  const auto dots = text.find("..");
  std::size_t used = 0;
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v};
    }
    const std::string lo_text = text.substr(0, dots);
    const std::string hi_text = text.substr(dots + 2);
    const int lo = std::stoi(lo_text, &used);
    if (used != lo_text.size()) throw std::invalid_argument(text);
    const int hi = std::stoi(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    if (lo > hi) throw std::invalid_argument(text);
    return transposition_range(lo, hi);
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--transpose", "expected N or A..B with A <= B, got \"" + text + "\"");
  }
}

std::string number(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

void print_json(std::ostream& out, json payload) {
  payload["schema_version"] = kSchemaVersion;
  out << payload.dump(2) << '\n';
}

std::string signed_int(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

void print_result(std::ostream& out, int rank, const OptimizationResult& r) {
  const auto name = tuning_name(r.tuning);
  out << "#" << rank << "  tuning " << (name ? *name : r.tuning.helmholtz()) << "  transposition "
      << signed_int(r.transposition) << "  key " << r.key.name() << "  cipher " << r.cipher.to_string()
      << "  total " << number(r.cost.total) << '\n';
  const CostBreakdown& c = r.cost;
  out << "  span " << number(c.span) << "  fret " << number(c.fret) << "  position " << number(c.position)
      << "  jump " << number(c.jump) << "  speed " << number(c.speed) << "  key " << number(c.key_affinity)
      << "  retuning " << number(c.retuning) << '\n';
  out << render_tab(r) << '\n';
}

struct Options {
  std::string config;
  std::string format = "text";

  std::string file;
  std::string tuning = "standard";
  std::string anchor = "E2";
  std::string search = "named";
  std::string transpose = "-6..6";
  int top = 5;
  std::string weights;
  std::string key;
  int max_retuned = 1;
  int max_semitones = 2;

  int capo = 0;

  std::string to;
  std::string policy = "all";

  std::string host = "127.0.0.1";
  int port = kDefaultPort;
};

CostWeights load_weights(const Options& o) {
  CostWeights w;
  std::string config = o.config;
  if (config.empty()) {
    if (const char* env = std::getenv("FRETSOLVE_CONFIG")) config = env;
  }
  if (!config.empty()) w = parse_weights(read_file(config), w);
  if (!o.weights.empty()) w = parse_weights(read_file(o.weights), w);
  return w;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  Composition comp = parse_composition(read_file(o.file));
  if (!o.key.empty()) comp.key = parse_key(o.key);
  const CostWeights weights = load_weights(o);
  const Tuning6 base = tuning_arg(o.tuning, o.anchor);
  const std::vector<int> transpositions = transpose_arg(o.transpose);

  SearchSpace space{base, {base}, transpositions};
  if (o.search == "named") {
    space = SearchSpace::named(base, transpositions);
  } else if (o.search == "neighborhood") {
    space = SearchSpace::neighborhood(base, o.max_retuned, o.max_semitones, transpositions);
  }

  const auto results = joint_optimize(comp, space, weights, o.top);
  if (static_cast<int>(results.size()) < o.top) {
    err << "note: " << results.size() << " result(s) available, fewer than --top " << o.top << '\n';
  }
  if (o.format == "json") {
    json list = json::array();
    int rank = 0;
    for (const OptimizationResult& r : results) {
      json entry = to_json(r);
      entry["rank"] = ++rank;
      list.push_back(std::move(entry));
    }
    print_json(out, {{"results", list}});
  } else {
    int rank = 0;
    for (const OptimizationResult& r : results) print_result(out, ++rank, r);
  }
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Tuning6 tuning = tuning_arg(o.tuning, o.anchor);
  const Tuning5 t5 = to_tuning5(tuning);
  const RedundancyProfile profile = capo_profile(t5, o.capo);
  if (o.format == "json") {
    const Redundancy1Sets sets = redundancy1_sets(t5);
    print_json(out, {{"tuning", to_json(tuning)},
                     {"profile", to_json(profile)},
                     {"redundancy1", {{"low", sets.low}, {"high", sets.high}}},
                     {"iso_pitch", to_json(iso_pitch_map(t5))}});
    return kExitOk;
  }
  out << "pv,redundancy\n";
  for (std::size_t pv = 0; pv < profile.counts.size(); ++pv) out << pv << ',' << profile.counts[pv] << '\n';
  return kExitOk;
}

int cmd_retune(const Options& o, std::ostream& out, std::ostream& err) {
  Tablature tab = parse_tab(read_file(o.file));
  const Tuning6 target = tuning_arg(o.to, o.anchor);
  const ResolutionPolicy policy = parse_policy(o.policy);
  const Cipher cipher = cipher_from_retuning(tab.tuning, target);

  Tablature rewritten{target, {}, tab.notes};
  std::vector<CipherApplication> applications;
  std::vector<std::string> failures;
  for (std::size_t c = 0; c < tab.shapes.size(); ++c) {
    try {
      applications.push_back(apply_cipher(tab.shapes[c], cipher, target, policy));
      rewritten.shapes.push_back(applications.back().shape);
    } catch (const ResolutionError& e) {
      failures.push_back("chord " + std::to_string(c + 1) + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    if (o.format == "json") {
      print_json(out, {{"error", {{"code", "resolution"}, {"message", "unresolvable tones"}, {"details", failures}}}});
    }
    for (const std::string& f : failures) err << "error: " << f << '\n';
    return kExitInfeasible;
  }

  const std::string text = render_tab(rewritten);
  if (o.format == "json") {
    json chords = json::array();
    for (const CipherApplication& a : applications) chords.push_back(to_json(a));
    print_json(out, {{"tab", text}, {"cipher", to_json(cipher)}, {"tuning", to_json(target)}, {"chords", chords}});
    return kExitOk;
  }
  out << text;
  err << "cipher " << cipher.to_string() << '\n';
  for (std::size_t c = 0; c < applications.size(); ++c) {
    for (const StringResolution& r : applications[c].report) {
      if (r.outcome == StringOutcome::kResolved) {
        err << "chord " << c + 1 << " string " << r.from_string << ": "
            << (r.walked_up ? "walk_up" : std::string(to_string(r.strategy))) << " -> string "
            << r.placed.string << " fret " << r.placed.fret << '\n';
      } else if (r.outcome == StringOutcome::kOmitted) {
        err << "chord " << c + 1 << " string " << r.from_string << ": omitted pitch "
            << Pitch(r.target_pitch).scientific() << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.weights = load_weights(o);
  Service service(config);
  const bool ok = run_server(service, o.host, o.port, [&](int port) {
    if (o.format == "json") {
      print_json(out, {{"host", o.host}, {"port", port}});
    } else {
      out << "listening on " << o.host << ':' << port << '\n';
    }
    out.flush();
  });
  if (!ok) {
    err << "error: cannot bind " << o.host << ':' << o.port << '\n';
    return kExitParse;
  }
  return kExitOk;
}

void add_format(CLI::App* cmd, Options& o, std::vector<std::string> choices) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(choices)));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guitar fingering and tuning optimizer", "fretsolve"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Weights config file (also FRETSOLVE_CONFIG)");

  CLI::App* optimize = app.add_subcommand("optimize", "Rank tunings and transpositions for a .chords file");
  optimize->add_option("file", o.file, ".chords file")->required();
  optimize->add_option("--tuning", o.tuning, "Base tuning: name, Helmholtz or interval vector");
  optimize->add_option("--anchor", o.anchor, "Lowest open pitch for interval-vector tunings");
  optimize->add_option("--search", o.search)->check(CLI::IsMember({"fixed", "named", "neighborhood"}));
  optimize->add_option("--transpose", o.transpose, "N or A..B");
  optimize->add_option("--top", o.top)->check(CLI::PositiveNumber);
  optimize->add_option("--weights", o.weights, "Weights config file");
  optimize->add_option("--key", o.key, "Override the composition key");
  optimize->add_option("--max-retuned", o.max_retuned)->check(CLI::Range(0, kNumStrings));
  optimize->add_option("--max-semitones", o.max_semitones)->check(CLI::Range(0, 12));
  add_format(optimize, o, {"text", "json"});

  CLI::App* analyze = app.add_subcommand("analyze", "Redundancy profile and iso-pitch data for a tuning");
  analyze->add_option("--tuning", o.tuning)->required();
  analyze->add_option("--anchor", o.anchor);
  analyze->add_option("--capo", o.capo);
  add_format(analyze, o, {"csv", "json"});

  CLI::App* retune = app.add_subcommand("retune", "Rewrite a tab for another tuning");
  retune->add_option("file", o.file, ".tab file")->required();
  retune->add_option("--to", o.to, "Target tuning")->required();
  retune->add_option("--anchor", o.anchor);
  retune->add_option("--policy", o.policy, "walk,octave,double,omit or all");
  add_format(retune, o, {"text", "json"});

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", o.host);
  serve->add_option("--port", o.port)->check(CLI::Range(0, 65535));
  add_format(serve, o, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (analyze->parsed() && o.format == "text") o.format = "csv";

  try {
    if (optimize->parsed()) return cmd_optimize(o, out, err);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (retune->parsed()) return cmd_retune(o, out, err);
    return cmd_serve(o, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const GlobalInfeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    for (const std::string& d : e.diagnostics()) err << "  " << d << '\n';
    return kExitInfeasible;
  } catch (const InfeasibleCompositionError& e) {
    err << "error: " << e.what() << '\n';
    for (const std::string& r : e.reasons()) err << "  " << r << '\n';
    return kExitInfeasible;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
}

}  // namespace fretsolve
