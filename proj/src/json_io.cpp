/**
 * @file json_io.cpp
 */

#include "fretsolve/json_io.h"

#include <cmath>

#include "fretsolve/errors.h"
#include "fretsolve/score_io.h"

namespace fretsolve {

using nlohmann::json;

namespace {

// JSON has no infinity; forbidden costs are reported as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_field(const json& j, const char* name) {
  if (!j.is_number()) throw ArgumentError(std::string("field \"") + name + "\" must be a number");
  return j.get<double>();
}

}  // namespace

json to_json(const Tuning6& tuning) {
  json j = {{"helmholtz", tuning.helmholtz()},
            {"scientific", tuning.scientific()},
            {"intervals", to_tuning5(tuning).to_string()},
            {"open", json::array()}};
  for (const Pitch& p : tuning.open()) j["open"].push_back(p.abs());
  if (const auto name = tuning_name(tuning)) j["name"] = *name;
  return j;
}

json to_json(const Key& key) {
  return {{"name", key.name()},
          {"tonic", key.tonic.pc},
          {"mode", key.mode == Mode::kMajor ? "major" : "minor"}};
}

json to_json(const Cipher& cipher) {
  return {{"offsets", cipher.offsets},
          {"text", cipher.to_string()},
          {"kind", std::string(to_string(interpret_cipher(cipher)))},
          {"nonzero", cipher.nonzero_count()},
          {"l1", cipher.l1_norm()}};
}

json to_json(const ChordShape& shape) {
  json j = json::array();
  for (int f : shape.frets()) j.push_back(f == kMuted ? json(nullptr) : json(f));
  return j;
}

json to_json(const CostBreakdown& cost) {
  return {{"span", number_or_null(cost.span)},
          {"fret", number_or_null(cost.fret)},
          {"position", number_or_null(cost.position)},
          {"jump", number_or_null(cost.jump)},
          {"speed", number_or_null(cost.speed)},
          {"key_affinity", number_or_null(cost.key_affinity)},
          {"retuning", number_or_null(cost.retuning)},
          {"total", number_or_null(cost.total)}};
}

json to_json(const OptimizationResult& result) {
  json fingering = json::array();
  for (const ChordShape& s : result.fingering) fingering.push_back(to_json(s));
  return {{"tuning", to_json(result.tuning)},
          {"transposition", result.transposition},
          {"key", to_json(result.key)},
          {"cipher", to_json(result.cipher)},
          {"fingering", fingering},
          {"chord_pitches", result.chord_pitches},
          {"cost", to_json(result.cost)},
          {"tab", render_tab(result)}};
}

json to_json(const RedundancyProfile& profile) {
  return {{"capo", profile.capo},
          {"counts", profile.counts},
          {"min", profile.min},
          {"max", profile.max},
          {"mean", profile.mean},
          {"range_width", profile.range_width},
          {"max_pv", profile.max_pv()}};
}

json to_json(const IsoPitchMap& map) {
  json lines = json::array();
  int total = 0;
  for (const auto& [pv, positions] : map) {
    json ps = json::array();
    for (const Position& p : positions) ps.push_back({p.string, p.fret});
    lines.push_back({{"pv", pv}, {"positions", ps}});
    total += static_cast<int>(positions.size());
  }
  return {{"lines", lines}, {"position_count", total}};
}

json to_json(const CipherApplication& application) {
  json report = json::array();
  for (const StringResolution& r : application.report) {
    json entry = {{"string", r.from_string}};
    switch (r.outcome) {
      case StringOutcome::kSilent:
        entry["outcome"] = "silent";
        break;
      case StringOutcome::kShifted:
        entry["outcome"] = "shifted";
        break;
      case StringOutcome::kResolved:
        entry["outcome"] = "resolved";
        entry["strategy"] = r.walked_up ? "walk_up" : std::string(to_string(r.strategy));
        break;
      case StringOutcome::kOmitted:
        entry["outcome"] = "omitted";
        break;
    }
    if (r.outcome != StringOutcome::kSilent) {
      entry["shifted_fret"] = r.shifted_fret;
      entry["target_pitch"] = r.target_pitch;
    }
    if (r.outcome == StringOutcome::kShifted || r.outcome == StringOutcome::kResolved) {
      entry["placed"] = {r.placed.string, r.placed.fret};
      entry["sounded_pitch"] = r.sounded_pitch;
    }
    report.push_back(entry);
  }
  return {{"shape", to_json(application.shape)}, {"report", report}};
}

CostWeights weights_from_json(const json& j, CostWeights base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw ArgumentError("weights must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "curve") {
      if (value == "linear") {
        base.curve = CostCurve::kLinear;
      } else if (value == "convex") {
        base.curve = CostCurve::kConvex;
      } else {
        throw ArgumentError("curve must be \"linear\" or \"convex\"");
      }
    } else if (key == "w_span") {
      base.w_span = number_field(value, "w_span");
    } else if (key == "w_jump") {
      base.w_jump = number_field(value, "w_jump");
    } else if (key == "w_fret") {
      base.w_fret = number_field(value, "w_fret");
    } else if (key == "w_speed") {
      base.w_speed = number_field(value, "w_speed");
    } else if (key == "w_position") {
      base.w_position = number_field(value, "w_position");
    } else if (key == "w_key_affinity") {
      base.w_key_affinity = number_field(value, "w_key_affinity");
    } else if (key == "fitts_a") {
      base.fitts.a_s = number_field(value, "fitts_a");
    } else if (key == "fitts_b") {
      base.fitts.b_s_per_bit = number_field(value, "fitts_b");
    } else if (key == "scale_length_mm") {
      base.fitts.scale_length_mm = number_field(value, "scale_length_mm");
    } else {
      throw ArgumentError("unknown weight \"" + key + "\"");
    }
  }
  base.validate();
  return base;
}

Composition composition_from_json(const json& j) {
  if (j.is_string()) return parse_composition(j.get<std::string>());
  if (!j.is_object()) throw ArgumentError("composition must be .chords text or an object");

  Composition comp;
  if (j.contains("key") && !j["key"].is_null()) {
    if (!j["key"].is_string()) throw ArgumentError("key must be a string");
    comp.key = parse_key(j["key"].get<std::string>());
  }
  if (j.contains("tempo")) {
    comp.tempo_bpm = number_field(j["tempo"], "tempo");
    if (!(comp.tempo_bpm > 0.0)) throw ArgumentError("tempo must be positive");
  }
  if (!j.contains("chords") || !j["chords"].is_array() || j["chords"].empty()) {
    throw ArgumentError("composition needs a nonempty \"chords\" array");
  }
  int index = 0;
  for (const json& c : j["chords"]) {
    ++index;
    const std::string where = "chord " + std::to_string(index);
    if (!c.is_object() || !c.contains("pitches") || !c["pitches"].is_array()) {
      throw ArgumentError(where + " needs a \"pitches\" array");
    }
    Chord chord;
    for (const json& p : c["pitches"]) {
      if (!p.is_string()) throw ArgumentError(where + ": pitches must be strings");
      try {
        chord.pitches.push_back(parse_scientific_pitch(p.get<std::string>()));
      } catch (const ParseError& e) {
        throw ArgumentError(where + ": " + e.detail());
      }
    }
    if (chord.pitches.size() > static_cast<std::size_t>(kNumStrings)) {
      throw ArgumentError(where + " has " + std::to_string(chord.pitches.size()) +
                          " pitches; at most 6 fit on the strings");
    }
    if (c.contains("duration_ms")) {
      chord.duration_ms = number_field(c["duration_ms"], "duration_ms");
    } else {
      const double beats = c.contains("beats") ? number_field(c["beats"], "beats") : 1.0;
      chord.duration_ms = beats * 60000.0 / comp.tempo_bpm;
    }
    try {
      validate_chord(chord);
    } catch (const ArgumentError& e) {
      throw ArgumentError(where + ": " + e.what());
    }
    comp.chords.push_back(std::move(chord));
  }
  return comp;
}

}  // namespace fretsolve
