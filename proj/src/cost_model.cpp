/**
 * @file cost_model.cpp
 * @brief Playability cost functions.
 */

#include "fretsolve/cost_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxFiniteSpan = 4;
constexpr int kJumpSaturation = 12;

// An infinite cost forbids a shape outright, whatever its weight.
double weighted(double weight, double cost) noexcept {
  return std::isinf(cost) ? cost : weight * cost;
}

std::string trimmed(std::string s) {
  const auto not_space = [](unsigned char c) { return std::isspace(c) == 0; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

double apply_curve(CostCurve curve, double t) noexcept {
  t = std::clamp(t, 0.0, 1.0);
  return curve == CostCurve::kConvex ? t * t : t;
}

CostWeights CostWeights::scaled(double k) const noexcept {
  CostWeights out = *this;
  out.w_span *= k;
  out.w_jump *= k;
  out.w_fret *= k;
  out.w_speed *= k;
  out.w_position *= k;
  out.w_key_affinity *= k;
  return out;
}

void CostWeights::validate() const {
  for (double w : {w_span, w_jump, w_fret, w_speed, w_position, w_key_affinity}) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("cost weights must be finite and >= 0");
  }
  if (!std::isfinite(fitts.a_s) || fitts.a_s < 0.0 || !std::isfinite(fitts.b_s_per_bit) ||
      fitts.b_s_per_bit < 0.0) {
    throw ArgumentError("Fitts parameters must be finite and >= 0");
  }
  if (!(fitts.scale_length_mm > 0.0) || !std::isfinite(fitts.scale_length_mm)) {
    throw ArgumentError("scale length must be positive");
  }
}

CostWeights parse_weights(std::string_view text, CostWeights base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no, 1);
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    const int value_col = static_cast<int>(eq) + 2;

    if (key == "curve") {
      if (value == "linear") {
        base.curve = CostCurve::kLinear;
      } else if (value == "convex") {
        base.curve = CostCurve::kConvex;
      } else {
        throw ParseError("curve must be linear or convex", line_no, value_col);
      }
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw ParseError("\"" + value + "\" is not a number", line_no, value_col);
    }
    if (key == "w_span") {
      base.w_span = v;
    } else if (key == "w_jump") {
      base.w_jump = v;
    } else if (key == "w_fret") {
      base.w_fret = v;
    } else if (key == "w_speed") {
      base.w_speed = v;
    } else if (key == "w_position") {
      base.w_position = v;
    } else if (key == "w_key_affinity") {
      base.w_key_affinity = v;
    } else if (key == "fitts_a") {
      base.fitts.a_s = v;
    } else if (key == "fitts_b") {
      base.fitts.b_s_per_bit = v;
    } else if (key == "scale_length_mm") {
      base.fitts.scale_length_mm = v;
    } else {
      throw ParseError("unknown weight \"" + key + "\"", line_no, 1);
    }
  }
  base.validate();
  return base;
}

double fret_position_mm(double fret, double scale_length_mm) noexcept {
  return scale_length_mm * (1.0 - std::exp2(-fret / 12.0));
}

double span_cost(const ChordShape& shape, CostCurve curve) noexcept {
  const int d = shape.span();
  if (d > kMaxFiniteSpan) return kInf;
  return apply_curve(curve, static_cast<double>(d) / kMaxFiniteSpan);
}

double fret_cost(const ChordShape& shape, CostCurve curve) noexcept {
  return apply_curve(curve, static_cast<double>(shape.fretted_count()) / kNumStrings);
}

double position_cost(const ChordShape& shape) noexcept {
  const auto index = shape.index_fret();
  return index ? static_cast<double>(*index) / kMaxFret : 0.0;
}

double jump_cost(std::optional<int> from_index, std::optional<int> to_index,
                 CostCurve curve) noexcept {
  if (!from_index || !to_index) return 0.0;
  const int j = std::abs(*to_index - *from_index);
  return apply_curve(curve, static_cast<double>(j) / kJumpSaturation);
}

double jump_cost(const ChordShape& prev, const ChordShape& next, CostCurve curve) noexcept {
  return jump_cost(prev.index_fret(), next.index_fret(), curve);
}

double fitts_movement_time_s(std::optional<int> from_index, std::optional<int> to_index,
                             const FittsParams& fitts) noexcept {
  if (!from_index || !to_index || *from_index == *to_index) return fitts.a_s;
  const double L = fitts.scale_length_mm;
  const auto centre = [L](int f) {
    return 0.5 * (fret_position_mm(f - 1, L) + fret_position_mm(f, L));
  };
  const double distance = std::abs(centre(*to_index) - centre(*from_index));
  const double width = fret_position_mm(*to_index, L) - fret_position_mm(*to_index - 1, L);
  return fitts.a_s + fitts.b_s_per_bit * std::log2(distance / width + 1.0);
}

double speed_cost(std::optional<int> from_index, std::optional<int> to_index, double allowed_ms,
                  const FittsParams& fitts) {
  if (!(allowed_ms > 0.0)) throw ArgumentError("allowed duration must be positive");
  return fitts_movement_time_s(from_index, to_index, fitts) * 1000.0 / allowed_ms;
}

double speed_cost(const ChordShape& prev, const ChordShape& next, double allowed_ms,
                  const FittsParams& fitts) {
  return speed_cost(prev.index_fret(), next.index_fret(), allowed_ms, fitts);
}

double key_affinity_cost(const Tuning6& tuning, const Key& key) noexcept {
  const auto degrees = key.primary_degrees();
  int hits = 0;
  for (const Pitch& p : tuning.open()) {
    if (std::find(degrees.begin(), degrees.end(), PitchClass::of(p.abs())) != degrees.end()) ++hits;
  }
  return 1.0 - static_cast<double>(hits) / kNumStrings;
}

std::optional<int> next_hand(std::optional<int> prev_hand, const ChordShape& shape) noexcept {
  const auto index = shape.index_fret();
  return index ? index : prev_hand;
}

double node_cost(const ChordShape& shape, const CostWeights& w) noexcept {
  return weighted(w.w_span, span_cost(shape, w.curve)) + w.w_fret * fret_cost(shape, w.curve) +
         w.w_position * position_cost(shape);
}

double edge_cost(std::optional<int> prev_hand, const ChordShape& next, double allowed_ms,
                 const CostWeights& w) {
  const auto to = next_hand(prev_hand, next);
  return w.w_jump * jump_cost(prev_hand, to, w.curve) +
         w.w_speed * speed_cost(prev_hand, to, allowed_ms, w.fitts);
}

CostBreakdown total_cost(std::span<const ChordShape> shapes, std::span<const double> durations_ms,
                         const Tuning6& tuning, const Key& key, const CostWeights& w) {
  if (shapes.size() != durations_ms.size()) {
    throw ArgumentError("one duration is needed per chord shape");
  }
  CostBreakdown b;
  std::optional<int> hand;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const ChordShape& shape = shapes[i];
    if (i > 0) {
      const auto to = next_hand(hand, shape);
      b.jump += w.w_jump * jump_cost(hand, to, w.curve);
      b.speed += w.w_speed * speed_cost(hand, to, durations_ms[i - 1], w.fitts);
      b.total += edge_cost(hand, shape, durations_ms[i - 1], w);
    }
    b.span += weighted(w.w_span, span_cost(shape, w.curve));
    b.fret += w.w_fret * fret_cost(shape, w.curve);
    b.position += w.w_position * position_cost(shape);
    b.total += node_cost(shape, w);
    hand = next_hand(hand, shape);
  }
  b.key_affinity = w.w_key_affinity * key_affinity_cost(tuning, key);
  b.total += b.key_affinity;
  return b;
}

}  // namespace fretsolve
