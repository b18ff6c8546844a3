/**
 * @file cost_model.h
 * @brief Playability costs for chord shapes and shape sequences.
 *
 * Per chord: span (fret stretch), fret (number of fretted strings) and position
 * (how far up the neck the index finger sits). Per transition: jump (index-finger
 * travel in frets) and speed (Fitts movement time over the time available).
 * Per piece: key affinity between the tuning's open strings and the key.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fretsolve/pitch.h"
#include "fretsolve/shape.h"

namespace fretsolve {

/// Shape of the monotone curve mapping a normalized quantity in [0, 1] to a cost in [0, 1].
enum class CostCurve { kLinear, kConvex };

double apply_curve(CostCurve curve, double t) noexcept;

struct FittsParams {
  double a_s = 0.0;           ///< intercept, seconds
  double b_s_per_bit = 0.15;  ///< slope, seconds per bit
  double scale_length_mm = 648.0;
};

struct CostWeights {
  double w_span = 1.0;
  double w_jump = 1.0;
  double w_fret = 1.0;
  double w_speed = 1.0;
  double w_position = 0.25;
  double w_key_affinity = 1.0;
  FittsParams fitts;
  CostCurve curve = CostCurve::kLinear;

  /// Every weight multiplied by `k` (Fitts parameters untouched).
  CostWeights scaled(double k) const noexcept;
  /// Throws ArgumentError for negative or non-finite weights.
  void validate() const;
};

/// Applies `key = value` lines (`#` comments) on top of `base`.
/// Keys: w_span, w_jump, w_fret, w_speed, w_position, w_key_affinity, fitts_a,
/// fitts_b, scale_length_mm, curve (linear|convex). Unknown keys are errors.
CostWeights parse_weights(std::string_view text, CostWeights base = {});

/// Distance of fret wire `fret` from the nut: L * (1 - 2^(-fret/12)).
double fret_position_mm(double fret, double scale_length_mm) noexcept;

/// 0 for span 0, rising to 1 at a 4-fret span (five frets covered), +inf beyond.
double span_cost(const ChordShape& shape, CostCurve curve = CostCurve::kLinear) noexcept;

/// Fraction of the six strings that are fretted.
double fret_cost(const ChordShape& shape, CostCurve curve = CostCurve::kLinear) noexcept;

/// Index-finger height: index fret / 24, 0 when nothing is fretted.
double position_cost(const ChordShape& shape) noexcept;

/// Index-finger travel |to - from| / 12, clamped at 1. 0 when either side has no hand position.
double jump_cost(std::optional<int> from_index, std::optional<int> to_index,
                 CostCurve curve = CostCurve::kLinear) noexcept;
double jump_cost(const ChordShape& prev, const ChordShape& next,
                 CostCurve curve = CostCurve::kLinear) noexcept;

/// Fitts movement time in seconds for moving the index finger between fret centres.
double fitts_movement_time_s(std::optional<int> from_index, std::optional<int> to_index,
                             const FittsParams& fitts) noexcept;

/// Movement time divided by the time allowed. Throws ArgumentError if allowed_ms <= 0.
double speed_cost(std::optional<int> from_index, std::optional<int> to_index, double allowed_ms,
                  const FittsParams& fitts = {});
double speed_cost(const ChordShape& prev, const ChordShape& next, double allowed_ms,
                  const FittsParams& fitts = {});

/// 1 - (open strings whose pitch class is the key's tonic, subdominant or dominant) / 6.
double key_affinity_cost(const Tuning6& tuning, const Key& key) noexcept;

/// Hand position after playing `shape`: its index fret, or the previous one for open chords.
std::optional<int> next_hand(std::optional<int> prev_hand, const ChordShape& shape) noexcept;

/// Weighted span + fret + position for one chord.
double node_cost(const ChordShape& shape, const CostWeights& w) noexcept;

/// Weighted jump + speed for moving from hand position `prev_hand` to `next`.
/// `allowed_ms` is the duration of the chord being left.
double edge_cost(std::optional<int> prev_hand, const ChordShape& next, double allowed_ms,
                 const CostWeights& w);

/// Weighted terms; `total` is accumulated left to right over the sequence
/// (node, then edge + node per following chord, then the piece-level terms).
struct CostBreakdown {
  double span = 0.0;
  double fret = 0.0;
  double position = 0.0;
  double jump = 0.0;
  double speed = 0.0;
  double key_affinity = 0.0;
  double retuning = 0.0;
  double total = 0.0;

  double term_sum() const noexcept {
    return span + fret + position + jump + speed + key_affinity + retuning;
  }
};

/// Cost of playing `shapes` with chord durations `durations_ms` (same length).
CostBreakdown total_cost(std::span<const ChordShape> shapes, std::span<const double> durations_ms,
                         const Tuning6& tuning, const Key& key, const CostWeights& w);

}  // namespace fretsolve
