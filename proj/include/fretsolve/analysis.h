/**
 * @file analysis.h
 * @brief Tuning diagnostics: redundancy, single-string regions, capo and iso-pitch lines.
 */

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fretsolve/pitch.h"

namespace fretsolve {

/// Number of strings that can sound relative pitch `pv` within frets [min_fret, max_fret].
/// Counted directly from the open offsets, without enumerating positions.
int redundancy(int pv, const Tuning5& tuning, int min_fret = 0, int max_fret = kMaxFret);

struct RedundancyProfile {
  int capo = 0;
  /// counts[p] = redundancy of pv p, for p in [0, max_pv].
  std::vector<int> counts;
  int min = 0;
  int max = 0;
  /// Mean over pitch values with redundancy >= 1.
  double mean = 0.0;
  /// Number of distinct pitch values covered, max_pv + 1 when there are no gaps.
  int range_width = 0;

  int max_pv() const noexcept { return static_cast<int>(counts.size()) - 1; }
};

RedundancyProfile redundancy_profile(const Tuning5& tuning);

/// Profile with a capo at `capo`: frets below it are unusable and pitch values are
/// re-anchored so pv 0 is the capoed lowest string. Throws BoundsError unless
/// 0 <= capo < 24.
RedundancyProfile capo_profile(const Tuning5& tuning, int capo);

struct Redundancy1Sets {
  std::vector<int> low;
  std::vector<int> high;
};

/// Pitch values that only the lowest (resp. highest) string can sound.
Redundancy1Sets redundancy1_sets(const Tuning5& tuning);

using IsoPitchMap = std::map<int, std::vector<Position>>;

/// Groups all 150 positions by the pitch value they sound.
IsoPitchMap iso_pitch_map(const Tuning5& tuning);

/// False when two tones of a chord (relative pvs) fall in the same single-string
/// region, which no fingering can play.
bool passes_redundancy1_check(const Tuning5& tuning, std::span<const int> chord_pvs);

struct PlayabilityHint {
  /// Lower is better; 0 is neutral. +inf when `unplayable`.
  double score = 0.0;
  double mean_redundancy = 0.0;
  int high_redundancy_count = 0;
  bool unplayable = false;
  std::vector<std::string> problems;
};

inline constexpr double kRedundancyBandLow = 1.5;
inline constexpr double kRedundancyBandHigh = 3.0;
inline constexpr int kHighRedundancy = 4;

/// Scores how well a tuning suits a set of chords given as relative pitch values:
/// linear penalty for mean redundancy outside [1.5, 3.0], plus the fraction of tones
/// with redundancy 4 or more. Unplayable tones or single-string conflicts flag the
/// tuning as unplayable.
PlayabilityHint tuning_playability_hint(const Tuning5& tuning,
                                        std::span<const std::vector<int>> chords_pv);

}  // namespace fretsolve
