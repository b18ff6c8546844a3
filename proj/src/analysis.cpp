/**
 * @file analysis.cpp
 * @brief Redundancy counting and derived tuning diagnostics.
 */

#include "fretsolve/analysis.h"

#include <algorithm>
#include <array>
#include <limits>

#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

RedundancyProfile build_profile(const Tuning5& tuning, int capo) {
  RedundancyProfile profile;
  profile.capo = capo;
  const int max_pv = tuning.open_offset(kNumStrings) + kMaxFret - capo;
  profile.counts.resize(static_cast<std::size_t>(max_pv + 1));
  long total = 0;
  int covered = 0;
  profile.min = kNumStrings;
  profile.max = 0;
  for (int p = 0; p <= max_pv; ++p) {
    // pv p above the capoed lowest string is pv p + capo above the open lowest string.
    const int r = redundancy(p + capo, tuning, capo, kMaxFret);
    profile.counts[static_cast<std::size_t>(p)] = r;
    profile.min = std::min(profile.min, r);
    profile.max = std::max(profile.max, r);
    if (r > 0) {
      total += r;
      ++covered;
    }
  }
  profile.range_width = covered;
  profile.mean = covered == 0 ? 0.0 : static_cast<double>(total) / covered;
  return profile;
}

}  // namespace

int redundancy(int pv, const Tuning5& tuning, int min_fret, int max_fret) {
  int count = 0;
  int offset = 0;
  for (int i = 0; i < kNumStrings; ++i) {
    if (i > 0) offset += tuning.intervals()[static_cast<std::size_t>(i - 1)];
    const int fret = pv - offset;
    if (fret >= min_fret && fret <= max_fret) ++count;
  }
  return count;
}

RedundancyProfile redundancy_profile(const Tuning5& tuning) { return build_profile(tuning, 0); }

RedundancyProfile capo_profile(const Tuning5& tuning, int capo) {
  if (capo < 0 || capo >= kMaxFret) {
    throw BoundsError("capo " + std::to_string(capo) + " must leave at least one usable fret (0..23)");
  }
  return build_profile(tuning, capo);
}

Redundancy1Sets redundancy1_sets(const Tuning5& tuning) {
  Redundancy1Sets sets;
  const int max_pv = tuning.max_pv();
  for (int p = 0; p <= max_pv && redundancy(p, tuning) == 1; ++p) sets.low.push_back(p);
  for (int p = max_pv; p >= 0 && redundancy(p, tuning) == 1; --p) sets.high.push_back(p);
  std::reverse(sets.high.begin(), sets.high.end());
  return sets;
}

IsoPitchMap iso_pitch_map(const Tuning5& tuning) {
  IsoPitchMap map;
  for (int s = 1; s <= kNumStrings; ++s) {
    for (int f = 0; f <= kMaxFret; ++f) {
      const Position pos{s, f};
      map[pitch_value(pos, tuning)].push_back(pos);
    }
  }
  return map;
}

bool passes_redundancy1_check(const Tuning5& tuning, std::span<const int> chord_pvs) {
  std::array<int, kNumStrings> single_string_tones{};
  for (int pv : chord_pvs) {
    if (redundancy(pv, tuning) != 1) continue;
    for (int s = 1; s <= kNumStrings; ++s) {
      const int fret = pv - tuning.open_offset(s);
      if (fret >= 0 && fret <= kMaxFret) {
        if (++single_string_tones[static_cast<std::size_t>(s - 1)] > 1) return false;
        break;
      }
    }
  }
  return true;
}

PlayabilityHint tuning_playability_hint(const Tuning5& tuning,
                                        std::span<const std::vector<int>> chords_pv) {
  PlayabilityHint hint;
  long total = 0;
  int tones = 0;
  for (std::size_t c = 0; c < chords_pv.size(); ++c) {
    for (int pv : chords_pv[c]) {
      const int r = redundancy(pv, tuning);
      if (r == 0) {
        hint.unplayable = true;
        hint.problems.push_back("chord " + std::to_string(c + 1) + ": pitch value " +
                                std::to_string(pv) + " is off the fingerboard");
      }
      if (r >= kHighRedundancy) ++hint.high_redundancy_count;
      total += r;
      ++tones;
    }
    if (!passes_redundancy1_check(tuning, chords_pv[c])) {
      hint.unplayable = true;
      hint.problems.push_back("chord " + std::to_string(c + 1) +
                              ": two tones share a single-string region");
    }
  }
  if (hint.unplayable) {
    hint.score = std::numeric_limits<double>::infinity();
    return hint;
  }
  if (tones == 0) return hint;

  hint.mean_redundancy = static_cast<double>(total) / tones;
  double band = 0.0;
  if (hint.mean_redundancy < kRedundancyBandLow) band = kRedundancyBandLow - hint.mean_redundancy;
  if (hint.mean_redundancy > kRedundancyBandHigh) band = hint.mean_redundancy - kRedundancyBandHigh;
  hint.score = band + static_cast<double>(hint.high_redundancy_count) / tones;
  return hint;
}

}  // namespace fretsolve
