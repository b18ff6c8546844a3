// Brute-force reference implementations used by the unit and acceptance tests.
// They work from absolute open-string pitches and never call the library's
// pitch-value or enumeration code.

#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "fretsolve/cost_model.h"
#include "fretsolve/fingering.h"
#include "fretsolve/optimizer.h"

namespace oracle {

using Frets = std::array<int, 6>;
using Open = std::array<int, 6>;

inline Open open_of(const fretsolve::Tuning6& t) {
  Open o{};
  for (int s = 0; s < 6; ++s) o[s] = t.open()[s].abs();
  return o;
}

// Pitch value measured from the lowest open string.
inline int pv(const Open& open, int string, int fret) { return open[string - 1] - open[0] + fret; }

inline int redundancy(const Open& open, int value, int min_fret = 0, int max_fret = 24) {
  int n = 0;
  for (int s = 1; s <= 6; ++s) {
    for (int f = min_fret; f <= max_fret; ++f) {
      if (pv(open, s, f) == value) ++n;
    }
  }
  return n;
}

// Fingers needed: strings at one fret share a finger when every string between
// them is fretted strictly higher.
inline int finger_count(const Frets& frets) {
  int fingers = 0;
  std::set<int> levels;
  for (int f : frets) {
    if (f > 0) levels.insert(f);
  }
  for (int level : levels) {
    int last = -1;
    for (int s = 0; s < 6; ++s) {
      if (frets[s] != level) continue;
      bool joined = last >= 0;
      for (int k = last + 1; joined && k < s; ++k) {
        if (frets[k] <= level) joined = false;
      }
      if (!joined) ++fingers;
      last = s;
    }
  }
  return fingers;
}

inline int fret_span(const Frets& frets) {
  int lo = 99;
  int hi = -1;
  for (int f : frets) {
    if (f > 0) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  }
  return hi < 0 ? 0 : hi - lo;
}

// Every way to put each chord pitch on its own string, kept when the hand can
// hold it (span at most 4 frets, at most 4 fingers).
inline std::set<Frets> shapes(const std::vector<int>& pitches, const Open& open) {
  std::set<Frets> out;
  Frets current;
  current.fill(-1);
  std::vector<int> sorted = pitches;
  std::sort(sorted.begin(), sorted.end());
  auto place = [&](auto&& self, std::size_t i) -> void {
    if (i == sorted.size()) {
      if (fret_span(current) <= 4 && finger_count(current) <= 4) out.insert(current);
      return;
    }
    for (int s = 0; s < 6; ++s) {
      const int f = sorted[i] - open[s];
      if (current[s] != -1 || f < 0 || f > 24) continue;
      current[s] = f;
      self(self, i + 1);
      current[s] = -1;
    }
  };
  place(place, 0);
  return out;
}

// Sorted absolute pitches sounded by a fret vector.
inline std::vector<int> sounded(const Frets& frets, const Open& open) {
  std::vector<int> out;
  for (int s = 0; s < 6; ++s) {
    if (frets[s] >= 0) out.push_back(open[s] + frets[s]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Minimum total cost over the full product of candidate shapes.
inline double best_cost(const fretsolve::Composition& comp, const fretsolve::Tuning6& tuning,
                        const fretsolve::Key& key, const fretsolve::CostWeights& w, int max_candidates) {
  std::vector<std::vector<fretsolve::ChordShape>> candidates;
  for (const auto& chord : comp.chords) candidates.push_back(fretsolve::enumerate_shapes(chord, tuning, max_candidates));
  const std::vector<double> durations = comp.durations_ms();
  std::vector<fretsolve::ChordShape> pick(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  auto walk = [&](auto&& self, std::size_t i) -> void {
    if (i == candidates.size()) {
      best = std::min(best, fretsolve::total_cost(pick, durations, tuning, key, w).total);
      return;
    }
    for (const auto& s : candidates[i]) {
      pick[i] = s;
      self(self, i + 1);
    }
  };
  walk(walk, 0);
  return best;
}

// Generate-and-filter over [-m, m]^6: open_i = base_i - c_i, at most r strings moved.
inline std::set<fretsolve::Tuning6> retunings(const fretsolve::Tuning6& base, int r, int m) {
  std::set<fretsolve::Tuning6> out;
  const Open b = open_of(base);
  std::array<int, 6> c{};
  const int width = 2 * m + 1;
  int total = 1;
  for (int i = 0; i < 6; ++i) total *= width;
  for (int code = 0; code < total; ++code) {
    int x = code;
    int moved = 0;
    for (int i = 0; i < 6; ++i) {
      c[i] = x % width - m;
      x /= width;
      if (c[i] != 0) ++moved;
    }
    if (moved == 0 || moved > r) continue;
    Open o{};
    bool ok = true;
    for (int i = 0; i < 6; ++i) {
      o[i] = b[i] - c[i];
      if (o[i] < 0 || o[i] > 127 || (i > 0 && o[i] <= o[i - 1])) ok = false;
    }
    if (ok) out.insert(fretsolve::Tuning6::from_numbers(o));
  }
  return out;
}

// Random chord of distinct pitches that standard-tuning hands can usually reach.
inline fretsolve::Chord random_chord(std::mt19937& rng, int max_pitches, int lo = 40, int hi = 76) {
  std::uniform_int_distribution<int> count(1, max_pitches);
  std::uniform_int_distribution<int> pitch(lo, hi);
  std::uniform_int_distribution<int> dur(150, 1200);
  std::set<int> chosen;
  const int n = count(rng);
  while (static_cast<int>(chosen.size()) < n) chosen.insert(pitch(rng));
  fretsolve::Chord chord;
  for (int p : chosen) chord.pitches.emplace_back(p);
  chord.duration_ms = dur(rng);
  return chord;
}

}  // namespace oracle
