/**
 * @file composition.cpp
 */

#include "fretsolve/composition.h"

#include <algorithm>
#include <array>

#include "fretsolve/errors.h"

namespace fretsolve {

std::vector<int> Chord::numbers() const {
  std::vector<int> out;
  out.reserve(pitches.size());
  for (const Pitch& p : pitches) out.push_back(p.abs());
  std::sort(out.begin(), out.end());
  return out;
}

Chord Chord::transposed(int semitones) const {
  Chord out{{}, duration_ms};
  for (const Pitch& p : pitches) out.pitches.emplace_back(p.abs() + semitones);
  return out;
}

void validate_chord(const Chord& chord) {
  if (chord.pitches.empty()) throw ArgumentError("a chord needs at least one pitch");
  if (chord.pitches.size() > static_cast<std::size_t>(kNumStrings)) {
    throw ArgumentError("a chord has at most 6 pitches, got " + std::to_string(chord.pitches.size()));
  }
  if (!(chord.duration_ms > 0.0)) throw ArgumentError("chord duration must be positive");
}

std::vector<double> Composition::durations_ms() const {
  std::vector<double> out;
  out.reserve(chords.size());
  for (const Chord& c : chords) out.push_back(c.duration_ms);
  return out;
}

Composition Composition::transposed(int semitones) const {
  Composition out{key ? std::optional<Key>(key->transposed(semitones)) : std::nullopt, tempo_bpm, {}};
  out.chords.reserve(chords.size());
  for (const Chord& c : chords) out.chords.push_back(c.transposed(semitones));
  return out;
}

Key effective_key(const Composition& composition) {
  if (composition.key) return *composition.key;

  std::array<int, 12> histogram{};
  for (const Chord& c : composition.chords) {
    for (const Pitch& p : c.pitches) ++histogram[static_cast<std::size_t>(p.pitch_class())];
  }
  std::optional<int> final_bass;
  if (!composition.chords.empty() && !composition.chords.back().pitches.empty()) {
    final_bass = composition.chords.back().numbers().front() % 12;
  }

  Key best{PitchClass{0}, Mode::kMajor};
  int best_score = -1;
  bool best_bass = false;
  for (Mode mode : {Mode::kMajor, Mode::kMinor}) {
    for (int tonic = 0; tonic < 12; ++tonic) {
      const Key key{PitchClass{tonic}, mode};
      int score = 0;
      for (PitchClass pc : key.scale()) score += histogram[static_cast<std::size_t>(pc.pc)];
      const bool bass = final_bass && *final_bass == tonic;
      if (score > best_score || (score == best_score && bass && !best_bass)) {
        best = key;
        best_score = score;
        best_bass = bass;
      }
    }
  }
  return best;
}

}  // namespace fretsolve
