/**
 * @file composition.h
 * @brief Chords and compositions.
 */

#pragma once

#include <optional>
#include <vector>

#include "fretsolve/pitch.h"

namespace fretsolve {

inline constexpr double kDefaultTempoBpm = 120.0;

/// Pitches sounding together, 1..6 of them. Duplicates mean doubled unisons.
struct Chord {
  std::vector<Pitch> pitches;
  double duration_ms = 500.0;

  /// Sorted absolute note numbers.
  std::vector<int> numbers() const;
  /// Copy moved by `semitones`; throws RangeError past the pitch range.
  Chord transposed(int semitones) const;

  bool operator==(const Chord&) const = default;
};

/// Throws ArgumentError when the chord is empty, has more than 6 pitches or a
/// nonpositive duration.
void validate_chord(const Chord& chord);

struct Composition {
  std::optional<Key> key;
  double tempo_bpm = kDefaultTempoBpm;
  std::vector<Chord> chords;

  std::vector<double> durations_ms() const;
  Composition transposed(int semitones) const;

  bool operator==(const Composition&) const = default;
};

/// Declared key, or the key whose scale covers most of the notes. Ties prefer a
/// tonic equal to the final chord's bass, then major, then the lower pitch class.
Key effective_key(const Composition& composition);

}  // namespace fretsolve
