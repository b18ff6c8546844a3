/**
 * @file pitch.h
 * @brief Pitches, keys, tuning vectors, fingerboard positions and tones.
 *
 * Absolute pitches use conventional note numbering (E2 = 40, middle C = 60).
 * Relative pitch values ("pv") are measured in semitones above the lowest
 * open string of a tuning, so pv 0 is always string 1 at fret 0.
 *
 * Strings are numbered 1..6 from the lowest open pitch upwards.
 */

#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace fretsolve {

inline constexpr int kNumStrings = 6;
inline constexpr int kMaxFret = 24;
inline constexpr int kNumFretPositions = kMaxFret + 1;
inline constexpr int kMinPitch = 0;
inline constexpr int kMaxPitch = 127;

/// Integer-valued absolute pitch in [0, 127].
class Pitch {
 public:
  /// Throws RangeError outside [0, 127].
  explicit Pitch(int abs);

  int abs() const noexcept { return abs_; }
  int pitch_class() const noexcept { return abs_ % 12; }

  /// Scientific spelling with sharps, e.g. "F#3".
  std::string scientific() const;
  /// Helmholtz spelling with sharps, e.g. "f#" (F#3) or "e'" (E4).
  std::string helmholtz() const;

  auto operator<=>(const Pitch&) const = default;

 private:
  int abs_;
};

/// Parses scientific ("E2", "F#3", "Bb4") or Helmholtz ("E", "d", "e'", "C,") spellings.
/// Throws ParseError with column information relative to `text`.
Pitch parse_pitch(std::string_view text);

/// Parses a scientific spelling only; Helmholtz forms are rejected.
Pitch parse_scientific_pitch(std::string_view text);

struct PitchClass {
  int pc = 0;

  /// Reduces any integer into [0, 12).
  static PitchClass of(int semitones) noexcept { return PitchClass{((semitones % 12) + 12) % 12}; }
  std::string name() const;

  auto operator<=>(const PitchClass&) const = default;
};

/// Parses a pitch-class name ("C", "F#", "Eb"). Case-insensitive on the letter.
PitchClass parse_pitch_class(std::string_view text);

enum class Mode { kMajor, kMinor };

/// A musical key. Minor uses the natural minor scale.
struct Key {
  PitchClass tonic;
  Mode mode = Mode::kMajor;

  /// The seven pitch classes of the key, starting at the tonic.
  std::array<PitchClass, 7> scale() const;
  /// Tonic, subdominant and dominant pitch classes.
  std::array<PitchClass, 3> primary_degrees() const;
  /// Same mode, tonic moved by `semitones`.
  Key transposed(int semitones) const noexcept;
  std::string name() const;

  auto operator<=>(const Key&) const = default;
};

/// Parses "E major", "Eb minor", "c# min", "A".
Key parse_key(std::string_view text);

/// Interval 5-vector (C1..C5); each interval is strictly positive.
class Tuning5 {
 public:
  /// Throws ArgumentError when any interval is not positive.
  explicit Tuning5(const std::array<int, 5>& intervals);

  const std::array<int, 5>& intervals() const noexcept { return intervals_; }
  /// Sum of C_0..C_{string-1}: the open pv of `string` (1-based).
  int open_offset(int string) const;
  /// pv of the highest position, string 6 at kMaxFret.
  int max_pv() const noexcept { return open_offset(kNumStrings) + kMaxFret; }

  /// "55545"; comma-separated when any interval is 10 or more.
  std::string to_string() const;

  auto operator<=>(const Tuning5&) const = default;

 private:
  std::array<int, 5> intervals_;
};

/// Absolute open-string pitches, strictly increasing from string 1.
class Tuning6 {
 public:
  /// Throws ArgumentError unless strictly increasing.
  explicit Tuning6(const std::array<Pitch, kNumStrings>& open);
  /// Convenience over raw note numbers; throws RangeError/ArgumentError.
  static Tuning6 from_numbers(const std::array<int, kNumStrings>& open);

  const std::array<Pitch, kNumStrings>& open() const noexcept { return open_; }
  /// Open pitch of `string` (1-based).
  Pitch open_pitch(int string) const;
  Pitch lowest() const noexcept { return open_[0]; }

  /// Uniform shift of every string; throws RangeError on overflow.
  Tuning6 shifted(int semitones) const;

  /// "D-A-d-g-b-e'"
  std::string helmholtz() const;
  /// "D2-A2-D3-G3-B3-E4"
  std::string scientific() const;

  auto operator<=>(const Tuning6&) const = default;

 private:
  std::array<Pitch, kNumStrings> open_;
};

/// A (string, fret) pair; string 1..6, fret 0..24 (0 = open).
struct Position {
  int string = 1;
  int fret = 0;

  bool in_bounds() const noexcept {
    return string >= 1 && string <= kNumStrings && fret >= 0 && fret <= kMaxFret;
  }

  auto operator<=>(const Position&) const = default;
};

/// (pitch value, scale position, guitar position).
struct Tone {
  int pv = 0;
  int sp = 0;
  Position pos;

  auto operator<=>(const Tone&) const = default;
};

/// Relative pitch value sounded at `pos`: fret plus the summed intervals below the string.
/// Throws BoundsError when `pos` is off the fingerboard.
int pitch_value(const Position& pos, const Tuning5& tuning);

Tuning5 to_tuning5(const Tuning6& tuning);

/// Augments a 5-vector with a lowest-string pitch. Throws RangeError past pitch 127.
Tuning6 evaluate(const Tuning5& tuning, Pitch lowest);

/// Semitones above the nearest tonic at or below the pitch; in [0, 12).
int scale_position(int pv, const Key& key, const Tuning6& tuning) noexcept;

/// Discrete membership test for the set of playable tones under a tuning and key:
/// in-bounds position, pv consistent with the position, sp consistent with the key.
bool is_playable(const Tone& tone, const Tuning6& tuning, const Key& key) noexcept;

/// Every position that sounds `pv`, ordered by string. Empty when unplayable.
std::vector<Position> positions_for_pv(int pv, const Tuning5& tuning);

/// Parses a tuning spelled as hyphenated names ("D-A-d-g-b-e'", "D2-A2-D3-G3-B3-E4")
/// or as an interval 5-vector ("75545", "12,5,5,4,5") evaluated at `anchor`.
Tuning6 parse_tuning(std::string_view text, Pitch anchor = Pitch(40));

/// True when `text` is an interval-vector spelling rather than a name list.
bool is_interval_spelling(std::string_view text) noexcept;

Tuning5 parse_tuning5(std::string_view text);

}  // namespace fretsolve
