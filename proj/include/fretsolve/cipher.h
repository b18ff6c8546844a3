/**
 * @file cipher.h
 * @brief Fret-offset vectors encoding retunings and key changes.
 *
 * A cipher holds one fret offset per string. Adding it to a shape's frets
 * compensates for a change of tuning (positive = string tuned lower), moves
 * the music to another key (uniform offsets), or both.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fretsolve/pitch.h"
#include "fretsolve/shape.h"

namespace fretsolve {

struct Cipher {
  std::array<int, kNumStrings> offsets{};

  static Cipher zero() noexcept { return Cipher{}; }

  int l1_norm() const noexcept;
  int nonzero_count() const noexcept;
  /// All six offsets equal (including the zero cipher).
  bool is_uniform() const noexcept;

  Cipher operator+(const Cipher& other) const noexcept;
  Cipher operator-() const noexcept;
  Cipher operator-(const Cipher& other) const noexcept { return *this + (-other); }

  /// "(0,-2,-2,-2,-2,-2)"
  std::string to_string() const;

  bool operator==(const Cipher&) const = default;
};

/// Parses "(0,-2,-2,-2,-2,-2)"; parentheses optional, whitespace ignored.
Cipher parse_cipher(std::string_view text);

/// `from - to`, elementwise over open pitches.
Cipher cipher_from_retuning(const Tuning6& from, const Tuning6& to);

/// Uniform cipher for moving the key down `semitones_down` (negative = up).
Cipher cipher_from_rekey(int semitones_down);

Cipher compose_ciphers(const Cipher& a, const Cipher& b);

enum class CipherKind { kIdentity, kRekey, kRetuning };

/// Classifies a cipher. Nonzero all-equal ciphers read as key changes unless
/// `uniform_is_retuning` is set.
CipherKind interpret_cipher(const Cipher& c, bool uniform_is_retuning = false) noexcept;

std::string_view to_string(CipherKind kind) noexcept;

enum class Strategy {
  kLowerStringWalk,
  kOctaveSubstitution,
  kChordToneDoubling,
  kOmission,
};

std::string_view to_string(Strategy s) noexcept;

/// Which substitutions may repair an out-of-range fret. Strategies always run in
/// the order walk, octave, doubling, omission; the flags only gate them.
struct ResolutionPolicy {
  bool lower_string_walk = true;
  bool octave_substitution = false;
  bool chord_tone_doubling = false;
  bool omission = false;

  static ResolutionPolicy walk_only() noexcept { return {}; }
  static ResolutionPolicy all() noexcept { return {true, true, true, true}; }

  /// Enabled strategies in application order.
  std::vector<Strategy> ordered() const;
  std::string to_string() const;

  bool operator==(const ResolutionPolicy&) const = default;
};

/// Parses a comma list drawn from walk, octave, double, omit (or "all").
/// The walk is always enabled.
ResolutionPolicy parse_policy(std::string_view text);

enum class StringOutcome {
  kSilent,        ///< muted before and after
  kShifted,       ///< offset applied, fret still in range
  kResolved,      ///< moved by a resolution strategy
  kOmitted,
};

/// What happened to the tone that started on `from_string`.
struct StringResolution {
  int from_string = 0;
  StringOutcome outcome = StringOutcome::kSilent;
  /// Fret after adding the offset, before any resolution.
  int shifted_fret = 0;
  /// Pitch the offset asked for (absolute).
  int target_pitch = 0;
  /// Strategy used when `outcome == kResolved` or `kOmitted`.
  Strategy strategy = Strategy::kLowerStringWalk;
  /// Final position and pitch when the tone still sounds.
  Position placed{};
  int sounded_pitch = 0;
  /// true for the walk towards higher strings used when a fret overshoots 24.
  bool walked_up = false;
};

struct CipherApplication {
  ChordShape shape;
  std::vector<StringResolution> report;

  /// Number of tones that needed a strategy (resolved or omitted).
  int resolution_count() const noexcept;
};

/// Offsets every sounded string of `shape` by `c` and places the tones on
/// `new_tuning`, repairing out-of-range frets with the policy's strategies.
/// The target pitch of string i is `new_tuning.open(i) + fret + c[i]`, so a pure
/// retuning cipher preserves pitch and a uniform cipher transposes.
/// Throws ResolutionError when a tone cannot be placed.
CipherApplication apply_cipher(const ChordShape& shape, const Cipher& c, const Tuning6& new_tuning,
                               const ResolutionPolicy& policy);

}  // namespace fretsolve
