/**
 * @file shape.h
 * @brief Per-string fret assignments for a single chord and their finger grouping.
 */

#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "fretsolve/pitch.h"

namespace fretsolve {

/// One finger pressing `first_string..last_string` at `fret`. Interior strings in
/// that range are either part of the group or fretted higher (fingers above a barre).
struct FingerGroup {
  int fret = 0;
  int first_string = 0;
  int last_string = 0;
  std::vector<int> strings;

  bool operator==(const FingerGroup&) const = default;
};

struct FingerAllocation {
  std::vector<FingerGroup> groups;

  int finger_count() const noexcept { return static_cast<int>(groups.size()); }
};

inline constexpr int kMaxFingers = 4;
inline constexpr int kMuted = -1;

/// What each of the six strings does in one chord: muted, open or fretted.
class ChordShape {
 public:
  ChordShape() { frets_.fill(kMuted); }
  /// `frets[i]` belongs to string i + 1; kMuted for silent strings.
  /// Throws BoundsError for any other value outside [0, 24].
  explicit ChordShape(const std::array<int, kNumStrings>& frets);

  int fret(int string) const { return frets_.at(static_cast<std::size_t>(string - 1)); }
  bool is_muted(int string) const { return fret(string) == kMuted; }
  const std::array<int, kNumStrings>& frets() const noexcept { return frets_; }

  /// Returns a copy with one string changed.
  ChordShape with_fret(int string, int fret) const;

  int sounded_count() const noexcept;
  int fretted_count() const noexcept;
  /// max - min over fretted strings; 0 with fewer than two fretted strings.
  int span() const noexcept;
  /// Lowest fretted fret, taken as the index-finger position.
  std::optional<int> index_fret() const noexcept;

  std::vector<Position> sounded_positions() const;
  /// Absolute pitches sounded under `tuning`, ascending.
  std::vector<int> pitches(const Tuning6& tuning) const;

  std::string to_string() const;

  auto operator<=>(const ChordShape&) const = default;

 private:
  std::array<int, kNumStrings> frets_;
};

/// Groups fretted strings into fingers. A finger covers strings at one fret that are
/// adjacent or separated only by strings fretted higher. Returns nullopt when more than
/// four fingers are needed.
std::optional<FingerAllocation> finger_allocation(const std::array<int, kNumStrings>& frets);

}  // namespace fretsolve
