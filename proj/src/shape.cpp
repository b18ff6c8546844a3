/**
 * @file shape.cpp
 * @brief ChordShape queries and finger grouping.
 */

#include "fretsolve/shape.h"

#include <algorithm>
#include <map>

#include "fretsolve/errors.h"

namespace fretsolve {

ChordShape::ChordShape(const std::array<int, kNumStrings>& frets) : frets_(frets) {
  for (std::size_t i = 0; i < frets_.size(); ++i) {
    const int f = frets_[i];
    if (f != kMuted && (f < 0 || f > kMaxFret)) {
      throw BoundsError("fret " + std::to_string(f) + " on string " + std::to_string(i + 1) +
                        " is outside 0..24");
    }
  }
}

ChordShape ChordShape::with_fret(int string, int fret) const {
  auto frets = frets_;
  frets.at(static_cast<std::size_t>(string - 1)) = fret;
  return ChordShape(frets);
}

int ChordShape::sounded_count() const noexcept {
  return static_cast<int>(std::count_if(frets_.begin(), frets_.end(), [](int f) { return f >= 0; }));
}

int ChordShape::fretted_count() const noexcept {
  return static_cast<int>(std::count_if(frets_.begin(), frets_.end(), [](int f) { return f > 0; }));
}

int ChordShape::span() const noexcept {
  int lo = kMaxFret + 1;
  int hi = -1;
  for (int f : frets_) {
    if (f > 0) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  }
  return hi < 0 ? 0 : hi - lo;
}

std::optional<int> ChordShape::index_fret() const noexcept {
  std::optional<int> lo;
  for (int f : frets_) {
    if (f > 0 && (!lo || f < *lo)) lo = f;
  }
  return lo;
}

std::vector<Position> ChordShape::sounded_positions() const {
  std::vector<Position> out;
  for (int s = 1; s <= kNumStrings; ++s) {
    if (!is_muted(s)) out.push_back({s, fret(s)});
  }
  return out;
}

std::vector<int> ChordShape::pitches(const Tuning6& tuning) const {
  std::vector<int> out;
  for (int s = 1; s <= kNumStrings; ++s) {
    if (!is_muted(s)) out.push_back(tuning.open_pitch(s).abs() + fret(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string ChordShape::to_string() const {
  std::string out;
  for (int f : frets_) {
    if (!out.empty()) out += ' ';
    out += f == kMuted ? "x" : std::to_string(f);
  }
  return out;
}

std::optional<FingerAllocation> finger_allocation(const std::array<int, kNumStrings>& frets) {
  std::map<int, std::vector<int>> by_fret;
  for (int s = 1; s <= kNumStrings; ++s) {
    const int f = frets[static_cast<std::size_t>(s - 1)];
    if (f > 0) by_fret[f].push_back(s);
  }

  FingerAllocation alloc;
  for (const auto& [fret, strings] : by_fret) {
    FingerGroup group{fret, strings.front(), strings.front(), {strings.front()}};
    for (std::size_t k = 1; k < strings.size(); ++k) {
      const int next = strings[k];
      bool bridged = true;
      for (int s = group.last_string + 1; s < next; ++s) {
        if (frets[static_cast<std::size_t>(s - 1)] <= fret) {
          bridged = false;
          break;
        }
      }
      if (bridged) {
        group.last_string = next;
        group.strings.push_back(next);
      } else {
        alloc.groups.push_back(group);
        group = FingerGroup{fret, next, next, {next}};
      }
    }
    alloc.groups.push_back(group);
  }
  if (alloc.finger_count() > kMaxFingers) return std::nullopt;
  return alloc;
}

}  // namespace fretsolve
