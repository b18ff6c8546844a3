/**
 * @file cipher.cpp
 * @brief Cipher algebra and out-of-range resolution.
 */

#include "fretsolve/cipher.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>

#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

using Occupancy = std::array<bool, kNumStrings>;

int open_of(const Tuning6& tuning, int string) { return tuning.open_pitch(string).abs(); }

bool placeable(const Tuning6& tuning, const Occupancy& occupied, int string, int pitch) {
  if (occupied[static_cast<std::size_t>(string - 1)]) return false;
  const int f = pitch - open_of(tuning, string);
  return f >= 0 && f <= kMaxFret;
}

/// First free string that can sound `pitch`, trying `preferred` and then strings
/// by distance (lower string first on ties).
std::optional<Position> nearest_free(const Tuning6& tuning, const Occupancy& occupied, int preferred,
                                     int pitch) {
  for (int d = 0; d < kNumStrings; ++d) {
    for (int s : {preferred - d, preferred + d}) {
      if (s < 1 || s > kNumStrings) continue;
      if (placeable(tuning, occupied, s, pitch)) return Position{s, pitch - open_of(tuning, s)};
      if (d == 0) break;
    }
  }
  return std::nullopt;
}

/// Walks away from `string` toward lower strings when the fret went negative,
/// or toward higher strings when it passed the last fret.
std::optional<Position> walk(const Tuning6& tuning, const Occupancy& occupied, int string, int pitch,
                             bool upward) {
  const int step = upward ? 1 : -1;
  for (int s = string + step; s >= 1 && s <= kNumStrings; s += step) {
    const int f = pitch - open_of(tuning, s);
    if (!upward && f > kMaxFret) break;
    if (upward && f < 0) break;
    if (placeable(tuning, occupied, s, pitch)) return Position{s, f};
  }
  return std::nullopt;
}

}  // namespace

int Cipher::l1_norm() const noexcept {
  int sum = 0;
  for (int o : offsets) sum += std::abs(o);
  return sum;
}

int Cipher::nonzero_count() const noexcept {
  return static_cast<int>(std::count_if(offsets.begin(), offsets.end(), [](int o) { return o != 0; }));
}

bool Cipher::is_uniform() const noexcept {
  return std::all_of(offsets.begin(), offsets.end(), [&](int o) { return o == offsets[0]; });
}

Cipher Cipher::operator+(const Cipher& other) const noexcept {
  Cipher out;
  for (std::size_t i = 0; i < offsets.size(); ++i) out.offsets[i] = offsets[i] + other.offsets[i];
  return out;
}

Cipher Cipher::operator-() const noexcept {
  Cipher out;
  for (std::size_t i = 0; i < offsets.size(); ++i) out.offsets[i] = -offsets[i];
  return out;
}

std::string Cipher::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(offsets[i]);
  }
  return out + ")";
}

Cipher parse_cipher(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (!compact.empty() && compact.front() == '(') {
    if (compact.back() != ')') throw ParseError("unbalanced parenthesis in cipher", 0, 1);
    compact = compact.substr(1, compact.size() - 2);
  }
  Cipher c;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = compact.find(',', start);
    const std::string part = compact.substr(start, comma == std::string::npos ? std::string::npos
                                                                              : comma - start);
    char* end = nullptr;
    const long value = std::strtol(part.c_str(), &end, 10);
    if (part.empty() || end != part.c_str() + part.size()) {
      throw ParseError("bad cipher element \"" + part + "\"", 0, static_cast<int>(start) + 1);
    }
    if (count == c.offsets.size()) throw ParseError("a cipher has exactly 6 elements", 0, 1);
    c.offsets[count++] = static_cast<int>(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (count != c.offsets.size()) throw ParseError("a cipher has exactly 6 elements", 0, 1);
  return c;
}

Cipher cipher_from_retuning(const Tuning6& from, const Tuning6& to) {
  Cipher c;
  for (std::size_t i = 0; i < c.offsets.size(); ++i) {
    c.offsets[i] = from.open()[i].abs() - to.open()[i].abs();
  }
  return c;
}

Cipher cipher_from_rekey(int semitones_down) {
  Cipher c;
  c.offsets.fill(-semitones_down);
  return c;
}

Cipher compose_ciphers(const Cipher& a, const Cipher& b) { return a + b; }

CipherKind interpret_cipher(const Cipher& c, bool uniform_is_retuning) noexcept {
  if (c == Cipher::zero()) return CipherKind::kIdentity;
  if (c.is_uniform() && !uniform_is_retuning) return CipherKind::kRekey;
  return CipherKind::kRetuning;
}

std::string_view to_string(CipherKind kind) noexcept {
  switch (kind) {
    case CipherKind::kIdentity: return "identity";
    case CipherKind::kRekey: return "rekey";
    case CipherKind::kRetuning: return "retuning";
  }
  return "?";
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kLowerStringWalk: return "walk";
    case Strategy::kOctaveSubstitution: return "octave";
    case Strategy::kChordToneDoubling: return "double";
    case Strategy::kOmission: return "omit";
  }
  return "?";
}

std::vector<Strategy> ResolutionPolicy::ordered() const {
  std::vector<Strategy> out;
  if (lower_string_walk) out.push_back(Strategy::kLowerStringWalk);
  if (octave_substitution) out.push_back(Strategy::kOctaveSubstitution);
  if (chord_tone_doubling) out.push_back(Strategy::kChordToneDoubling);
  if (omission) out.push_back(Strategy::kOmission);
  return out;
}

std::string ResolutionPolicy::to_string() const {
  std::string out;
  for (Strategy s : ordered()) {
    if (!out.empty()) out += ',';
    out += fretsolve::to_string(s);
  }
  return out;
}

ResolutionPolicy parse_policy(std::string_view text) {
  ResolutionPolicy policy;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    std::string part(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    part.erase(std::remove_if(part.begin(), part.end(),
                              [](unsigned char c) { return std::isspace(c) != 0; }),
               part.end());
    if (part == "walk" || part.empty()) {
      policy.lower_string_walk = true;
    } else if (part == "octave") {
      policy.octave_substitution = true;
    } else if (part == "double") {
      policy.chord_tone_doubling = true;
    } else if (part == "omit") {
      policy.omission = true;
    } else if (part == "all") {
      policy = ResolutionPolicy::all();
    } else {
      throw ParseError("unknown resolution strategy \"" + part + "\"", 0, static_cast<int>(start) + 1);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return policy;
}

int CipherApplication::resolution_count() const noexcept {
  return static_cast<int>(std::count_if(report.begin(), report.end(), [](const StringResolution& r) {
    return r.outcome == StringOutcome::kResolved || r.outcome == StringOutcome::kOmitted;
  }));
}

CipherApplication apply_cipher(const ChordShape& shape, const Cipher& c, const Tuning6& new_tuning,
                               const ResolutionPolicy& policy) {
  std::array<int, kNumStrings> frets;
  frets.fill(kMuted);
  Occupancy occupied{};
  std::vector<StringResolution> report(kNumStrings);
  std::vector<int> chord_targets;

  for (int s = 1; s <= kNumStrings; ++s) {
    auto& r = report[static_cast<std::size_t>(s - 1)];
    r.from_string = s;
    if (shape.is_muted(s)) continue;
    r.shifted_fret = shape.fret(s) + c.offsets[static_cast<std::size_t>(s - 1)];
    r.target_pitch = open_of(new_tuning, s) + r.shifted_fret;
    chord_targets.push_back(r.target_pitch);
    if (r.shifted_fret >= 0 && r.shifted_fret <= kMaxFret) {
      r.outcome = StringOutcome::kShifted;
      r.placed = {s, r.shifted_fret};
      r.sounded_pitch = r.target_pitch;
      frets[static_cast<std::size_t>(s - 1)] = r.shifted_fret;
      occupied[static_cast<std::size_t>(s - 1)] = true;
    }
  }
  std::sort(chord_targets.begin(), chord_targets.end());
  chord_targets.erase(std::unique(chord_targets.begin(), chord_targets.end()), chord_targets.end());

  for (int s = 1; s <= kNumStrings; ++s) {
    auto& r = report[static_cast<std::size_t>(s - 1)];
    if (shape.is_muted(s) || r.outcome == StringOutcome::kShifted) continue;

    std::optional<Position> placed;
    for (Strategy strategy : policy.ordered()) {
      switch (strategy) {
        case Strategy::kLowerStringWalk:
          r.walked_up = r.shifted_fret > kMaxFret;
          placed = walk(new_tuning, occupied, s, r.target_pitch, r.walked_up);
          if (placed) r.sounded_pitch = r.target_pitch;
          break;
        case Strategy::kOctaveSubstitution:
          for (int p : {r.target_pitch - 12, r.target_pitch + 12}) {
            placed = nearest_free(new_tuning, occupied, s, p);
            if (placed) {
              r.sounded_pitch = p;
              break;
            }
          }
          break;
        case Strategy::kChordToneDoubling: {
          std::vector<int> others;
          for (int p : chord_targets) {
            if (p != r.target_pitch) others.push_back(p);
          }
          std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
            return std::abs(a - r.target_pitch) < std::abs(b - r.target_pitch);
          });
          for (int p : others) {
            placed = nearest_free(new_tuning, occupied, s, p);
            if (placed) {
              r.sounded_pitch = p;
              break;
            }
          }
          break;
        }
        case Strategy::kOmission:
          r.outcome = StringOutcome::kOmitted;
          r.strategy = strategy;
          break;
      }
      if (r.outcome == StringOutcome::kOmitted) break;
      if (placed) {
        r.outcome = StringOutcome::kResolved;
        r.strategy = strategy;
        r.placed = *placed;
        frets[static_cast<std::size_t>(placed->string - 1)] = placed->fret;
        occupied[static_cast<std::size_t>(placed->string - 1)] = true;
        break;
      }
    }
    if (r.outcome != StringOutcome::kResolved && r.outcome != StringOutcome::kOmitted) {
      throw ResolutionError("cannot place pitch " + Pitch(std::clamp(r.target_pitch, 0, 127)).scientific() +
                                " from string " + std::to_string(s) + " (fret " +
                                std::to_string(r.shifted_fret) + ") with policy '" +
                                policy.to_string() + "'",
                            s, r.target_pitch);
    }
  }

  return CipherApplication{ChordShape(frets), std::move(report)};
}

}  // namespace fretsolve
