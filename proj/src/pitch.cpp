/**
 * @file pitch.cpp
 * @brief Pitch arithmetic, spelling parsers and the string-changing relation.
 */

#include "fretsolve/pitch.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

constexpr std::array<const char*, 12> kSharpNames = {"C",  "C#", "D",  "D#", "E",  "F",
                                                     "F#", "G",  "G#", "A",  "A#", "B"};

constexpr std::array<int, 7> kMajorSteps = {0, 2, 4, 5, 7, 9, 11};
constexpr std::array<int, 7> kNaturalMinorSteps = {0, 2, 3, 5, 7, 8, 10};

int letter_pitch_class(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'C': return 0;
    case 'D': return 2;
    case 'E': return 4;
    case 'F': return 5;
    case 'G': return 7;
    case 'A': return 9;
    case 'B': return 11;
    default: return -1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Spelling {
  int letter_pc = 0;
  int accidental = 0;
  bool lowercase = false;
  std::string_view rest;
  int rest_column = 0;  // 1-based column where `rest` starts
};

Spelling split_spelling(std::string_view text) {
  if (text.empty()) throw ParseError("empty pitch name", 0, 1);
  Spelling s;
  s.letter_pc = letter_pitch_class(text[0]);
  if (s.letter_pc < 0) {
    throw ParseError("invalid pitch letter '" + std::string(1, text[0]) + "' in \"" +
                         std::string(text) + "\"",
                     0, 1);
  }
  s.lowercase = std::islower(static_cast<unsigned char>(text[0])) != 0;
  std::size_t i = 1;
  for (; i < text.size(); ++i) {
    if (text[i] == '#') {
      ++s.accidental;
    } else if (text[i] == 'b') {
      --s.accidental;
    } else {
      break;
    }
  }
  s.rest = text.substr(i);
  s.rest_column = static_cast<int>(i) + 1;
  return s;
}

bool is_octave_number(std::string_view rest) {
  if (rest.empty()) return false;
  std::size_t i = rest.front() == '-' ? 1 : 0;
  if (i == rest.size()) return false;
  return std::all_of(rest.begin() + static_cast<std::ptrdiff_t>(i), rest.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Pitch make_pitch(int value, std::string_view text) {
  if (value < kMinPitch || value > kMaxPitch) {
    throw ParseError("pitch \"" + std::string(text) + "\" is outside the range 0..127", 0, 1);
  }
  return Pitch(value);
}

Pitch scientific_from(const Spelling& s, std::string_view text) {
  if (s.rest.size() > 3) throw ParseError("octave number too long", 0, s.rest_column);
  int octave = std::stoi(std::string(s.rest));
  return make_pitch((octave + 1) * 12 + s.letter_pc + s.accidental, text);
}

}  // namespace

Pitch::Pitch(int abs) : abs_(abs) {
  if (abs < kMinPitch || abs > kMaxPitch) {
    throw RangeError("pitch " + std::to_string(abs) + " is outside the range 0..127");
  }
}

std::string Pitch::scientific() const {
  return std::string(kSharpNames[pitch_class()]) + std::to_string(abs_ / 12 - 1);
}

std::string Pitch::helmholtz() const {
  const int octave = abs_ / 12 - 1;
  std::string name = kSharpNames[pitch_class()];
  if (octave >= 3) {
    name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
    name.append(static_cast<std::size_t>(octave - 3), '\'');
  } else {
    name.append(static_cast<std::size_t>(2 - octave), ',');
  }
  return name;
}

Pitch parse_pitch(std::string_view text) {
  const Spelling s = split_spelling(text);
  if (is_octave_number(s.rest)) return scientific_from(s, text);

  int octave = s.lowercase ? 3 : 2;
  for (std::size_t i = 0; i < s.rest.size(); ++i) {
    const char c = s.rest[i];
    const int column = s.rest_column + static_cast<int>(i);
    if (c == '\'' && s.lowercase) {
      ++octave;
    } else if (c == ',' && !s.lowercase) {
      --octave;
    } else {
      throw ParseError("unexpected '" + std::string(1, c) + "' in pitch \"" + std::string(text) + "\"",
                       0, column);
    }
  }
  return make_pitch((octave + 1) * 12 + s.letter_pc + s.accidental, text);
}

Pitch parse_scientific_pitch(std::string_view text) {
  const Spelling s = split_spelling(text);
  if (!is_octave_number(s.rest)) {
    throw ParseError("expected an octave number in pitch \"" + std::string(text) + "\"", 0,
                     s.rest_column);
  }
  return scientific_from(s, text);
}

std::string PitchClass::name() const { return kSharpNames[static_cast<std::size_t>(pc)]; }

PitchClass parse_pitch_class(std::string_view text) {
  text = trim(text);
  const Spelling s = split_spelling(text);
  if (!s.rest.empty()) {
    throw ParseError("unexpected text in pitch class \"" + std::string(text) + "\"", 0,
                     s.rest_column);
  }
  return PitchClass::of(s.letter_pc + s.accidental);
}

std::array<PitchClass, 7> Key::scale() const {
  const auto& steps = mode == Mode::kMajor ? kMajorSteps : kNaturalMinorSteps;
  std::array<PitchClass, 7> out{};
  for (std::size_t i = 0; i < steps.size(); ++i) out[i] = PitchClass::of(tonic.pc + steps[i]);
  return out;
}

std::array<PitchClass, 3> Key::primary_degrees() const {
  return {tonic, PitchClass::of(tonic.pc + 5), PitchClass::of(tonic.pc + 7)};
}

Key Key::transposed(int semitones) const noexcept {
  return Key{PitchClass::of(tonic.pc + semitones), mode};
}

std::string Key::name() const {
  return tonic.name() + (mode == Mode::kMajor ? " major" : " minor");
}

Key parse_key(std::string_view text) {
  text = trim(text);
  const auto space = text.find_first_of(" \t");
  const std::string_view tonic_text = text.substr(0, space);
  Key key{parse_pitch_class(tonic_text), Mode::kMajor};
  if (space == std::string_view::npos) return key;

  std::string mode(trim(text.substr(space)));
  std::transform(mode.begin(), mode.end(), mode.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (mode == "major" || mode == "maj") {
    key.mode = Mode::kMajor;
  } else if (mode == "minor" || mode == "min") {
    key.mode = Mode::kMinor;
  } else {
    throw ParseError("unknown mode \"" + mode + "\"", 0, static_cast<int>(space) + 2);
  }
  return key;
}

Tuning5::Tuning5(const std::array<int, 5>& intervals) : intervals_(intervals) {
  for (int c : intervals_) {
    if (c <= 0) throw ArgumentError("tuning intervals must be positive");
  }
}

int Tuning5::open_offset(int string) const {
  if (string < 1 || string > kNumStrings) {
    throw BoundsError("string " + std::to_string(string) + " is outside 1..6");
  }
  return std::accumulate(intervals_.begin(), intervals_.begin() + (string - 1), 0);
}

std::string Tuning5::to_string() const {
  const bool wide = std::any_of(intervals_.begin(), intervals_.end(), [](int c) { return c >= 10; });
  std::string out;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (wide && i > 0) out += ',';
    out += std::to_string(intervals_[i]);
  }
  return out;
}

Tuning6::Tuning6(const std::array<Pitch, kNumStrings>& open) : open_(open) {
  for (std::size_t i = 1; i < open_.size(); ++i) {
    if (open_[i] <= open_[i - 1]) {
      throw ArgumentError("open-string pitches must strictly rise from string 1 to string 6");
    }
  }
}

Tuning6 Tuning6::from_numbers(const std::array<int, kNumStrings>& open) {
  return Tuning6({Pitch(open[0]), Pitch(open[1]), Pitch(open[2]), Pitch(open[3]), Pitch(open[4]),
                  Pitch(open[5])});
}

Pitch Tuning6::open_pitch(int string) const {
  if (string < 1 || string > kNumStrings) {
    throw BoundsError("string " + std::to_string(string) + " is outside 1..6");
  }
  return open_[static_cast<std::size_t>(string - 1)];
}

Tuning6 Tuning6::shifted(int semitones) const {
  std::array<int, kNumStrings> raw{};
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = open_[i].abs() + semitones;
  return from_numbers(raw);
}

std::string Tuning6::helmholtz() const {
  std::string out;
  for (const Pitch& p : open_) {
    if (!out.empty()) out += '-';
    out += p.helmholtz();
  }
  return out;
}

std::string Tuning6::scientific() const {
  std::string out;
  for (const Pitch& p : open_) {
    if (!out.empty()) out += '-';
    out += p.scientific();
  }
  return out;
}

int pitch_value(const Position& pos, const Tuning5& tuning) {
  if (!pos.in_bounds()) {
    throw BoundsError("position (" + std::to_string(pos.string) + ", " + std::to_string(pos.fret) +
                      ") is off the fingerboard");
  }
  return pos.fret + tuning.open_offset(pos.string);
}

Tuning5 to_tuning5(const Tuning6& tuning) {
  std::array<int, 5> c{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = tuning.open()[i + 1].abs() - tuning.open()[i].abs();
  }
  return Tuning5(c);
}

Tuning6 evaluate(const Tuning5& tuning, Pitch lowest) {
  std::array<int, kNumStrings> raw{};
  raw[0] = lowest.abs();
  for (std::size_t i = 1; i < raw.size(); ++i) raw[i] = raw[i - 1] + tuning.intervals()[i - 1];
  if (raw.back() > kMaxPitch) {
    throw RangeError("tuning " + tuning.to_string() + " evaluated at " + lowest.scientific() +
                     " exceeds pitch 127");
  }
  return Tuning6::from_numbers(raw);
}

int scale_position(int pv, const Key& key, const Tuning6& tuning) noexcept {
  return PitchClass::of(tuning.lowest().abs() + pv - key.tonic.pc).pc;
}

bool is_playable(const Tone& tone, const Tuning6& tuning, const Key& key) noexcept {
  if (!tone.pos.in_bounds()) return false;
  if (tone.sp < 0 || tone.sp >= 12) return false;
  const Tuning5 t5 = to_tuning5(tuning);
  if (tone.pv != pitch_value(tone.pos, t5)) return false;
  return tone.sp == scale_position(tone.pv, key, tuning);
}

std::vector<Position> positions_for_pv(int pv, const Tuning5& tuning) {
  std::vector<Position> out;
  for (int string = 1; string <= kNumStrings; ++string) {
    for (int fret = 0; fret <= kMaxFret; ++fret) {
      const Position pos{string, fret};
      if (pitch_value(pos, tuning) == pv) out.push_back(pos);
    }
  }
  return out;
}

bool is_interval_spelling(std::string_view text) noexcept {
  text = trim(text);
  return !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == ',';
  });
}

Tuning5 parse_tuning5(std::string_view text) {
  text = trim(text);
  std::vector<int> values;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
      if (part.empty() || part.size() > 3 ||
          !std::all_of(part.begin(), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
        throw ParseError("bad interval \"" + std::string(part) + "\" in tuning vector", 0,
                         static_cast<int>(start) + 1);
      }
      values.push_back(std::stoi(std::string(part)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw ParseError("bad character in tuning vector", 0, static_cast<int>(i) + 1);
      }
      values.push_back(text[i] - '0');
    }
  }
  if (values.size() != 5) {
    throw ParseError("a tuning vector needs exactly 5 intervals, got " +
                         std::to_string(values.size()),
                     0, 1);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0) throw ParseError("tuning intervals must be positive", 0, 1);
  }
  return Tuning5({values[0], values[1], values[2], values[3], values[4]});
}

Tuning6 parse_tuning(std::string_view text, Pitch anchor) {
  text = trim(text);
  if (is_interval_spelling(text)) {
    try {
      return evaluate(parse_tuning5(text), anchor);
    } catch (const RangeError& e) {
      throw ParseError(e.what(), 0, 1);
    }
  }

  std::array<int, kNumStrings> raw{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto dash = text.find('-', start);
    const auto part = text.substr(start, dash == std::string_view::npos ? text.npos : dash - start);
    if (count == raw.size()) throw ParseError("a tuning needs exactly 6 pitch names", 0, 1);
    try {
      raw[count++] = parse_pitch(part).abs();
    } catch (const ParseError& e) {
      throw ParseError(e.detail(), 0, static_cast<int>(start) + e.column());
    }
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  if (count != raw.size()) {
    throw ParseError("a tuning needs exactly 6 pitch names, got " + std::to_string(count), 0, 1);
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] <= raw[i - 1]) {
      throw ParseError("open-string pitches must strictly rise (string " + std::to_string(i + 1) +
                           " is not above string " + std::to_string(i) + ")",
                       0, 1);
    }
  }
  return Tuning6::from_numbers(raw);
}

}  // namespace fretsolve
