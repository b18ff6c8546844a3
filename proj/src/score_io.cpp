/**
 * @file score_io.cpp
 * @brief Composition parser and tablature renderer/parser.
 */

#include "fretsolve/score_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

struct Line {
  int number = 0;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({++number, line});
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

/// Case-insensitive "name:" prefix; returns the remainder when it matches.
std::optional<std::string_view> header_value(std::string_view line, std::string_view name) {
  const std::string_view t = trim(line);
  if (t.size() <= name.size() || t[name.size()] != ':') return std::nullopt;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(t[i])) != name[i]) return std::nullopt;
  }
  return t.substr(name.size() + 1);
}

double parse_positive(std::string_view text, const std::string& what, int line, int column) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v) || v <= 0.0) {
    throw ParseError(what + " must be a positive number, got \"" + s + "\"", line, column);
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string cell_text(int fret) {
  if (fret == kMuted) return "--";
  if (fret < 10) return std::to_string(fret) + "-";
  return std::to_string(fret);
}

std::string format_cost(const CostBreakdown& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "cost: %.4f (span %.4f, fret %.4f, position %.4f, jump %.4f, speed %.4f, key %.4f, "
                "retuning %.4f)",
                c.total, c.span, c.fret, c.position, c.jump, c.speed, c.key_affinity, c.retuning);
  return buf;
}

}  // namespace

Composition parse_composition(std::string_view text) {
  Composition comp;
  std::vector<double> beats;
  bool have_key = false;
  bool have_tempo = false;

  for (const Line& line : split_lines(text)) {
    std::string_view body = line.text;
    // '#' is also a sharp, so a comment must start a token.
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '#' && (i == 0 || body[i - 1] == ' ' || body[i - 1] == '\t')) {
        body = body.substr(0, i);
        break;
      }
    }
    if (trim(body).empty()) continue;

    if (const auto value = header_value(body, "key")) {
      if (have_key) throw ParseError("duplicate key line", line.number, 1);
      try {
        comp.key = parse_key(*value);
      } catch (const ParseError& e) {
        throw ParseError("bad key: " + e.detail(), line.number, column_of(line.text, trim(*value)));
      }
      have_key = true;
      continue;
    }
    if (const auto value = header_value(body, "tempo")) {
      if (have_tempo) throw ParseError("duplicate tempo line", line.number, 1);
      comp.tempo_bpm = parse_positive(trim(*value), "tempo", line.number,
                                      column_of(line.text, trim(*value)));
      have_tempo = true;
      continue;
    }

    Chord chord;
    double chord_beats = 1.0;
    int token_index = 0;
    std::size_t i = 0;
    while (i < body.size()) {
      while (i < body.size() && is_space(body[i])) ++i;
      if (i == body.size()) break;
      std::size_t j = i;
      while (j < body.size() && !is_space(body[j])) ++j;
      const std::string_view token = body.substr(i, j - i);
      const int column = static_cast<int>(i) + 1;
      ++token_index;

      std::string_view name = token;
      if (const auto at = token.find('@'); at != std::string_view::npos) {
        name = token.substr(0, at);
        chord_beats = parse_positive(token.substr(at + 1), "duration", line.number,
                                     column + static_cast<int>(at) + 1);
      }
      if (!name.empty()) {
        if (chord.pitches.size() == static_cast<std::size_t>(kNumStrings)) {
          throw ParseError("chord has more than 6 pitches (token " + std::to_string(token_index) + ")",
                           line.number, column);
        }
        try {
          chord.pitches.push_back(parse_scientific_pitch(name));
        } catch (const ParseError& e) {
          throw ParseError("token " + std::to_string(token_index) + ": " + e.detail(), line.number,
                           column + e.column() - 1);
        }
      }
      i = j;
    }
    if (chord.pitches.empty()) throw ParseError("duration without pitches", line.number, 1);
    comp.chords.push_back(std::move(chord));
    beats.push_back(chord_beats);
  }

  if (comp.chords.empty()) throw ParseError("composition has no chords", 1, 1);
  for (std::size_t c = 0; c < comp.chords.size(); ++c) {
    comp.chords[c].duration_ms = beats[c] * 60000.0 / comp.tempo_bpm;
  }
  return comp;
}

std::string format_composition(const Composition& composition) {
  std::string out;
  if (composition.key) out += "key: " + composition.key->name() + "\n";
  out += "tempo: " + format_number(composition.tempo_bpm) + "\n";
  for (const Chord& chord : composition.chords) {
    std::string line;
    for (const Pitch& p : chord.pitches) {
      if (!line.empty()) line += ' ';
      line += p.scientific();
    }
    const double beats = chord.duration_ms * composition.tempo_bpm / 60000.0;
    if (beats != 1.0) line += " @" + format_number(beats);
    out += line + "\n";
  }
  return out;
}

std::string render_tab(const Tablature& tab) {
  std::string out(kTabVersionLine);
  out += "\ntuning: " + tab.tuning.helmholtz() + " " + to_tuning5(tab.tuning).to_string() + "\n";
  for (const std::string& note : tab.notes) out += "# " + note + "\n";

  std::size_t label_width = 0;
  for (const Pitch& p : tab.tuning.open()) label_width = std::max(label_width, p.helmholtz().size());

  for (int s = kNumStrings; s >= 1; --s) {
    std::string label = tab.tuning.open_pitch(s).helmholtz();
    label.resize(label_width, ' ');
    std::string body = "|";
    for (std::size_t c = 0; c < tab.shapes.size(); ++c) {
      body += "-" + cell_text(tab.shapes[c].fret(s));
      if ((c + 1) % kColumnsPerBar == 0 || c + 1 == tab.shapes.size()) body += "-|";
    }
    if (tab.shapes.empty()) body += "-|";
    out += label + " " + body + "\n";
  }
  return out;
}

std::string render_tab(const OptimizationResult& result) {
  Tablature tab{result.tuning, result.fingering, {}};
  if (const auto name = tuning_name(result.tuning)) tab.notes.push_back("tuning name: " + *name);
  tab.notes.push_back("key: " + result.key.name());
  tab.notes.push_back("transposition: " + std::string(result.transposition > 0 ? "+" : "") +
                      std::to_string(result.transposition));
  tab.notes.push_back("cipher: " + result.cipher.to_string());
  tab.notes.push_back(format_cost(result.cost));
  return render_tab(tab);
}

Tablature parse_tab(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  std::size_t i = 0;
  const auto skip_blank = [&] {
    while (i < lines.size() && trim(lines[i].text).empty()) ++i;
  };

  skip_blank();
  if (i == lines.size() || trim(lines[i].text) != kTabVersionLine) {
    throw ParseError("tablature must start with \"" + std::string(kTabVersionLine) + "\"",
                     i < lines.size() ? lines[i].number : 1, 1);
  }
  ++i;
  skip_blank();

  const auto tuning_value = i < lines.size() ? header_value(lines[i].text, "tuning") : std::nullopt;
  if (!tuning_value) {
    throw ParseError(
        "missing tuning header: tablature without the open-string pitches does not define any pitch",
        i < lines.size() ? lines[i].number : static_cast<int>(lines.size()), 1);
  }
  const Line& header = lines[i];
  const std::string_view value = trim(*tuning_value);
  const auto gap = value.find_first_of(" \t");
  const std::string_view names = value.substr(0, gap);
  std::optional<Tuning6> tuning;
  try {
    tuning = parse_tuning(names);
  } catch (const ParseError& e) {
    throw ParseError("bad tuning: " + e.detail(), header.number, column_of(header.text, names) + e.column() - 1);
  }
  if (gap != std::string_view::npos) {
    const std::string_view vec = trim(value.substr(gap));
    std::optional<Tuning5> declared;
    try {
      declared = parse_tuning5(vec);
    } catch (const ParseError& e) {
      throw ParseError("bad interval vector: " + e.detail(), header.number, column_of(header.text, vec));
    }
    if (*declared != to_tuning5(*tuning)) {
      throw ParseError("interval vector " + declared->to_string() + " does not match " +
                           tuning->helmholtz() + " (" + to_tuning5(*tuning).to_string() + ")",
                       header.number, column_of(header.text, vec));
    }
  }
  ++i;

  Tablature tab{*tuning, {}, {}};
  for (; i < lines.size(); ++i) {
    const std::string_view t = lines[i].text;
    if (t == "#") {
      tab.notes.emplace_back();
    } else if (t.rfind("# ", 0) == 0) {
      tab.notes.emplace_back(t.substr(2));
    } else {
      break;
    }
  }
  skip_blank();

  std::array<std::string_view, kNumStrings> bodies{};
  std::array<int, kNumStrings> line_numbers{};
  std::array<std::size_t, kNumStrings> body_starts{};
  for (int row = 0; row < kNumStrings; ++row, ++i) {
    const int string = kNumStrings - row;
    if (i >= lines.size() || trim(lines[i].text).empty()) {
      throw ParseError("expected 6 staff lines, found " + std::to_string(row),
                       i < lines.size() ? lines[i].number : static_cast<int>(lines.size()), 1);
    }
    const std::string_view t = lines[i].text;
    const auto bar = t.find('|');
    if (bar == std::string_view::npos) throw ParseError("staff line has no '|'", lines[i].number, 1);
    const std::string expected = tuning->open_pitch(string).helmholtz();
    if (trim(t.substr(0, bar)) != expected) {
      throw ParseError("staff line should be labelled " + expected + " (string " +
                           std::to_string(string) + ")",
                       lines[i].number, 1);
    }
    bodies[static_cast<std::size_t>(row)] = t.substr(bar);
    line_numbers[static_cast<std::size_t>(row)] = lines[i].number;
    body_starts[static_cast<std::size_t>(row)] = bar;
  }
  skip_blank();
  if (i < lines.size()) throw ParseError("unexpected text after the staff", lines[i].number, 1);

  const std::size_t width = bodies[0].size();
  for (std::size_t r = 1; r < bodies.size(); ++r) {
    if (bodies[r].size() != width) {
      throw ParseError("staff line is " + std::to_string(bodies[r].size()) + " characters wide, expected " +
                           std::to_string(width) + " (misaligned columns)",
                       line_numbers[r],
                       static_cast<int>(body_starts[r] + std::min(width, bodies[r].size())) + 1);
    }
  }

  const auto column_error = [&](std::size_t row, std::size_t pos, const std::string& message) {
    return ParseError(message, line_numbers[row], static_cast<int>(body_starts[row] + pos) + 1);
  };

  const auto all_are = [&](std::size_t pos, char c) {
    return std::all_of(bodies.begin(), bodies.end(), [&](std::string_view b) { return b[pos] == c; });
  };

  std::size_t pos = 0;
  while (pos < width) {
    if (all_are(pos, '|')) {
      ++pos;
      continue;
    }
    if (all_are(pos, '-') && pos + 1 < width && all_are(pos + 1, '|')) {
      ++pos;
      continue;
    }
    if (pos + 3 > width) throw column_error(0, pos, "truncated column");
    std::array<int, kNumStrings> frets{};
    for (std::size_t row = 0; row < bodies.size(); ++row) {
      const std::string_view cell = bodies[row].substr(pos, 3);
      const int string = kNumStrings - static_cast<int>(row);
      int& fret = frets[static_cast<std::size_t>(string - 1)];
      if (cell[0] != '-') throw column_error(row, pos, "misaligned column: expected '-'");
      const char a = cell[1];
      const char b = cell[2];
      const auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
      if (a == '-' && b == '-') {
        fret = kMuted;
      } else if (digit(a) && b == '-') {
        fret = a - '0';
      } else if (digit(a) && digit(b)) {
        fret = (a - '0') * 10 + (b - '0');
      } else {
        throw column_error(row, pos + 1, "misaligned column: bad fret cell \"" + std::string(cell.substr(1)) + "\"");
      }
      if (fret > kMaxFret) {
        const ParseError where = column_error(row, pos + 1, "fret " + std::to_string(fret) + " is outside 0..24");
        throw BoundsError(where.what());
      }
    }
    tab.shapes.emplace_back(frets);
    pos += 3;
  }
  return tab;
}

}  // namespace fretsolve
