/**
 * @file score_io.h
 * @brief `.chords` composition files and `.tab` tablature.
 *
 * A `.chords` file holds optional `key:` and `tempo:` lines followed by one chord
 * per line, written as scientific pitch names with an optional `@beats` suffix:
 *
 *     key: E major
 *     tempo: 96
 *     E2 B2 E3 G#3 B3 E4 @2
 *     A2 E3 A3 C#4 E4
 *
 * A `.tab` file starts with `# fretsolve-v1`, then a `tuning:` header giving the
 * open strings and the interval vector, any number of `# ` note lines, and six
 * staff lines (highest string first). Each chord is one three-character column
 * (`-` plus a two-character fret cell, `--` when muted); `|` marks bars.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fretsolve/composition.h"
#include "fretsolve/optimizer.h"
#include "fretsolve/shape.h"

namespace fretsolve {

inline constexpr std::string_view kTabVersionLine = "# fretsolve-v1";
inline constexpr int kColumnsPerBar = 4;

/// Throws ParseError with the line and column of the first problem.
Composition parse_composition(std::string_view text);

/// Writes a composition back in `.chords` form (beats computed from the tempo).
std::string format_composition(const Composition& composition);

struct Tablature {
  Tuning6 tuning;
  std::vector<ChordShape> shapes;
  /// Free-text lines rendered as `# <note>` between the header and the staff.
  std::vector<std::string> notes;

  bool operator==(const Tablature&) const = default;
};

std::string render_tab(const Tablature& tab);

/// Tab for an optimizer result, with key, transposition, cipher and cost as notes.
std::string render_tab(const OptimizationResult& result);

/// Inverse of render_tab on its output. Throws ParseError for a missing version or
/// tuning header, misaligned staff lines or frets outside 0..24.
Tablature parse_tab(std::string_view text);

}  // namespace fretsolve
