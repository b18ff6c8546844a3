/**
 * @file errors.h
 * @brief Exception types raised by the fretsolve library.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fretsolve {

/// Base class for every library error. `code()` is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A string/fret/capo coordinate outside the fingerboard.
class BoundsError : public Error {
 public:
  explicit BoundsError(const std::string& message) : Error("bounds", message) {}
};

/// A pitch computation left the representable pitch range.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& message) : Error("range", message) {}
};

/// Invalid argument that is not a bounds problem (e.g. nonpositive duration).
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message) : Error("argument", message) {}
};

/// Text input error carrying a 1-based line/column location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("parse", Format(message, line, column)),
        detail_(message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string Format(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::string detail_;
  int line_;
  int column_;
};

/// A cipher pushed a tone off the fingerboard and no enabled strategy could place it.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& message, int string, int pitch)
      : Error("unresolvable", message), string_(string), pitch_(pitch) {}

  int string_number() const noexcept { return string_; }
  int pitch() const noexcept { return pitch_; }

 private:
  int string_;
  int pitch_;
};

/// A chord pitch that no (string, fret) position can sound.
class UnplayableChordError : public Error {
 public:
  UnplayableChordError(const std::string& message, int pitch)
      : Error("unplayable_pitch", message), pitch_(pitch) {}

  int pitch() const noexcept { return pitch_; }

 private:
  int pitch_;
};

/// Every pitch is individually playable but no shape plays them together.
class InfeasibleChordError : public Error {
 public:
  explicit InfeasibleChordError(const std::string& message)
      : Error("infeasible_chord", message) {}
};

/// One or more chords of a composition cannot be fingered under a tuning.
class InfeasibleCompositionError : public Error {
 public:
  InfeasibleCompositionError(const std::string& message, std::vector<int> chords,
                             std::vector<std::string> reasons)
      : Error("infeasible_composition", message),
        chords_(std::move(chords)),
        reasons_(std::move(reasons)) {}

  /// 0-based indices of the offending chords.
  const std::vector<int>& chords() const noexcept { return chords_; }
  const std::vector<std::string>& reasons() const noexcept { return reasons_; }

 private:
  std::vector<int> chords_;
  std::vector<std::string> reasons_;
};

/// No (tuning, transposition) pair in a search space admits a fingering.
class GlobalInfeasibilityError : public Error {
 public:
  GlobalInfeasibilityError(const std::string& message, std::vector<std::string> diagnostics)
      : Error("globally_infeasible", message), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace fretsolve
