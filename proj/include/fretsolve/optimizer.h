/**
 * @file optimizer.h
 * @brief Fingering search for a fixed tuning, and the joint search over tunings and keys.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fretsolve/cipher.h"
#include "fretsolve/composition.h"
#include "fretsolve/cost_model.h"
#include "fretsolve/fingering.h"

namespace fretsolve {

struct FingeringResult {
  std::vector<ChordShape> shapes;
  CostBreakdown cost;
};

/// Cheapest shape sequence for `composition` under `tuning`, by exact dynamic
/// programming over (chord, candidate shape, hand position) states. Ties go to the
/// earlier candidate in enumeration order.
///
/// Throws InfeasibleCompositionError listing every chord that cannot be fingered.
FingeringResult best_fingering(const Composition& composition, const Tuning6& tuning,
                               const Key& key, const CostWeights& weights,
                               int max_candidates = kDefaultMaxCandidates);

struct NamedTuning {
  std::string name;
  Tuning6 tuning;
};

/// standard, drop-d, open-g, dadgad, all-fourths, all-fifths.
const std::vector<NamedTuning>& named_tunings();
std::optional<Tuning6> find_named_tuning(std::string_view name);
std::optional<std::string> tuning_name(const Tuning6& tuning);

Tuning6 standard_tuning();

/// `base`, then every valid tuning reachable by retuning at most `max_retuned_strings`
/// strings by at most `max_semitones_per_string` each (sorted), then the named
/// library entries not already listed.
std::vector<Tuning6> tuning_candidates(const Tuning6& base, int max_retuned_strings,
                                       int max_semitones_per_string, bool include_named = true);

/// [lo, hi] inclusive.
std::vector<int> transposition_range(int lo, int hi);

struct SearchSpace {
  /// Tuning the composition is written for; ciphers and retuning penalties are
  /// measured from it.
  Tuning6 base;
  std::vector<Tuning6> tunings;
  std::vector<int> transpositions;

  /// {base} x {0}
  static SearchSpace fixed(const Tuning6& base);
  static SearchSpace named(const Tuning6& base, std::vector<int> transpositions);
  static SearchSpace neighborhood(const Tuning6& base, int max_retuned_strings,
                                  int max_semitones_per_string, std::vector<int> transpositions);
};

struct OptimizerOptions {
  /// Penalty per semitone of retuning (L1 norm of the retuning cipher).
  double retune_lambda = 0.05;
  int max_candidates = kDefaultMaxCandidates;
  /// Worker threads for the outer loop; 0 picks the hardware concurrency.
  int threads = 0;
};

struct OptimizationResult {
  Tuning6 tuning;
  int transposition = 0;
  Key key;
  std::vector<ChordShape> fingering;
  /// Sorted pitches of each (transposed) chord.
  std::vector<std::vector<int>> chord_pitches;
  std::vector<double> durations_ms;
  CostBreakdown cost;
  /// From (base tuning, original key) to (tuning, key).
  Cipher cipher;
};

/// Searches every (tuning, transposition) pair of `space`, skipping pairs the
/// redundancy hint marks unplayable, and returns the best `top_k` ordered by
/// (total cost, cipher L1 norm, tuning, transposition).
///
/// Throws GlobalInfeasibilityError with one diagnostic per pair when nothing fits.
std::vector<OptimizationResult> joint_optimize(const Composition& composition,
                                               const SearchSpace& space, const CostWeights& weights,
                                               int top_k, const OptimizerOptions& options = {});

}  // namespace fretsolve
