/**
 * @file optimizer.cpp
 * @brief Dynamic program over chord candidates and the outer tuning/key loop.
 */

#include "fretsolve/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "fretsolve/analysis.h"
#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

struct State {
  int candidate = 0;
  std::optional<int> hand;
  double cost = 0.0;
  int back = -1;
};

struct Branch {
  Tuning6 tuning;
  int transposition = 0;
  std::optional<OptimizationResult> result;
  std::string diagnostic;
};

void generate(const Tuning6& base, int string, int budget, int max_semitones, Cipher& c,
              std::set<Tuning6>& out) {
  if (string == kNumStrings) {
    std::array<int, kNumStrings> raw{};
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = base.open()[i].abs() - c.offsets[i];
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] < kMinPitch || raw[i] > kMaxPitch) return;
      if (i > 0 && raw[i] <= raw[i - 1]) return;
    }
    out.insert(Tuning6::from_numbers(raw));
    return;
  }
  c.offsets[static_cast<std::size_t>(string)] = 0;
  generate(base, string + 1, budget, max_semitones, c, out);
  if (budget == 0) return;
  for (int d = -max_semitones; d <= max_semitones; ++d) {
    if (d == 0) continue;
    c.offsets[static_cast<std::size_t>(string)] = d;
    generate(base, string + 1, budget - 1, max_semitones, c, out);
  }
  c.offsets[static_cast<std::size_t>(string)] = 0;
}

std::string pair_label(const Tuning6& tuning, int transposition) {
  std::string t = std::to_string(transposition);
  if (transposition > 0) t = "+" + t;
  return tuning.helmholtz() + " @ " + t;
}

}  // namespace

FingeringResult best_fingering(const Composition& composition, const Tuning6& tuning,
                               const Key& key, const CostWeights& weights, int max_candidates) {
  weights.validate();
  if (composition.chords.empty()) throw ArgumentError("composition has no chords");

  std::vector<std::vector<ChordShape>> candidates;
  std::vector<int> bad;
  std::vector<std::string> reasons;
  for (std::size_t i = 0; i < composition.chords.size(); ++i) {
    try {
      candidates.push_back(enumerate_shapes(composition.chords[i], tuning, max_candidates));
    } catch (const Error& e) {
      bad.push_back(static_cast<int>(i));
      reasons.push_back("chord " + std::to_string(i + 1) + ": " + e.what());
      candidates.emplace_back();
    }
  }
  if (!bad.empty()) {
    std::string message = "composition cannot be fingered in " + tuning.helmholtz() + " (chords";
    for (int b : bad) message += " " + std::to_string(b + 1);
    throw InfeasibleCompositionError(message + ")", bad, reasons);
  }

  const std::vector<double> durations = composition.durations_ms();
  std::vector<std::vector<State>> layers(candidates.size());
  for (std::size_t c = 0; c < candidates[0].size(); ++c) {
    const ChordShape& shape = candidates[0][c];
    layers[0].push_back({static_cast<int>(c), next_hand(std::nullopt, shape), node_cost(shape, weights), -1});
  }

  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& prev = layers[i - 1];
    auto& layer = layers[i];
    for (std::size_t c = 0; c < candidates[i].size(); ++c) {
      const ChordShape& shape = candidates[i][c];
      const double node = node_cost(shape, weights);
      // Open-only shapes keep the previous hand position, so they get one state per
      // incoming hand; fretted shapes collapse to a single state.
      std::map<std::optional<int>, std::size_t> slot_for_hand;
      for (std::size_t p = 0; p < prev.size(); ++p) {
        const auto hand = next_hand(prev[p].hand, shape);
        const double cost = prev[p].cost + edge_cost(prev[p].hand, shape, durations[i - 1], weights) + node;
        auto [it, inserted] = slot_for_hand.try_emplace(hand, layer.size());
        if (inserted) {
          layer.push_back({static_cast<int>(c), hand, cost, static_cast<int>(p)});
        } else if (cost < layer[it->second].cost) {
          layer[it->second].cost = cost;
          layer[it->second].back = static_cast<int>(p);
        }
      }
    }
  }

  const auto& last = layers.back();
  std::size_t best = 0;
  for (std::size_t s = 1; s < last.size(); ++s) {
    if (last[s].cost < last[best].cost) best = s;
  }

  FingeringResult result;
  result.shapes.resize(candidates.size());
  int state = static_cast<int>(best);
  for (std::size_t i = candidates.size(); i-- > 0;) {
    const State& s = layers[i][static_cast<std::size_t>(state)];
    result.shapes[i] = candidates[i][static_cast<std::size_t>(s.candidate)];
    state = s.back;
  }
  result.cost = total_cost(result.shapes, durations, tuning, key, weights);
  return result;
}

const std::vector<NamedTuning>& named_tunings() {
  static const std::vector<NamedTuning> kLibrary = {
      {"standard", Tuning6::from_numbers({40, 45, 50, 55, 59, 64})},
      {"drop-d", Tuning6::from_numbers({38, 45, 50, 55, 59, 64})},
      {"open-g", Tuning6::from_numbers({38, 43, 50, 55, 59, 62})},
      {"dadgad", Tuning6::from_numbers({38, 45, 50, 55, 57, 62})},
      {"all-fourths", Tuning6::from_numbers({40, 45, 50, 55, 60, 65})},
      {"all-fifths", Tuning6::from_numbers({36, 43, 50, 57, 64, 71})},
  };
  return kLibrary;
}

std::optional<Tuning6> find_named_tuning(std::string_view name) {
  for (const auto& entry : named_tunings()) {
    if (entry.name == name) return entry.tuning;
  }
  return std::nullopt;
}

std::optional<std::string> tuning_name(const Tuning6& tuning) {
  for (const auto& entry : named_tunings()) {
    if (entry.tuning == tuning) return entry.name;
  }
  return std::nullopt;
}

Tuning6 standard_tuning() { return named_tunings().front().tuning; }

std::vector<Tuning6> tuning_candidates(const Tuning6& base, int max_retuned_strings,
                                       int max_semitones_per_string, bool include_named) {
  if (max_retuned_strings < 0 || max_semitones_per_string < 0) {
    throw ArgumentError("retuning limits must be >= 0");
  }
  std::set<Tuning6> generated;
  if (max_semitones_per_string > 0) {
    Cipher c;
    generate(base, 0, std::min(max_retuned_strings, kNumStrings), max_semitones_per_string, c,
             generated);
  }
  generated.erase(base);

  std::vector<Tuning6> out{base};
  out.insert(out.end(), generated.begin(), generated.end());
  if (include_named) {
    for (const auto& entry : named_tunings()) {
      if (std::find(out.begin(), out.end(), entry.tuning) == out.end()) out.push_back(entry.tuning);
    }
  }
  return out;
}

std::vector<int> transposition_range(int lo, int hi) {
  if (lo > hi) throw ArgumentError("empty transposition range");
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t) out.push_back(t);
  return out;
}

SearchSpace SearchSpace::fixed(const Tuning6& base) { return SearchSpace{base, {base}, {0}}; }

SearchSpace SearchSpace::named(const Tuning6& base, std::vector<int> transpositions) {
  return SearchSpace{base, tuning_candidates(base, 0, 0, true), std::move(transpositions)};
}

SearchSpace SearchSpace::neighborhood(const Tuning6& base, int max_retuned_strings,
                                      int max_semitones_per_string, std::vector<int> transpositions) {
  return SearchSpace{base,
                     tuning_candidates(base, max_retuned_strings, max_semitones_per_string, true),
                     std::move(transpositions)};
}

std::vector<OptimizationResult> joint_optimize(const Composition& composition,
                                               const SearchSpace& space, const CostWeights& weights,
                                               int top_k, const OptimizerOptions& options) {
  weights.validate();
  if (space.tunings.empty() || space.transpositions.empty()) {
    throw ArgumentError("search space is empty");
  }
  if (composition.chords.empty()) throw ArgumentError("composition has no chords");
  const Key original_key = effective_key(composition);

  std::vector<Branch> branches;
  for (const Tuning6& tuning : space.tunings) {
    for (int t : space.transpositions) branches.push_back({tuning, t, std::nullopt, {}});
  }

  const auto solve = [&](Branch& branch) {
    const std::string label = pair_label(branch.tuning, branch.transposition);
    Composition moved;
    try {
      moved = composition.transposed(branch.transposition);
    } catch (const Error& e) {
      branch.diagnostic = label + ": " + e.what();
      return;
    }

    const int base_pitch = branch.tuning.lowest().abs();
    std::vector<std::vector<int>> pvs;
    for (const Chord& chord : moved.chords) {
      auto& row = pvs.emplace_back();
      for (int n : chord.numbers()) row.push_back(n - base_pitch);
    }
    const PlayabilityHint hint = tuning_playability_hint(to_tuning5(branch.tuning), pvs);
    if (hint.unplayable) {
      branch.diagnostic = label + ": " + (hint.problems.empty() ? "unplayable" : hint.problems.front());
      return;
    }

    const Key key = original_key.transposed(branch.transposition);
    try {
      FingeringResult fr = best_fingering(moved, branch.tuning, key, weights, options.max_candidates);
      OptimizationResult r{branch.tuning, branch.transposition, key, std::move(fr.shapes), {}, moved.durations_ms(),
                           fr.cost, {}};
      for (const Chord& chord : moved.chords) r.chord_pitches.push_back(chord.numbers());
      const Cipher retune = cipher_from_retuning(space.base, branch.tuning);
      r.cipher = compose_ciphers(retune, cipher_from_rekey(-branch.transposition));
      r.cost.retuning = options.retune_lambda * retune.l1_norm();
      r.cost.total += r.cost.retuning;
      branch.result = std::move(r);
    } catch (const InfeasibleCompositionError& e) {
      branch.diagnostic = label + ": " + (e.reasons().empty() ? e.what() : e.reasons().front());
    }
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(branches.size()));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < branches.size(); i = next++) solve(branches[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<OptimizationResult> results;
  std::vector<std::string> diagnostics;
  for (Branch& b : branches) {
    if (b.result) {
      results.push_back(std::move(*b.result));
    } else {
      diagnostics.push_back(std::move(b.diagnostic));
    }
  }
  if (results.empty()) {
    throw GlobalInfeasibilityError("no tuning and transposition in the search space can play the composition",
                                   std::move(diagnostics));
  }

  std::sort(results.begin(), results.end(), [](const OptimizationResult& a, const OptimizationResult& b) {
    if (a.cost.total != b.cost.total) return a.cost.total < b.cost.total;
    if (a.cipher.l1_norm() != b.cipher.l1_norm()) return a.cipher.l1_norm() < b.cipher.l1_norm();
    if (a.tuning != b.tuning) return a.tuning < b.tuning;
    return a.transposition < b.transposition;
  });
  if (top_k > 0 && results.size() > static_cast<std::size_t>(top_k)) {
    results.erase(results.begin() + top_k, results.end());
  }
  return results;
}

}  // namespace fretsolve
