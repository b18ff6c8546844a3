/**
 * @file fingering.cpp
 * @brief Backtracking search over string assignments for a chord.
 */

#include "fretsolve/fingering.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fretsolve/analysis.h"
#include "fretsolve/cost_model.h"
#include "fretsolve/errors.h"

namespace fretsolve {

namespace {

struct Search {
  const std::vector<int>& pvs;
  const std::vector<std::vector<Position>>& options;
  std::array<int, kNumStrings> frets{};
  std::set<ChordShape> found;

  void run(std::size_t k) {
    if (k == pvs.size()) {
      if (!finger_allocation(frets)) return;
      ChordShape shape(frets);
      if (std::isinf(span_cost(shape))) return;
      found.insert(shape);
      return;
    }
    for (const Position& pos : options[k]) {
      int& slot = frets[static_cast<std::size_t>(pos.string - 1)];
      if (slot != kMuted) continue;
      slot = pos.fret;
      run(k + 1);
      slot = kMuted;
    }
  }
};

}  // namespace

bool shape_order_less(const ChordShape& a, const ChordShape& b) noexcept {
  if (a.span() != b.span()) return a.span() < b.span();
  const int ia = a.index_fret().value_or(0);
  const int ib = b.index_fret().value_or(0);
  if (ia != ib) return ia < ib;
  return a.frets() < b.frets();
}

std::vector<ChordShape> enumerate_shapes(const Chord& chord, const Tuning6& tuning,
                                         int max_candidates) {
  validate_chord(chord);
  const Tuning5 t5 = to_tuning5(tuning);
  const int base = tuning.lowest().abs();

  std::vector<int> pvs;
  for (int n : chord.numbers()) pvs.push_back(n - base);

  std::vector<std::vector<Position>> options;
  for (std::size_t k = 0; k < pvs.size(); ++k) {
    options.push_back(positions_for_pv(pvs[k], t5));
    if (options.back().empty()) {
      const Pitch p(pvs[k] + base);
      throw UnplayableChordError(
          "pitch " + p.scientific() + " is not on the fingerboard of " + tuning.helmholtz(), p.abs());
    }
  }
  if (!passes_redundancy1_check(t5, pvs)) {
    throw InfeasibleChordError("chord needs two tones from a range only one string can play (" +
                               tuning.helmholtz() + ")");
  }

  Search search{pvs, options, {}, {}};
  search.frets.fill(kMuted);
  search.run(0);
  if (search.found.empty()) {
    throw InfeasibleChordError("no shape with at most four fingers and a five-fret span plays the chord in " +
                               tuning.helmholtz());
  }

  std::vector<ChordShape> shapes(search.found.begin(), search.found.end());
  std::sort(shapes.begin(), shapes.end(), shape_order_less);
  if (max_candidates > 0 && shapes.size() > static_cast<std::size_t>(max_candidates)) {
    shapes.resize(static_cast<std::size_t>(max_candidates));
  }
  return shapes;
}

}  // namespace fretsolve
