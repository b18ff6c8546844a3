/**
 * @file fingering.h
 * @brief Enumeration of the chord shapes that realize a chord under a tuning.
 */

#pragma once

#include <vector>

#include "fretsolve/composition.h"
#include "fretsolve/shape.h"

namespace fretsolve {

inline constexpr int kDefaultMaxCandidates = 64;

/// Orders shapes by span, then index fret (open-only first), then fret vector.
bool shape_order_less(const ChordShape& a, const ChordShape& b) noexcept;

/// All shapes that sound exactly the chord's pitches, one pitch per string, with at
/// most four fingers and a finite span cost. Sorted by shape_order_less and cut to
/// `max_candidates` (<= 0 means no limit).
///
/// Throws UnplayableChordError when a pitch has no position on the fingerboard and
/// InfeasibleChordError when the pitches cannot sound together.
std::vector<ChordShape> enumerate_shapes(const Chord& chord, const Tuning6& tuning,
                                         int max_candidates = kDefaultMaxCandidates);

}  // namespace fretsolve
