/**
 * @file json_io.h
 * @brief JSON encodings shared by the HTTP service and the CLI's `--format json`.
 */

#pragma once

#include <json.hpp>

#include "fretsolve/analysis.h"
#include "fretsolve/cipher.h"
#include "fretsolve/composition.h"
#include "fretsolve/cost_model.h"
#include "fretsolve/optimizer.h"

namespace fretsolve {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Tuning6& tuning);
nlohmann::json to_json(const Key& key);
nlohmann::json to_json(const Cipher& cipher);
/// Six entries, string 1 first; null for muted strings.
nlohmann::json to_json(const ChordShape& shape);
nlohmann::json to_json(const CostBreakdown& cost);
/// Includes the rendered tab under "tab".
nlohmann::json to_json(const OptimizationResult& result);
nlohmann::json to_json(const RedundancyProfile& profile);
nlohmann::json to_json(const IsoPitchMap& map);
nlohmann::json to_json(const CipherApplication& application);

/// Weight fields named as in the flat config file; missing fields keep `base`.
/// Throws ArgumentError on unknown fields or bad values.
CostWeights weights_from_json(const nlohmann::json& j, CostWeights base = {});

/// Either `.chords` text or {"key", "tempo", "chords": [{"pitches": [...], "beats"|"duration_ms"}]}.
/// Throws ParseError (text form) or ArgumentError.
Composition composition_from_json(const nlohmann::json& j);

}  // namespace fretsolve
