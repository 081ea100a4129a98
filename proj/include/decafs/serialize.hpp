#pragma once

#include "json.hpp"

#include "decafs/evaluate.hpp"
#include "decafs/params.hpp"
#include "decafs/simulate.hpp"
#include "decafs/solver.hpp"

namespace decafs {

inline constexpr int kSchemaVersion = 1;

/// Insertion-ordered JSON so documents read in a fixed, natural key order.
using Json = nlohmann::ordered_json;

Json to_json(const ModelParams& params);
Json to_json(const EvalReport& report);
/// Changepoints, cost and (optionally) the fitted signal.
Json to_json(const Segmentation& seg, bool with_signal);

Json to_json(const sim::ScenarioSpec& spec);
/// Strict reader: unknown keys, wrong types or invalid values raise
/// InvalidParameter. Only "kind" and "n" are required.
sim::ScenarioSpec scenario_from_json(const Json& doc);

}  // namespace decafs
