#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netchoice/choice_data.hpp"
#include "netchoice/random.hpp"

namespace netchoice {

// One directed edge. order_key establishes the position of the edge within
// its source's choice sequence; self-edges are rejected.
struct EdgeRecord {
  std::string source;
  std::string target;
  std::int64_t order_key = 0;
};

enum class AltSetMode {
  AllOthers,         // every node in the edge list except the chooser
  PredecessorsOnly,  // nodes whose first appearance strictly precedes the chooser's
  FilteredByAttribute  // nodes passing a caller-supplied predicate
};

struct AlternativePolicy {
  AltSetMode mode = AltSetMode::AllOthers;
  std::optional<int> negative_sample_size;
  // Required for FilteredByAttribute: admit(chooser, candidate).
  std::function<bool(const std::string&, const std::string&)> admit;
};

// Covariates for (chooser, candidate) at situation index t. Must be a pure
// function of its arguments and return finite values.
using CovariateFn =
    std::function<std::vector<double>(const std::string& chooser,
                                      const std::string& candidate, int t)>;

// Keeps the chosen alternative and draws k distinct non-chosen alternatives
// uniformly at random without replacement; each non-chosen candidate ends up
// included with probability k / (|full_set| - 1). Output preserves the input
// order of the retained alternatives. Sampling depends on candidate positions
// only, never on ids or covariates.
ChoiceSituation negative_sample(const std::vector<Alternative>& full_set, int chosen_index,
                                int k, RandomStream& stream);

// Converts a timestamped edge list into one choice sequence per source node
// (out-degree-0 nodes produce nothing). Situations are ordered by
// (order_key, target id); sequences are sorted by chooser id, so the output
// is canonical regardless of scheduling. Covariates are computed here and
// frozen.
Dataset build_sequences(const std::vector<EdgeRecord>& edges, const AlternativePolicy& policy,
                        const CovariateFn& covariates,
                        const std::vector<std::string>& characteristic_names,
                        const RandomStream& stream);

}  // namespace netchoice
