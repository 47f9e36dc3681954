#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace netchoice {

// One candidate in a choice situation. `covariates` has one entry per model
// characteristic, already encoded (unitless).
struct Alternative {
  std::string id;
  std::vector<double> covariates;
};

// One decision: the set of alternatives faced and the index of the one taken.
// The chosen alternative is stored as an index so likelihood code never
// searches by id.
struct ChoiceSituation {
  std::vector<Alternative> alternatives;
  int chosen_index = 0;
};

// All decisions made by one chooser. The sequence length equals the chooser's
// out-degree; out-degree-0 nodes never produce a sequence.
struct ChoiceSequence {
  std::string chooser_id;
  std::vector<ChoiceSituation> situations;
};

struct Dataset {
  std::vector<ChoiceSequence> sequences;
  std::vector<std::string> characteristic_names;

  int n_characteristics() const { return static_cast<int>(characteristic_names.size()); }
  std::size_t total_situations() const;
};

// Returns human-readable descriptions of every invariant violation, empty if
// the dataset is well formed. Violations are reported, never thrown.
std::vector<std::string> validate_dataset(const Dataset& d);

// Dense per-situation view used by the likelihood kernels: covariates stacked
// into a J x K matrix per situation. Built once per fit; immutable afterwards.
struct SituationView {
  Eigen::MatrixXd x;  // J x K
  int chosen = 0;
};

struct SequenceView {
  std::vector<SituationView> situations;
};

struct DatasetView {
  std::vector<SequenceView> sequences;
  int n_characteristics = 0;

  static DatasetView build(const Dataset& d);
};

}  // namespace netchoice
