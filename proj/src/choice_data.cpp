#include "netchoice/choice_data.hpp"

#include <cmath>
#include <unordered_set>

namespace netchoice {

std::size_t Dataset::total_situations() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.situations.size();
  return n;
}

std::vector<std::string> validate_dataset(const Dataset& d) {
  std::vector<std::string> violations;
  const std::size_t k = d.characteristic_names.size();
  for (const auto& seq : d.sequences) {
    if (seq.situations.empty()) {
      violations.push_back("empty sequence @ seq " + seq.chooser_id);
      continue;
    }
    for (std::size_t t = 0; t < seq.situations.size(); ++t) {
      const auto& sit = seq.situations[t];
      const std::string where = " @ seq " + seq.chooser_id + ", t=" + std::to_string(t);
      if (sit.alternatives.empty()) {
        violations.push_back("empty alternative set" + where);
        continue;
      }
      if (sit.chosen_index < 0 ||
          sit.chosen_index >= static_cast<int>(sit.alternatives.size())) {
        violations.push_back("chosen_index out of range" + where);
      }
      std::unordered_set<std::string> seen;
      for (const auto& alt : sit.alternatives) {
        if (!seen.insert(alt.id).second) {
          violations.push_back("duplicate alternative id '" + alt.id + "'" + where);
        }
        if (alt.covariates.size() != k) {
          violations.push_back("covariate length mismatch for alt '" + alt.id + "'" + where);
          continue;
        }
        for (double v : alt.covariates) {
          if (!std::isfinite(v)) {
            violations.push_back("non-finite covariate for alt '" + alt.id + "'" + where);
            break;
          }
        }
      }
    }
  }
  return violations;
}

DatasetView DatasetView::build(const Dataset& d) {
  DatasetView view;
  view.n_characteristics = d.n_characteristics();
  view.sequences.reserve(d.sequences.size());
  for (const auto& seq : d.sequences) {
    SequenceView sv;
    sv.situations.reserve(seq.situations.size());
    for (const auto& sit : seq.situations) {
      SituationView s;
      const int j = static_cast<int>(sit.alternatives.size());
      s.x.resize(j, view.n_characteristics);
      for (int a = 0; a < j; ++a)
        for (int c = 0; c < view.n_characteristics; ++c)
          s.x(a, c) = sit.alternatives[a].covariates[c];
      s.chosen = sit.chosen_index;
      sv.situations.push_back(std::move(s));
    }
    view.sequences.push_back(std::move(sv));
  }
  return view;
}

}  // namespace netchoice
