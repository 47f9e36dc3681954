#include "netchoice/build_sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace netchoice {

ChoiceSituation negative_sample(const std::vector<Alternative>& full_set, int chosen_index,
                                int k, RandomStream& stream) {
  const int n = static_cast<int>(full_set.size());
  if (k < 1) throw std::invalid_argument("negative_sample: k >= 1");
  if (chosen_index < 0 || chosen_index >= n)
    throw std::invalid_argument("negative_sample: chosen_index out of range");
  if (n <= k)
    throw std::invalid_argument("negative_sample: not enough non-chosen alternatives");

  // Partial Fisher-Yates over the non-chosen positions.
  std::vector<int> positions;
  positions.reserve(n - 1);
  for (int i = 0; i < n; ++i)
    if (i != chosen_index) positions.push_back(i);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(stream.next_below(positions.size() - i));
    std::swap(positions[i], positions[j]);
  }

  std::vector<bool> keep(n, false);
  keep[chosen_index] = true;
  for (int i = 0; i < k; ++i) keep[positions[i]] = true;

  ChoiceSituation out;
  out.alternatives.reserve(k + 1);
  for (int i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    if (i == chosen_index) out.chosen_index = static_cast<int>(out.alternatives.size());
    out.alternatives.push_back(full_set[i]);
  }
  return out;
}

namespace {

struct PendingChoice {
  std::int64_t order_key = 0;
  std::string target;
};

}  // namespace

Dataset build_sequences(const std::vector<EdgeRecord>& edges, const AlternativePolicy& policy,
                        const CovariateFn& covariates,
                        const std::vector<std::string>& characteristic_names,
                        const RandomStream& stream) {
  if (edges.empty()) throw std::invalid_argument("build_sequences: empty edge list");
  if (policy.negative_sample_size && *policy.negative_sample_size < 1)
    throw std::invalid_argument("build_sequences: negative_sample_size >= 1");
  if (policy.mode == AltSetMode::FilteredByAttribute && !policy.admit)
    throw std::invalid_argument("build_sequences: FilteredByAttribute needs a predicate");

  // First appearance of each node, used by PredecessorsOnly; ordered map so
  // the node universe is canonical.
  std::map<std::string, std::int64_t> first_seen;
  for (const auto& e : edges) {
    if (e.source == e.target)
      throw std::invalid_argument("build_sequences: self-edge at node " + e.source);
    auto note = [&](const std::string& v) {
      auto [it, inserted] = first_seen.emplace(v, e.order_key);
      if (!inserted) it->second = std::min(it->second, e.order_key);
    };
    note(e.source);
    note(e.target);
  }

  std::map<std::string, std::vector<PendingChoice>> by_source;
  for (const auto& e : edges) by_source[e.source].push_back({e.order_key, e.target});

  const int k_chars = static_cast<int>(characteristic_names.size());
  auto covariates_checked = [&](const std::string& chooser, const std::string& cand, int t) {
    std::vector<double> v = covariates(chooser, cand, t);
    if (static_cast<int>(v.size()) != k_chars)
      throw std::invalid_argument("build_sequences: covariate_fn returned wrong length");
    for (double x : v)
      if (!std::isfinite(x))
        throw std::invalid_argument("build_sequences: covariate_fn returned non-finite value");
    return v;
  };

  Dataset out;
  out.characteristic_names = characteristic_names;
  std::size_t chooser_ordinal = 0;
  for (auto& [chooser, choices] : by_source) {
    std::sort(choices.begin(), choices.end(), [](const auto& a, const auto& b) {
      return a.order_key != b.order_key ? a.order_key < b.order_key : a.target < b.target;
    });
    ChoiceSequence seq;
    seq.chooser_id = chooser;
    const RandomStream chooser_stream = stream.derive(chooser_ordinal);
    for (std::size_t t = 0; t < choices.size(); ++t) {
      const auto& choice = choices[t];
      // Admitted candidates in canonical (id) order, chooser excluded; the
      // chosen node is always retained.
      std::vector<Alternative> full;
      int chosen_pos = -1;
      for (const auto& [node, node_key] : first_seen) {
        if (node == chooser) continue;
        bool admitted = true;
        switch (policy.mode) {
          case AltSetMode::AllOthers:
            break;
          case AltSetMode::PredecessorsOnly:
            admitted = node_key < first_seen.at(chooser);
            break;
          case AltSetMode::FilteredByAttribute:
            admitted = policy.admit(chooser, node);
            break;
        }
        if (node == choice.target) admitted = true;
        if (!admitted) continue;
        if (node == choice.target) chosen_pos = static_cast<int>(full.size());
        full.push_back(
            {node, covariates_checked(chooser, node, static_cast<int>(t))});
      }
      if (chosen_pos < 0)
        throw std::runtime_error("build_sequences: chosen node missing from candidates");

      ChoiceSituation sit;
      if (policy.negative_sample_size) {
        const int k = *policy.negative_sample_size;
        if (static_cast<int>(full.size()) - 1 < k)
          throw std::runtime_error("build_sequences: policy admits fewer than " +
                                   std::to_string(k) + " non-chosen candidates @ seq " +
                                   chooser + ", t=" + std::to_string(t));
        RandomStream sit_stream = chooser_stream.derive(t);
        sit = negative_sample(full, chosen_pos, k, sit_stream);
      } else {
        sit.alternatives = std::move(full);
        sit.chosen_index = chosen_pos;
      }
      seq.situations.push_back(std::move(sit));
    }
    out.sequences.push_back(std::move(seq));
    ++chooser_ordinal;
  }
  return out;
}

}  // namespace netchoice
