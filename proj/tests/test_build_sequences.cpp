#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "netchoice/build_sequences.hpp"

using namespace netchoice;

namespace {

// Covariates that identify the candidate, handy for asserting set contents.
std::vector<double> id_covariate(const std::string&, const std::string& candidate, int) {
  return {static_cast<double>(candidate[0])};
}

std::set<std::string> alt_ids(const ChoiceSituation& sit) {
  std::set<std::string> ids;
  for (const auto& a : sit.alternatives) ids.insert(a.id);
  return ids;
}

}  // namespace

TEST_CASE("the four-node worked example produces three sequences") {
  const std::vector<EdgeRecord> edges = {
      {"p", "q", 1}, {"p", "r", 2}, {"q", "s", 3}, {"r", "s", 4}};
  AlternativePolicy policy;
  policy.mode = AltSetMode::AllOthers;
  const Dataset d = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(0));

  REQUIRE(d.sequences.size() == 3);  // no sequence for s (out-degree 0)
  CHECK(d.sequences[0].chooser_id == "p");
  CHECK(d.sequences[1].chooser_id == "q");
  CHECK(d.sequences[2].chooser_id == "r");

  REQUIRE(d.sequences[0].situations.size() == 2);
  CHECK(alt_ids(d.sequences[0].situations[0]) == std::set<std::string>{"q", "r", "s"});
  CHECK(alt_ids(d.sequences[0].situations[1]) == std::set<std::string>{"q", "r", "s"});
  CHECK(d.sequences[0].situations[0].alternatives[d.sequences[0].situations[0].chosen_index].id ==
        "q");
  CHECK(d.sequences[0].situations[1].alternatives[d.sequences[0].situations[1].chosen_index].id ==
        "r");

  REQUIRE(d.sequences[1].situations.size() == 1);
  CHECK(alt_ids(d.sequences[1].situations[0]) == std::set<std::string>{"p", "r", "s"});
  REQUIRE(d.sequences[2].situations.size() == 1);
  CHECK(alt_ids(d.sequences[2].situations[0]) == std::set<std::string>{"p", "q", "s"});
}

TEST_CASE("single edge gives one single-alternative situation") {
  const std::vector<EdgeRecord> edges = {{"a", "b", 1}};
  AlternativePolicy policy;
  const Dataset d = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(0));
  REQUIRE(d.sequences.size() == 1);
  REQUIRE(d.sequences[0].situations.size() == 1);
  CHECK(alt_ids(d.sequences[0].situations[0]) == std::set<std::string>{"b"});
  CHECK(d.sequences[0].situations[0].chosen_index == 0);
}

TEST_CASE("star graph with negative sampling keeps the chosen plus k alternatives") {
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < 5; ++i) edges.push_back({"hub", "leaf" + std::to_string(i), i});
  AlternativePolicy policy;
  policy.negative_sample_size = 2;
  const Dataset d = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(7));
  REQUIRE(d.sequences.size() == 1);
  REQUIRE(d.sequences[0].situations.size() == 5);
  for (std::size_t t = 0; t < 5; ++t) {
    const auto& sit = d.sequences[0].situations[t];
    CHECK(sit.alternatives.size() == 3);
    CHECK(sit.alternatives[sit.chosen_index].id == "leaf" + std::to_string(t));
  }
}

TEST_CASE("sequence count and total length match sources and edges") {
  const std::vector<EdgeRecord> edges = {{"a", "b", 1}, {"a", "c", 5}, {"b", "c", 2},
                                         {"c", "a", 9}, {"a", "d", 3}};
  AlternativePolicy policy;
  const Dataset d = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(0));
  CHECK(d.sequences.size() == 3);
  CHECK(d.total_situations() == edges.size());
  // situations ordered by order_key
  CHECK(d.sequences[0].situations.size() == 3);
}

TEST_CASE("self-edges are rejected") {
  const std::vector<EdgeRecord> edges = {{"a", "a", 1}};
  AlternativePolicy policy;
  CHECK_THROWS_AS(build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(0)),
                  std::invalid_argument);
}

TEST_CASE("predecessors-only admits strictly earlier nodes") {
  // c (t=3) cites a (t=1); b appears at t=2 so it is also admissible; d at t=9 is not.
  const std::vector<EdgeRecord> edges = {
      {"a", "b", 2}, {"c", "a", 3}, {"d", "c", 9}, {"a", "e", 1}};
  AlternativePolicy policy;
  policy.mode = AltSetMode::PredecessorsOnly;
  const Dataset d = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(0));
  const auto it = std::find_if(d.sequences.begin(), d.sequences.end(),
                               [](const ChoiceSequence& s) { return s.chooser_id == "c"; });
  REQUIRE(it != d.sequences.end());
  // c first appears at key 3; earlier nodes are a (1), e (1), b (2).
  CHECK(alt_ids(it->situations[0]) == std::set<std::string>{"a", "b", "e"});
}

TEST_CASE("negative_sample keeps everything when there is no slack") {
  std::vector<Alternative> full;
  for (int i = 0; i < 7; ++i) full.push_back({"x" + std::to_string(i), {0.0}});
  RandomStream s(3);
  const ChoiceSituation sit = negative_sample(full, 2, 6, s);
  CHECK(sit.alternatives.size() == 7);
  CHECK(sit.alternatives[sit.chosen_index].id == "x2");
}

TEST_CASE("negative_sample rejects k larger than the non-chosen pool") {
  std::vector<Alternative> full;
  for (int i = 0; i < 5; ++i) full.push_back({"x" + std::to_string(i), {0.0}});
  RandomStream s(3);
  CHECK_THROWS_AS(negative_sample(full, 0, 5, s), std::invalid_argument);
}

TEST_CASE("negative sampling satisfies uniform conditioning inclusion rates") {
  std::vector<Alternative> full;
  for (int i = 0; i < 10; ++i) full.push_back({"x" + std::to_string(i), {0.0}});
  const int chosen = 4, k = 3, reps = 100000;
  RandomStream s(99);
  std::map<std::string, int> seen;
  for (int r = 0; r < reps; ++r) {
    const ChoiceSituation sit = negative_sample(full, chosen, k, s);
    CHECK(sit.alternatives.size() == k + 1);
    CHECK(sit.alternatives[sit.chosen_index].id == "x4");
    for (const auto& a : sit.alternatives)
      if (a.id != "x4") ++seen[a.id];
  }
  const double expected = static_cast<double>(k) / 9.0;
  for (const auto& [id, count] : seen)
    CHECK(std::abs(static_cast<double>(count) / reps - expected) < 0.01);
  CHECK(seen.size() == 9);
}

TEST_CASE("sampled positions depend only on count, k, and stream") {
  // Exchangeability: the sampler never looks at ids or covariates, so
  // permuting candidate values permutes the output correspondingly.
  std::vector<Alternative> a, b;
  for (int i = 0; i < 8; ++i) a.push_back({"a" + std::to_string(i), {double(i)}});
  for (int i = 0; i < 8; ++i) b.push_back({"b" + std::to_string(7 - i), {double(7 - i)}});
  RandomStream s1(5), s2(5);
  const ChoiceSituation sa = negative_sample(a, 3, 4, s1);
  const ChoiceSituation sb = negative_sample(b, 3, 4, s2);
  // positions of retained alternatives coincide
  std::vector<int> pa, pb;
  for (const auto& alt : sa.alternatives) pa.push_back(static_cast<int>(alt.covariates[0]));
  for (const auto& alt : sb.alternatives) pb.push_back(7 - static_cast<int>(alt.covariates[0]));
  CHECK(pa == pb);
}

TEST_CASE("canonical output is invariant to edge-list order") {
  std::vector<EdgeRecord> edges = {{"b", "a", 2}, {"a", "b", 1}, {"a", "c", 3}};
  AlternativePolicy policy;
  const Dataset d1 = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(11));
  std::reverse(edges.begin(), edges.end());
  const Dataset d2 = build_sequences(edges, policy, id_covariate, {"c"}, RandomStream(11));
  REQUIRE(d1.sequences.size() == d2.sequences.size());
  for (std::size_t i = 0; i < d1.sequences.size(); ++i) {
    CHECK(d1.sequences[i].chooser_id == d2.sequences[i].chooser_id);
    CHECK(d1.sequences[i].situations.size() == d2.sequences[i].situations.size());
  }
}
