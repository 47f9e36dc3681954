#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "netchoice/choice_data.hpp"
#include "netchoice/io.hpp"
#include "netchoice/mixing.hpp"
#include "netchoice/random.hpp"

using namespace netchoice;

namespace {

Alternative alt(const std::string& id, std::vector<double> cov) {
  return Alternative{id, std::move(cov)};
}

Dataset small_dataset() {
  Dataset d;
  d.characteristic_names = {"x", "y"};
  ChoiceSequence p;
  p.chooser_id = "p";
  p.situations.push_back({{alt("q", {0.1, 2.0}), alt("r", {-0.5, 1.0}), alt("s", {0.9, 0.0})}, 0});
  p.situations.push_back({{alt("q", {0.3, 4.0}), alt("r", {0.2, 3.0})}, 1});
  ChoiceSequence q;
  q.chooser_id = "q";
  q.situations.push_back({{alt("p", {1.0, 1.0}), alt("s", {-1.0, 0.5})}, 1});
  ChoiceSequence r;
  r.chooser_id = "r";
  r.situations.push_back({{alt("s", {0.25, 1.5})}, 0});
  d.sequences = {p, q, r};
  return d;
}

}  // namespace

TEST_CASE("well-formed dataset has no violations") {
  CHECK(validate_dataset(small_dataset()).empty());
}

TEST_CASE("chosen_index at |alternatives| is flagged") {
  Dataset d = small_dataset();
  d.sequences[1].situations[0].chosen_index =
      static_cast<int>(d.sequences[1].situations[0].alternatives.size());
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "chosen_index out of range @ seq q, t=0");
}

TEST_CASE("empty sequence is flagged") {
  Dataset d = small_dataset();
  d.sequences[2].situations.clear();
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "empty sequence @ seq r");
}

TEST_CASE("duplicate ids, bad covariate lengths, and non-finite entries are flagged") {
  Dataset d = small_dataset();
  d.sequences[0].situations[0].alternatives[1].id = "q";
  d.sequences[0].situations[1].alternatives[0].covariates = {1.0};
  d.sequences[1].situations[0].alternatives[0].covariates[1] =
      std::numeric_limits<double>::quiet_NaN();
  const auto v = validate_dataset(d);
  CHECK(v.size() == 3);
}

TEST_CASE("interchange round-trip is the identity") {
  const Dataset d = small_dataset();
  const std::string path = (std::filesystem::temp_directory_path() / "nc_roundtrip.csv").string();
  write_dataset_csv(d, path);
  const Dataset back = read_dataset_csv(path);
  REQUIRE(back.characteristic_names == d.characteristic_names);
  REQUIRE(back.sequences.size() == d.sequences.size());
  for (std::size_t s = 0; s < d.sequences.size(); ++s) {
    CHECK(back.sequences[s].chooser_id == d.sequences[s].chooser_id);
    REQUIRE(back.sequences[s].situations.size() == d.sequences[s].situations.size());
    for (std::size_t t = 0; t < d.sequences[s].situations.size(); ++t) {
      const auto& a = d.sequences[s].situations[t];
      const auto& b = back.sequences[s].situations[t];
      CHECK(b.chosen_index == a.chosen_index);
      REQUIRE(b.alternatives.size() == a.alternatives.size());
      for (std::size_t i = 0; i < a.alternatives.size(); ++i) {
        CHECK(b.alternatives[i].id == a.alternatives[i].id);
        CHECK(b.alternatives[i].covariates == a.alternatives[i].covariates);  // bit-exact
      }
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("round-trip preserves awkward doubles bit-exactly") {
  Dataset d;
  d.characteristic_names = {"v"};
  ChoiceSequence s;
  s.chooser_id = "a";
  RandomStream rng(99);
  ChoiceSituation sit;
  sit.alternatives.push_back(alt("b", {0x1.fffffffffffffp-2}));
  sit.alternatives.push_back(alt("c", {1e-308}));
  sit.alternatives.push_back(alt("d", {-123456.789012345678}));
  sit.alternatives.push_back(alt("e", {rng.next_unit()}));
  sit.chosen_index = 2;
  s.situations.push_back(sit);
  d.sequences.push_back(s);

  const std::string path = (std::filesystem::temp_directory_path() / "nc_bits.csv").string();
  write_dataset_csv(d, path);
  const Dataset back = read_dataset_csv(path);
  for (std::size_t i = 0; i < sit.alternatives.size(); ++i)
    CHECK(back.sequences[0].situations[0].alternatives[i].covariates[0] ==
          sit.alternatives[i].covariates[0]);
  std::remove(path.c_str());
}

TEST_CASE("theta pack/unpack is a bijection") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal},
                       {"b", Family::Fixed},
                       {"c", Family::LogNormal},
                       {"d", Family::Uniform}};
  spec.correlated = true;  // normal block = {a, c}: one factor entry
  ThetaVector t;
  t.means = {1.5, -2.0, 0.25, 3.0};
  t.scales = {0.5, 1.25, 0.75};
  t.corr_factors = {-0.4};
  const Eigen::VectorXd packed = t.pack();
  REQUIRE(packed.size() == spec.n_parameters());
  const ThetaVector back = ThetaVector::unpack(packed, spec);
  CHECK(back.means == t.means);
  CHECK(back.scales == t.scales);
  CHECK(back.corr_factors == t.corr_factors);
  // and the reverse composition
  CHECK((back.pack().array() == packed.array()).all());

  RandomStream rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd v(spec.n_parameters());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_normal();
    CHECK((ThetaVector::unpack(v, spec).pack().array() == v.array()).all());
  }
}

TEST_CASE("implied correlations come from the factor") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal}, {"b", Family::LogNormal}};
  spec.correlated = true;
  ThetaVector t;
  t.means = {0.0, 0.0};
  t.scales = {1.0, 1.0};
  t.corr_factors = {1.0};  // L = [[1,0],[1,1]] -> cor = 1/sqrt(2)
  const auto cors = implied_correlations(spec, t);
  REQUIRE(cors.size() == 1);
  CHECK(cors[0].coef_i == 0);
  CHECK(cors[0].coef_j == 1);
  CHECK(cors[0].value == doctest::Approx(1.0 / std::sqrt(2.0)));
}
