#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netchoice/choice_data.hpp"
#include "netchoice/fit_result.hpp"
#include "netchoice/inference.hpp"
#include "netchoice/mixed_logit.hpp"
#include "netchoice/random.hpp"

namespace netchoice {

struct PatentRecord {
  std::string id;
  int award_year = 0;
  std::string category;
  std::string subcategory;
};

struct Citation {
  std::string citing;
  std::string cited;
};

struct PatentCorpus {
  std::vector<PatentRecord> patents;
  std::vector<Citation> citations;
};

struct PatentPipelineConfig {
  int cohort_year = 1975;
  int n_choosers = 10000;
  int k_negatives = 6;
  bool restrict_category = true;
};

struct PatentBuildStats {
  int n_eligible_choosers = 0;
  int n_sampled_choosers = 0;
  int cohort_internal_dropped = 0;
  int situations_skipped = 0;  // candidate pool smaller than k_negatives + 1
};

// Cohort extraction plus covariate construction. One sequence per sampled
// cohort patent with at least one pre-cohort citation; each situation holds
// the cited patent plus k uniformly drawn non-cited candidates from the
// admissible pool (pre-cohort patents, same category when restricted).
// Covariates: CReceived = pre-cohort in-degree of the candidate divided by
// the chooser's citations made; SubCat = same subcategory indicator;
// TimeDiff = cohort year minus candidate award year.
Dataset build_patent_dataset(const PatentCorpus& corpus, const PatentPipelineConfig& cfg,
                             const RandomStream& stream, PatentBuildStats* stats = nullptr);

// CReceived ~ LogNormal, SubCat ~ LogNormal, TimeDiff ~ Normal, correlated.
MixingSpec patent_mixing_spec();

struct PatentStudyReport {
  FitResult rc;
  FitResult rc_uncorrelated;
  FitResult mnl;
  InferenceSummary inference;
  TestResult wald_cor13;   // factor tying the 1st and 3rd coefficients = 0
  TestResult lr_corr;       // correlated vs uncorrelated mixing
  TestResult lr_mnl_vs_rc;  // pooled point estimates vs mixing
  RandomnessDiagnostic randomness;
};

// Full analysis of a built dataset: correlated RC fit, uncorrelated RC and
// MNL comparison fits sharing the draw seed, medians and substitution rates,
// the 90% interval, correlation tests, and the randomness diagnostic.
PatentStudyReport run_patent_study(const Dataset& data, const RcOptions& opts);
std::string render_patent_study(const PatentStudyReport& report);

struct RobustnessCell {
  PatentPipelineConfig cfg;
  bool ok = false;
  std::string error;
  FitResult rc;
};

struct RobustnessGridSpec {
  std::vector<int> cohort_years;
  std::vector<int> n_choosers;
  std::vector<int> k_negatives;
  std::vector<bool> restrict_category;
};

// One RC fit per grid cell; per-cell failures are recorded and the grid
// continues.
std::vector<RobustnessCell> robustness_grid(const PatentCorpus& corpus,
                                            const RobustnessGridSpec& grid,
                                            const RcOptions& opts, std::uint64_t seed);
std::string render_robustness(const std::vector<RobustnessCell>& cells);

// Synthetic corpus with cohort citations generated from the patent utility
// specification at a known theta; pre-cohort citations form the in-degree
// background.
struct SyntheticCorpusConfig {
  int n_patents = 500;
  int first_year = 1970;
  int cohort_year = 1975;
  int n_categories = 2;
  int subcats_per_category = 2;
  int max_background_citations = 4;
  int cohort_degree_min = 1;
  int cohort_degree_max = 6;
};

PatentCorpus synthetic_patent_corpus(const SyntheticCorpusConfig& cfg, const MixingSpec& spec,
                                     const ThetaVector& truth, const RandomStream& stream);

// Frozen configuration and truth behind the corpus bundled under data/.
SyntheticCorpusConfig demo_corpus_config();
ThetaVector demo_corpus_truth();
std::uint64_t demo_corpus_seed();

}  // namespace netchoice
