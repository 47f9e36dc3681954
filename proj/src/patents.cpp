#include "netchoice/patents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "netchoice/logit.hpp"

namespace netchoice {

MixingSpec patent_mixing_spec() {
  MixingSpec s;
  s.coefficients = {{"CReceived", Family::LogNormal},
                    {"SubCat", Family::LogNormal},
                    {"TimeDiff", Family::Normal}};
  s.correlated = true;
  return s;
}

namespace {

struct CorpusIndex {
  std::unordered_map<std::string, int> by_id;
  std::unordered_map<std::string, int> citations_made;
  std::unordered_map<std::string, int> indegree_pre;  // from pre-cohort citers only
  std::map<std::string, std::vector<int>> predecessors_by_category;  // id-sorted
  std::vector<int> predecessors;  // id-sorted

  CorpusIndex(const PatentCorpus& corpus, int cohort_year) {
    for (int i = 0; i < static_cast<int>(corpus.patents.size()); ++i) {
      if (!by_id.emplace(corpus.patents[i].id, i).second)
        throw std::invalid_argument("duplicate patent id " + corpus.patents[i].id);
    }
    // subcategory -> category must be a consistent mapping
    std::unordered_map<std::string, std::string> subcat_cat;
    for (const auto& p : corpus.patents) {
      auto [it, inserted] = subcat_cat.emplace(p.subcategory, p.category);
      if (!inserted && it->second != p.category)
        throw std::invalid_argument("subcategory " + p.subcategory +
                                    " maps to multiple categories");
    }
    for (const auto& c : corpus.citations) {
      const auto citing = by_id.find(c.citing);
      const auto cited = by_id.find(c.cited);
      if (citing == by_id.end() || cited == by_id.end()) continue;  // outside corpus
      ++citations_made[c.citing];
      if (corpus.patents[citing->second].award_year < cohort_year)
        ++indegree_pre[c.cited];
    }
    std::vector<std::pair<std::string, int>> pre;
    for (int i = 0; i < static_cast<int>(corpus.patents.size()); ++i)
      if (corpus.patents[i].award_year < cohort_year) pre.push_back({corpus.patents[i].id, i});
    std::sort(pre.begin(), pre.end());
    for (const auto& [id, i] : pre) {
      predecessors.push_back(i);
      predecessors_by_category[corpus.patents[i].category].push_back(i);
    }
  }
};

std::vector<double> patent_covariates(const PatentRecord& chooser, const PatentRecord& cand,
                                      const CorpusIndex& index, int cohort_year,
                                      int citations_made) {
  const auto it = index.indegree_pre.find(cand.id);
  const double indeg = it == index.indegree_pre.end() ? 0.0 : it->second;
  return {indeg / static_cast<double>(citations_made),
          chooser.subcategory == cand.subcategory ? 1.0 : 0.0,
          static_cast<double>(cohort_year - cand.award_year)};
}

// k distinct uniform picks from pool positions excluding `chosen_pos`
// (rejection; pools are much larger than k in practice).
std::vector<int> sample_negative_positions(int pool_size, int chosen_pos, int k,
                                           RandomStream& stream) {
  std::unordered_set<int> picked;
  std::vector<int> out;
  out.reserve(k);
  while (static_cast<int>(out.size()) < k) {
    const int pos = static_cast<int>(stream.next_below(pool_size));
    if (pos == chosen_pos || picked.count(pos)) continue;
    picked.insert(pos);
    out.push_back(pos);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Dataset build_patent_dataset(const PatentCorpus& corpus, const PatentPipelineConfig& cfg,
                             const RandomStream& stream, PatentBuildStats* stats) {
  if (cfg.k_negatives < 1)
    throw std::invalid_argument("build_patent_dataset: k_negatives >= 1");
  const CorpusIndex index(corpus, cfg.cohort_year);

  // Citations of cohort patents, keyed by chooser, targets kept when they
  // predate the cohort. Cohort-internal citations are dropped, not errors.
  std::map<std::string, std::vector<int>> kept_targets;
  int cohort_internal = 0;
  for (const auto& c : corpus.citations) {
    const auto citing = index.by_id.find(c.citing);
    const auto cited = index.by_id.find(c.cited);
    if (citing == index.by_id.end() || cited == index.by_id.end()) continue;
    if (corpus.patents[citing->second].award_year != cfg.cohort_year) continue;
    if (corpus.patents[cited->second].award_year >= cfg.cohort_year) {
      ++cohort_internal;
      continue;
    }
    kept_targets[c.citing].push_back(cited->second);
  }
  if (kept_targets.empty())
    throw std::invalid_argument("build_patent_dataset: no cohort patent cites a predecessor");

  // Uniform chooser sample over the (id-sorted) eligible cohort.
  std::vector<std::string> eligible;
  for (const auto& [id, targets] : kept_targets) eligible.push_back(id);
  std::vector<std::string> chosen_ids;
  if (cfg.n_choosers >= static_cast<int>(eligible.size())) {
    chosen_ids = eligible;
  } else {
    RandomStream sampler = stream.derive(0);
    std::vector<int> idx(eligible.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    for (int i = 0; i < cfg.n_choosers; ++i) {
      const int j = i + static_cast<int>(sampler.next_below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(cfg.n_choosers);
    std::sort(idx.begin(), idx.end());
    for (int i : idx) chosen_ids.push_back(eligible[i]);
  }

  Dataset out;
  out.characteristic_names = {"CReceived", "SubCat", "TimeDiff"};
  PatentBuildStats local_stats;
  local_stats.n_eligible_choosers = static_cast<int>(eligible.size());
  local_stats.n_sampled_choosers = static_cast<int>(chosen_ids.size());
  local_stats.cohort_internal_dropped = cohort_internal;

  const RandomStream negatives_root = stream.derive(1);
  for (std::size_t ord = 0; ord < chosen_ids.size(); ++ord) {
    const std::string& chooser_id = chosen_ids[ord];
    const PatentRecord& chooser = corpus.patents[index.by_id.at(chooser_id)];
    const int made = index.citations_made.at(chooser_id);
    std::vector<int> targets = kept_targets.at(chooser_id);
    std::sort(targets.begin(), targets.end(), [&](int a, int b) {
      return corpus.patents[a].id < corpus.patents[b].id;
    });

    const std::vector<int>& pool =
        cfg.restrict_category
            ? index.predecessors_by_category.at(chooser.category)
            : index.predecessors;

    ChoiceSequence seq;
    seq.chooser_id = chooser_id;
    const RandomStream chooser_stream = negatives_root.derive(ord);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const int target_idx = targets[t];
      // Position of the chosen patent inside the pool; the chosen alternative
      // is retained even when the restriction would not admit it.
      const auto pos_it = std::lower_bound(
          pool.begin(), pool.end(), target_idx, [&](int a, int b) {
            return corpus.patents[a].id < corpus.patents[b].id;
          });
      const bool in_pool = pos_it != pool.end() && *pos_it == target_idx;
      const int pool_n = static_cast<int>(pool.size());
      const int usable = in_pool ? pool_n - 1 : pool_n;
      if (usable < cfg.k_negatives) {
        ++local_stats.situations_skipped;
        continue;
      }
      RandomStream sit_stream = chooser_stream.derive(t);
      const int chosen_pos = in_pool ? static_cast<int>(pos_it - pool.begin()) : -1;
      const std::vector<int> negatives =
          sample_negative_positions(pool_n, chosen_pos, cfg.k_negatives, sit_stream);

      ChoiceSituation sit;
      sit.alternatives.reserve(cfg.k_negatives + 1);
      auto add_alt = [&](int patent_idx, bool is_chosen) {
        const PatentRecord& cand = corpus.patents[patent_idx];
        if (is_chosen) sit.chosen_index = static_cast<int>(sit.alternatives.size());
        sit.alternatives.push_back(
            {cand.id, patent_covariates(chooser, cand, index, cfg.cohort_year, made)});
      };
      bool chosen_added = false;
      for (int pos : negatives) {
        if (!chosen_added &&
            corpus.patents[pool[pos]].id > corpus.patents[target_idx].id) {
          add_alt(target_idx, true);
          chosen_added = true;
        }
        add_alt(pool[pos], false);
      }
      if (!chosen_added) add_alt(target_idx, true);
      seq.situations.push_back(std::move(sit));
    }
    if (!seq.situations.empty()) out.sequences.push_back(std::move(seq));
  }
  if (stats) *stats = local_stats;
  return out;
}

PatentStudyReport run_patent_study(const Dataset& data, const RcOptions& opts) {
  PatentStudyReport rep;
  const MixingSpec spec = patent_mixing_spec();
  rep.rc = fit_rc(data, spec, opts);

  MixingSpec uncorr = spec;
  uncorr.correlated = false;
  rep.rc_uncorrelated = fit_rc(data, uncorr, opts);

  rep.mnl = fit_mnl(data);

  rep.inference = summarize_coefficients(rep.rc, 0.9);
  rep.randomness = randomness_diagnostic(rep.rc);

  // Correlation between the 1st and 3rd coefficients: with a lower-triangular
  // factor that correlation is zero exactly when the chol_31 entry is zero.
  const auto names = parameter_names(spec);
  const auto it = std::find(names.begin(), names.end(), "chol_31");
  if (it != names.end())
    rep.wald_cor13 =
        wald_test_single(rep.rc, static_cast<int>(it - names.begin()), 0.0);
  rep.lr_corr = lr_test(rep.rc, rep.rc_uncorrelated);
  rep.lr_mnl_vs_rc = lr_test(rep.rc, rep.mnl);
  return rep;
}

namespace {

std::string fmt_test(const char* label, const TestResult& t) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: statistic %.4f, dof %d, p-value %.4g%s\n", label,
                t.statistic, t.dof, t.p_value, significance_stars(t.p_value).c_str());
  return buf;
}

}  // namespace

std::string render_patent_study(const PatentStudyReport& rep) {
  std::ostringstream os;
  os << "=== Repeated-choice (mixed logit) fit ===\n" << render_fit_table(rep.rc) << '\n';
  os << "=== MNL point estimates ===\n" << render_fit_table(rep.mnl) << '\n';
  os << "=== Coefficient distributions ===\n" << render_inference_summary(rep.inference) << '\n';
  os << fmt_test("Wald test, cor(1,3) = 0", rep.wald_cor13);
  os << fmt_test("LR test, correlated vs uncorrelated", rep.lr_corr);
  os << fmt_test("LR test, RC vs MNL", rep.lr_mnl_vs_rc);
  os << "=== Randomness diagnostic (" << rep.randomness.caveat << ") ===\n";
  for (const auto& v : rep.randomness.verdicts) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %-12s p=%.4f -> %s\n", v.param.c_str(),
                  v.characteristic.c_str(), v.p_value,
                  v.likely_deterministic ? "likely-deterministic" : "likely-random");
    os << line;
  }
  return os.str();
}

std::vector<RobustnessCell> robustness_grid(const PatentCorpus& corpus,
                                            const RobustnessGridSpec& grid,
                                            const RcOptions& opts, std::uint64_t seed) {
  std::vector<RobustnessCell> cells;
  const RandomStream master(seed);
  std::size_t cell_idx = 0;
  for (int year : grid.cohort_years)
    for (int n : grid.n_choosers)
      for (int k : grid.k_negatives)
        for (bool restrict_cat : grid.restrict_category) {
          RobustnessCell cell;
          cell.cfg = {year, n, k, restrict_cat};
          try {
            const Dataset data =
                build_patent_dataset(corpus, cell.cfg, master.derive(cell_idx));
            RcOptions cell_opts = opts;
            cell_opts.seed = master.derive(1000000 + cell_idx).seed();
            cell.rc = fit_rc(data, patent_mixing_spec(), cell_opts);
            cell.ok = true;
          } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
          }
          cells.push_back(std::move(cell));
          ++cell_idx;
        }
  return cells;
}

std::string render_robustness(const std::vector<RobustnessCell>& cells) {
  std::ostringstream os;
  os << "cell: year / choosers / negatives / category restriction\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    os << "(" << i + 1 << ") " << c.cfg.cohort_year << " / " << c.cfg.n_choosers << " / "
       << c.cfg.k_negatives << " / " << (c.cfg.restrict_category ? "on" : "off");
    if (!c.ok) {
      os << "  FAILED: " << c.error << '\n';
      continue;
    }
    os << '\n';
  }
  // Side-by-side parameter table over successful cells.
  const RobustnessCell* first_ok = nullptr;
  for (const auto& c : cells)
    if (c.ok) { first_ok = &c; break; }
  if (!first_ok) return os.str();
  const int p = first_ok->rc.n_parameters();
  for (int row = 0; row < p; ++row) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-10s",
                  first_ok->rc.param_names[row].c_str());
    os << head;
    for (const auto& c : cells) {
      if (!c.ok) {
        os << "      -    ";
        continue;
      }
      const bool scale = first_ok->rc.param_names[row].rfind("s_", 0) == 0;
      const double est = scale ? std::abs(c.rc.estimates[row]) : c.rc.estimates[row];
      char cellbuf[48];
      std::snprintf(cellbuf, sizeof(cellbuf), " %9.3f%-3s", est,
                    significance_stars(c.rc.p_values[row]).c_str());
      os << cellbuf;
    }
    os << '\n';
  }
  return os.str();
}

PatentCorpus synthetic_patent_corpus(const SyntheticCorpusConfig& cfg, const MixingSpec& spec,
                                     const ThetaVector& truth, const RandomStream& stream) {
  truth.check_dimensions(spec);
  if (spec.n_coefficients() != 3)
    throw std::invalid_argument("synthetic_patent_corpus: spec must have 3 coefficients");
  PatentCorpus corpus;

  RandomStream meta = stream.derive(0);
  const int id_width = static_cast<int>(std::to_string(cfg.n_patents).size());
  for (int i = 0; i < cfg.n_patents; ++i) {
    PatentRecord p;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "P%0*d", id_width, i);
    p.id = buf;
    p.award_year =
        cfg.first_year +
        static_cast<int>(meta.next_below(cfg.cohort_year - cfg.first_year + 1));
    const int cat = static_cast<int>(meta.next_below(cfg.n_categories));
    const int sub = static_cast<int>(meta.next_below(cfg.subcats_per_category));
    p.category = "C" + std::to_string(cat + 1);
    p.subcategory = p.category + "S" + std::to_string(sub + 1);
    corpus.patents.push_back(std::move(p));
  }

  // Background citations among pre-cohort patents: half uniform, half copying
  // an earlier citation's target, which skews the in-degree distribution.
  auto earlier_in_category = [&](const PatentRecord& p) {
    std::vector<int> out;
    for (int i = 0; i < cfg.n_patents; ++i)
      if (corpus.patents[i].category == p.category &&
          corpus.patents[i].award_year < p.award_year)
        out.push_back(i);
    return out;
  };
  RandomStream back = stream.derive(1);
  std::vector<int> copy_pool;
  for (int i = 0; i < cfg.n_patents; ++i) {
    const PatentRecord& p = corpus.patents[i];
    if (p.award_year >= cfg.cohort_year || p.award_year == cfg.first_year) continue;
    const std::vector<int> pool = earlier_in_category(p);
    if (pool.empty()) continue;
    const int deg = static_cast<int>(back.next_below(cfg.max_background_citations + 1));
    for (int d = 0; d < deg; ++d) {
      int target;
      if (!copy_pool.empty() && back.next_unit() < 0.5) {
        target = copy_pool[back.next_below(copy_pool.size())];
        if (corpus.patents[target].category != p.category ||
            corpus.patents[target].award_year >= p.award_year)
          target = pool[back.next_below(pool.size())];
      } else {
        target = pool[back.next_below(pool.size())];
      }
      corpus.citations.push_back({p.id, corpus.patents[target].id});
      copy_pool.push_back(target);
    }
  }

  // Pre-cohort in-degree, fixed before any cohort choice is made.
  std::unordered_map<std::string, int> indeg;
  for (const auto& c : corpus.citations) ++indeg[c.cited];

  RandomStream cohort = stream.derive(2);
  std::size_t chooser_ordinal = 0;
  for (int i = 0; i < cfg.n_patents; ++i) {
    const PatentRecord& p = corpus.patents[i];
    if (p.award_year != cfg.cohort_year) continue;
    std::vector<int> pool;
    for (int j = 0; j < cfg.n_patents; ++j)
      if (corpus.patents[j].category == p.category &&
          corpus.patents[j].award_year < cfg.cohort_year)
        pool.push_back(j);
    if (static_cast<int>(pool.size()) < 2) continue;
    RandomStream ns = cohort.derive(chooser_ordinal++);
    const int t_n =
        cfg.cohort_degree_min +
        static_cast<int>(ns.next_below(cfg.cohort_degree_max - cfg.cohort_degree_min + 1));
    const Eigen::MatrixXd beta_row =
        transform_draws(spec, truth, base_draws_pseudo(spec, 1, ns.derive(0)));
    const Eigen::VectorXd beta = beta_row.row(0).transpose();

    Eigen::MatrixXd x(pool.size(), 3);
    for (std::size_t a = 0; a < pool.size(); ++a) {
      const PatentRecord& cand = corpus.patents[pool[a]];
      const auto it = indeg.find(cand.id);
      x(a, 0) = (it == indeg.end() ? 0.0 : it->second) / static_cast<double>(t_n);
      x(a, 1) = cand.subcategory == p.subcategory ? 1.0 : 0.0;
      x(a, 2) = static_cast<double>(cfg.cohort_year - cand.award_year);
    }
    const Eigen::VectorXd probs = choice_prob(x, beta);
    for (int t = 0; t < t_n; ++t) {
      const double u = ns.next_unit();
      double acc = 0.0;
      int pick = static_cast<int>(pool.size()) - 1;
      for (Eigen::Index a = 0; a < probs.size(); ++a) {
        acc += probs[a];
        if (u <= acc) {
          pick = static_cast<int>(a);
          break;
        }
      }
      corpus.citations.push_back({p.id, corpus.patents[pool[pick]].id});
    }
  }
  return corpus;
}

SyntheticCorpusConfig demo_corpus_config() { return SyntheticCorpusConfig{}; }

ThetaVector demo_corpus_truth() {
  ThetaVector t;
  t.means = {-0.7, 0.7, -0.05};
  t.scales = {0.5, 0.3, 0.35};
  t.corr_factors = {0.0, 0.0, 0.0};
  return t;
}

std::uint64_t demo_corpus_seed() { return 20240501ULL; }

}  // namespace netchoice
