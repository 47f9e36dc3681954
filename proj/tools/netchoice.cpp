// Command-line front end: dataset generation, estimation, reporting, and the
// citation-network pipeline. Exit codes: 0 success, 2 validation failure,
// 3 non-convergence.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "netchoice/inference.hpp"
#include "netchoice/io.hpp"
#include "netchoice/logit.hpp"
#include "netchoice/mixed_logit.hpp"
#include "netchoice/patents.hpp"
#include "netchoice/synthetic.hpp"

using namespace netchoice;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_format = "table";
};

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::string fit_to_csv(const FitResult& fit) {
  std::ostringstream os;
  os << "name,characteristic,estimate,std_error,p_value\n";
  for (int i = 0; i < fit.n_parameters(); ++i)
    os << fit.param_names[i] << ',' << fit.characteristics[i] << ','
       << format_double(fit.estimates[i]) << ',' << format_double(fit.std_errors[i]) << ','
       << format_double(fit.p_values[i]) << '\n';
  return os.str();
}

int emit_fit(const FitResult& fit, const GlobalOpts& g, const std::string& out_path) {
  if (!out_path.empty()) write_text_file(out_path, fit_result_to_json(fit));
  if (g.out_format == "json")
    std::cout << fit_result_to_json(fit);
  else if (g.out_format == "csv")
    std::cout << fit_to_csv(fit);
  else
    std::cout << render_fit_table(fit);
  if (!fit.converged) {
    std::cerr << "warning: not converged: " << fit.message << "\n";
    return kExitNonConvergence;
  }
  return 0;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-choice estimation of network formation (MNL and mixed logit)"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Master seed for all randomized steps");
  app.add_option("--threads", g.threads, "OpenMP thread count (0 = library default)");
  app.add_option("--out-format", g.out_format, "Stdout format: json, table, or csv")
      ->check(CLI::IsMember({"json", "table", "csv"}));

  // generate
  auto* cmd_gen = app.add_subcommand("generate", "Generate a synthetic choice-sequence dataset");
  int gen_nodes = 1000;
  std::string gen_spec_path, gen_theta_path, gen_out;
  int deg_min = 1, deg_max = 20, alt_min = 1, alt_max = 10;
  std::vector<double> law_lo, law_hi;
  cmd_gen->add_option("--nodes", gen_nodes, "Number of choosers");
  cmd_gen->add_option("--spec", gen_spec_path, "Mixing-spec JSON file")->required();
  cmd_gen->add_option("--theta", gen_theta_path, "True theta JSON file")->required();
  cmd_gen->add_option("--out", gen_out, "Output dataset CSV")->required();
  cmd_gen->add_option("--degree-min", deg_min);
  cmd_gen->add_option("--degree-max", deg_max);
  cmd_gen->add_option("--alt-min", alt_min);
  cmd_gen->add_option("--alt-max", alt_max);
  cmd_gen->add_option("--law-lo", law_lo, "Per-characteristic uniform lower bounds");
  cmd_gen->add_option("--law-hi", law_hi, "Per-characteristic uniform upper bounds");

  // fit-mnl
  auto* cmd_mnl = app.add_subcommand("fit-mnl", "Fit the multinomial logit");
  std::string mnl_data, mnl_out;
  double mnl_tol = 1e-6;
  int mnl_max_iter = 200;
  cmd_mnl->add_option("--data", mnl_data, "Dataset CSV")->required();
  cmd_mnl->add_option("--tol", mnl_tol, "Gradient tolerance");
  cmd_mnl->add_option("--max-iter", mnl_max_iter, "Iteration cap");
  cmd_mnl->add_option("--out", mnl_out, "Write FitResult JSON here");

  // fit-rc
  auto* cmd_rc = app.add_subcommand("fit-rc", "Fit the repeated-choice mixed logit");
  std::string rc_data, rc_spec_path, rc_out, rc_scheme = "pseudo", rc_init_path;
  int rc_draws = 100, rc_max_iter = 200;
  double rc_tol = 1e-6;
  bool rc_correlated = false;
  cmd_rc->add_option("--data", rc_data, "Dataset CSV")->required();
  cmd_rc->add_option("--spec", rc_spec_path, "Mixing-spec JSON file")->required();
  cmd_rc->add_option("--draws", rc_draws, "Simulation draws per sequence");
  cmd_rc->add_option("--draw-scheme", rc_scheme, "pseudo or halton")
      ->check(CLI::IsMember({"pseudo", "halton"}));
  cmd_rc->add_flag("--correlated", rc_correlated, "Correlate the normal-base coefficients");
  cmd_rc->add_option("--init", rc_init_path, "Initial theta JSON (default: MNL warm start)");
  cmd_rc->add_option("--tol", rc_tol, "Gradient tolerance");
  cmd_rc->add_option("--max-iter", rc_max_iter, "Iteration cap");
  cmd_rc->add_option("--out", rc_out, "Write FitResult JSON here");

  // report
  auto* cmd_report = app.add_subcommand("report", "Render a saved fit with inference");
  std::string report_fit_path;
  double report_mass = 0.9;
  cmd_report->add_option("--fit", report_fit_path, "FitResult JSON")->required();
  cmd_report->add_option("--mass", report_mass, "Probability-interval mass");

  // ingest
  auto* cmd_ingest = app.add_subcommand(
      "ingest", "Convert NBER-style patent/citation files to the strict schema");
  std::string ing_apat, ing_cite, ing_out_patents, ing_out_citations;
  cmd_ingest->add_option("--apat", ing_apat, "NBER apat CSV (PATENT,GYEAR,...,CAT,SUBCAT)")
      ->required();
  cmd_ingest->add_option("--cite", ing_cite, "NBER cite CSV (CITING,CITED)")->required();
  cmd_ingest->add_option("--out-patents", ing_out_patents)->required();
  cmd_ingest->add_option("--out-citations", ing_out_citations)->required();

  // build-dataset
  auto* cmd_build = app.add_subcommand("build-dataset",
                                       "Build choice sequences from a patent corpus");
  std::string bld_patents, bld_citations, bld_out;
  int bld_year = 1975, bld_choosers = 10000, bld_negatives = 6;
  bool bld_no_restrict = false;
  cmd_build->add_option("--patents", bld_patents)->required();
  cmd_build->add_option("--citations", bld_citations)->required();
  cmd_build->add_option("--cohort-year", bld_year);
  cmd_build->add_option("--choosers", bld_choosers);
  cmd_build->add_option("--negatives", bld_negatives);
  cmd_build->add_flag("--no-restrict-category", bld_no_restrict,
                      "Admit candidates from every technology category");
  cmd_build->add_option("--out", bld_out, "Output dataset CSV")->required();

  // experiment
  auto* cmd_exp = app.add_subcommand("experiment", "Run a replication preset");
  std::string exp_table, exp_results;
  int exp_networks = 0, exp_nodes = 0, exp_draws = 0;
  bool exp_desk = false;
  cmd_exp->add_option("table", exp_table, "table1|table2|table3|table6|table7")->required();
  cmd_exp->add_option("--networks", exp_networks, "Override network count");
  cmd_exp->add_option("--nodes", exp_nodes, "Override nodes per network");
  cmd_exp->add_option("--draws", exp_draws, "Override simulation draws");
  cmd_exp->add_flag("--desk", exp_desk, "Laptop-scale preset");
  cmd_exp->add_option("--results", exp_results, "Append-only per-network results file");

  // robustness
  auto* cmd_rob = app.add_subcommand("robustness", "Sampling/year robustness grid");
  std::string rob_patents, rob_citations;
  std::string rob_years = "1975", rob_choosers = "10000", rob_negatives = "6",
              rob_restrict = "on";
  int rob_draws = 100;
  cmd_rob->add_option("--patents", rob_patents)->required();
  cmd_rob->add_option("--citations", rob_citations)->required();
  cmd_rob->add_option("--years", rob_years, "Comma-separated cohort years");
  cmd_rob->add_option("--choosers", rob_choosers, "Comma-separated chooser counts");
  cmd_rob->add_option("--negatives", rob_negatives, "Comma-separated negative counts");
  cmd_rob->add_option("--restrict", rob_restrict, "on, off, or on,off");
  cmd_rob->add_option("--draws", rob_draws, "Simulation draws per sequence");

  CLI11_PARSE(app, argc, argv);
  apply_threads(g.threads);

  try {
    if (cmd_gen->parsed()) {
      const MixingSpec spec = load_mixing_spec(gen_spec_path);
      const ThetaVector theta = load_theta(gen_theta_path);
      GenerateConfig cfg;
      cfg.n_nodes = gen_nodes;
      cfg.degree_min = deg_min;
      cfg.degree_max = deg_max;
      cfg.altset_min = alt_min;
      cfg.altset_max = alt_max;
      if (!law_lo.empty() || !law_hi.empty()) {
        if (law_lo.size() != law_hi.size())
          throw std::invalid_argument("--law-lo and --law-hi need the same length");
        for (std::size_t i = 0; i < law_lo.size(); ++i)
          cfg.laws.push_back({law_lo[i], law_hi[i]});
      }
      const Dataset data = generate_network(cfg, spec, theta, RandomStream(g.seed));
      write_dataset_csv(data, gen_out);
      std::cout << "wrote " << data.sequences.size() << " sequences ("
                << data.total_situations() << " situations) to " << gen_out << "\n";
      return 0;
    }

    if (cmd_mnl->parsed()) {
      const Dataset data = read_dataset_csv(mnl_data);
      const auto violations = validate_dataset(data);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid dataset: " << v << "\n";
        return kExitValidation;
      }
      OptimOptions opts;
      opts.grad_tol = mnl_tol;
      opts.max_iter = mnl_max_iter;
      return emit_fit(fit_mnl(data, opts), g, mnl_out);
    }

    if (cmd_rc->parsed()) {
      const Dataset data = read_dataset_csv(rc_data);
      const auto violations = validate_dataset(data);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid dataset: " << v << "\n";
        return kExitValidation;
      }
      MixingSpec spec = load_mixing_spec(rc_spec_path);
      if (rc_correlated) spec.correlated = true;
      RcOptions opts;
      opts.n_draws = rc_draws;
      opts.scheme = draw_scheme_from_string(rc_scheme);
      opts.seed = g.seed;
      opts.optim.grad_tol = rc_tol;
      opts.optim.max_iter = rc_max_iter;
      std::optional<ThetaVector> init;
      if (!rc_init_path.empty()) init = load_theta(rc_init_path);
      return emit_fit(fit_rc(data, spec, opts, init), g, rc_out);
    }

    if (cmd_report->parsed()) {
      const FitResult fit = fit_result_from_json(read_text_file(report_fit_path));
      std::cout << render_fit_table(fit);
      if (fit.spec && fit.theta) {
        std::cout << "\n" << render_inference_summary(summarize_coefficients(fit, report_mass));
        const RandomnessDiagnostic diag = randomness_diagnostic(fit);
        std::cout << "\nRandomness diagnostic (" << diag.caveat << "):\n";
        for (const auto& v : diag.verdicts)
          std::cout << "  " << v.param << " (" << v.characteristic << "): p=" << v.p_value
                    << " -> "
                    << (v.likely_deterministic ? "likely-deterministic" : "likely-random")
                    << "\n";
      }
      return 0;
    }

    if (cmd_ingest->parsed()) {
      // Thin adapter: locate the needed columns by header name.
      const auto convert_patents = [&]() {
        std::istringstream in(read_text_file(ing_apat));
        std::string line;
        if (!std::getline(in, line)) throw std::invalid_argument("empty apat file");
        std::map<std::string, int> col;
        {
          std::istringstream hs(line);
          std::string h;
          int i = 0;
          while (std::getline(hs, h, ',')) col[h] = i++;
        }
        for (const char* needed : {"PATENT", "GYEAR", "CAT", "SUBCAT"})
          if (!col.count(needed))
            throw std::invalid_argument(std::string("apat file lacks column ") + needed);
        std::ostringstream out;
        out << "id,award_year,category,subcategory\n";
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::vector<std::string> cells;
          std::istringstream ls(line);
          std::string c;
          while (std::getline(ls, c, ',')) cells.push_back(c);
          out << cells[col["PATENT"]] << ',' << cells[col["GYEAR"]] << ','
              << cells[col["CAT"]] << ',' << cells[col["SUBCAT"]] << '\n';
        }
        write_text_file(ing_out_patents, out.str());
      };
      const auto convert_citations = [&]() {
        std::istringstream in(read_text_file(ing_cite));
        std::string line;
        if (!std::getline(in, line)) throw std::invalid_argument("empty cite file");
        std::map<std::string, int> col;
        {
          std::istringstream hs(line);
          std::string h;
          int i = 0;
          while (std::getline(hs, h, ',')) col[h] = i++;
        }
        for (const char* needed : {"CITING", "CITED"})
          if (!col.count(needed))
            throw std::invalid_argument(std::string("cite file lacks column ") + needed);
        std::ostringstream out;
        out << "citing_id,cited_id\n";
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::vector<std::string> cells;
          std::istringstream ls(line);
          std::string c;
          while (std::getline(ls, c, ',')) cells.push_back(c);
          out << cells[col["CITING"]] << ',' << cells[col["CITED"]] << '\n';
        }
        write_text_file(ing_out_citations, out.str());
      };
      convert_patents();
      convert_citations();
      std::cout << "wrote " << ing_out_patents << " and " << ing_out_citations << "\n";
      return 0;
    }

    if (cmd_build->parsed()) {
      const PatentCorpus corpus = read_patent_corpus(bld_patents, bld_citations);
      PatentPipelineConfig cfg;
      cfg.cohort_year = bld_year;
      cfg.n_choosers = bld_choosers;
      cfg.k_negatives = bld_negatives;
      cfg.restrict_category = !bld_no_restrict;
      PatentBuildStats stats;
      const Dataset data = build_patent_dataset(corpus, cfg, RandomStream(g.seed), &stats);
      write_dataset_csv(data, bld_out);
      std::cout << "choosers: " << stats.n_sampled_choosers << " of "
                << stats.n_eligible_choosers << " eligible; cohort-internal citations dropped: "
                << stats.cohort_internal_dropped
                << "; situations skipped (pool too small): " << stats.situations_skipped
                << "\nwrote " << data.sequences.size() << " sequences to " << bld_out << "\n";
      return 0;
    }

    if (cmd_exp->parsed()) {
      ExperimentPreset preset = experiment_preset(exp_table, exp_desk);
      if (exp_networks > 0) preset.n_networks = exp_networks;
      if (exp_nodes > 0) preset.n_nodes = exp_nodes;
      if (exp_draws > 0) preset.n_draws = exp_draws;
      ExperimentOptions opts;
      opts.n_draws = preset.n_draws;
      opts.seed = g.seed;
      opts.results_path = exp_results;
      const RecoveryResult res = run_recovery_experiment(
          preset.n_networks, preset.n_nodes, preset.gen_spec, preset.theta_true,
          preset.fit_spec, preset.estimator, preset.gen_cfg, opts);
      std::cout << preset.name << (exp_desk ? " (desk scale)" : "") << ": "
                << preset.n_networks << " networks x " << preset.n_nodes << " nodes\n"
                << render_recovery_summary(res);
      return 0;
    }

    if (cmd_rob->parsed()) {
      const PatentCorpus corpus = read_patent_corpus(rob_patents, rob_citations);
      RobustnessGridSpec grid;
      grid.cohort_years = parse_int_list(rob_years);
      grid.n_choosers = parse_int_list(rob_choosers);
      grid.k_negatives = parse_int_list(rob_negatives);
      {
        std::istringstream ss(rob_restrict);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
          if (cell == "on")
            grid.restrict_category.push_back(true);
          else if (cell == "off")
            grid.restrict_category.push_back(false);
          else
            throw std::invalid_argument("--restrict takes on/off values");
        }
      }
      RcOptions opts;
      opts.n_draws = rob_draws;
      const std::size_t n_cells = grid.cohort_years.size() * grid.n_choosers.size() *
                                  grid.k_negatives.size() * grid.restrict_category.size();
      if (n_cells == 1) {
        // A single-cell grid is the full study.
        const RandomStream master(g.seed);
        PatentPipelineConfig cfg{grid.cohort_years[0], grid.n_choosers[0],
                                 grid.k_negatives[0], grid.restrict_category[0]};
        const Dataset data = build_patent_dataset(corpus, cfg, master.derive(0));
        RcOptions study_opts = opts;
        study_opts.seed = master.derive(1000000).seed();
        const PatentStudyReport rep = run_patent_study(data, study_opts);
        std::cout << render_patent_study(rep);
        return rep.rc.converged ? 0 : kExitNonConvergence;
      }
      const auto cells = robustness_grid(corpus, grid, opts, g.seed);
      std::cout << render_robustness(cells);
      for (const auto& c : cells)
        if (c.ok && !c.rc.converged) return kExitNonConvergence;
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
