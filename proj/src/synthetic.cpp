#include "netchoice/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "netchoice/logit.hpp"

namespace netchoice {

std::vector<CovariateLaw> default_covariate_laws(int n_characteristics) {
  if (n_characteristics == 2) return {{-1.0, 1.0}, {0.0, 5.0}};
  return std::vector<CovariateLaw>(n_characteristics, CovariateLaw{0.0, 1.0});
}

namespace {

int uniform_in(RandomStream& s, int lo, int hi) {
  return lo + static_cast<int>(s.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

int sample_categorical(const Eigen::VectorXd& probs, RandomStream& s) {
  const double u = s.next_unit();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

std::string padded_id(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
  return buf;
}

}  // namespace

Dataset generate_network(const GenerateConfig& cfg, const MixingSpec& spec,
                         const ThetaVector& theta_true, const RandomStream& stream) {
  spec.check();
  theta_true.check_dimensions(spec);
  if (cfg.degree_min < 1 || cfg.degree_max < cfg.degree_min)
    throw std::invalid_argument("generate_network: bad degree range");
  if (cfg.altset_min < 1 || cfg.altset_max < cfg.altset_min)
    throw std::invalid_argument("generate_network: bad alternative-set range");
  const int k = spec.n_coefficients();
  const std::vector<CovariateLaw> laws =
      cfg.laws.empty() ? default_covariate_laws(k) : cfg.laws;
  if (static_cast<int>(laws.size()) != k)
    throw std::invalid_argument("generate_network: one covariate law per characteristic");

  Dataset data;
  for (int c = 0; c < k; ++c)
    data.characteristic_names.push_back(spec.coefficients[c].name.empty()
                                            ? "x" + std::to_string(c + 1)
                                            : spec.coefficients[c].name);

  const int id_width = static_cast<int>(std::to_string(cfg.n_nodes).size());
  data.sequences.reserve(cfg.n_nodes);
  for (int node = 0; node < cfg.n_nodes; ++node) {
    RandomStream ns = stream.derive(node);
    const Eigen::MatrixXd beta_row =
        transform_draws(spec, theta_true, base_draws_pseudo(spec, 1, ns.derive(0)));
    const Eigen::VectorXd beta = beta_row.row(0).transpose();

    ChoiceSequence seq;
    seq.chooser_id = padded_id("n", node, id_width);
    const int t_n = uniform_in(ns, cfg.degree_min, cfg.degree_max);
    for (int t = 0; t < t_n; ++t) {
      ChoiceSituation sit;
      const int j_n = uniform_in(ns, cfg.altset_min, cfg.altset_max);
      Eigen::MatrixXd x(j_n, k);
      for (int a = 0; a < j_n; ++a) {
        Alternative alt;
        alt.id = padded_id("a", a, 2);
        alt.covariates.resize(k);
        for (int c = 0; c < k; ++c) {
          const double u = ns.next_unit();
          alt.covariates[c] = laws[c].lo + (laws[c].hi - laws[c].lo) * u;
          x(a, c) = alt.covariates[c];
        }
        sit.alternatives.push_back(std::move(alt));
      }
      sit.chosen_index = sample_categorical(choice_prob(x, beta), ns);
      seq.situations.push_back(std::move(sit));
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

namespace {

MixingSpec synth_rc_spec() {
  MixingSpec s;
  s.coefficients = {{"x", Family::Normal}, {"y", Family::LogNormal}};
  s.correlated = false;
  return s;
}

MixingSpec synth_fixed_spec() {
  MixingSpec s;
  s.coefficients = {{"x", Family::Fixed}, {"y", Family::Fixed}};
  s.correlated = false;
  return s;
}

ParamSummary summarize_column(const std::string& name, double truth,
                              const Eigen::VectorXd& col) {
  ParamSummary p;
  p.name = name;
  p.truth = truth;
  p.mean = col.mean();
  std::vector<double> sorted(col.data(), col.data() + col.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  p.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  p.min = sorted.front();
  p.max = sorted.back();
  if (!std::isnan(truth)) p.bias = std::abs(truth - p.mean);
  double var = 0.0;
  for (double v : sorted) var += (v - p.mean) * (v - p.mean);
  p.se = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  return p;
}

// Row layout: network,estimator,converged[,name=est;se;p ...]. One row is
// appended per finished fit; rows found on startup are reused instead of
// refitting, so interrupted experiments resume.
struct LoggedFit {
  bool converged = false;
  Eigen::VectorXd est, se, p;
};

struct ResultsLog {
  std::map<std::pair<int, std::string>, LoggedFit> done;
  std::ofstream out;

  explicit ResultsLog(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string net, est, conv, cell;
      if (!std::getline(ss, net, ',') || !std::getline(ss, est, ',') ||
          !std::getline(ss, conv, ','))
        continue;
      LoggedFit f;
      f.converged = conv == "1";
      std::vector<double> e, s, p;
      while (std::getline(ss, cell, ',')) {
        const auto eq = cell.find('=');
        if (eq == std::string::npos) continue;
        std::istringstream vals(cell.substr(eq + 1));
        std::string v1, v2, v3;
        std::getline(vals, v1, ';');
        std::getline(vals, v2, ';');
        std::getline(vals, v3, ';');
        e.push_back(std::stod(v1));
        s.push_back(std::stod(v2));
        p.push_back(std::stod(v3));
      }
      f.est = Eigen::Map<Eigen::VectorXd>(e.data(), e.size());
      f.se = Eigen::Map<Eigen::VectorXd>(s.data(), s.size());
      f.p = Eigen::Map<Eigen::VectorXd>(p.data(), p.size());
      done[{std::stoi(net), est}] = std::move(f);
    }
    in.close();
    out.open(path, std::ios::app);
  }

  const LoggedFit* get(int net, const std::string& est) const {
    const auto it = done.find({net, est});
    return it == done.end() ? nullptr : &it->second;
  }

  void append(int net, const std::string& est, const FitResult& fit) {
    if (!out.is_open()) return;
    out << net << ',' << est << ',' << (fit.converged ? 1 : 0);
    for (int i = 0; i < fit.n_parameters(); ++i)
      out << ',' << fit.param_names[i] << '=' << fit.estimates[i] << ';' << fit.std_errors[i]
          << ';' << fit.p_values[i];
    out << '\n' << std::flush;
  }
};

}  // namespace

RecoveryResult run_recovery_experiment(int n_networks, int n_nodes,
                                       const MixingSpec& gen_spec,
                                       const ThetaVector& theta_true,
                                       const MixingSpec& fit_spec, Estimator estimator,
                                       const GenerateConfig& gen_cfg,
                                       const ExperimentOptions& opts) {
  if (n_networks < 1) throw std::invalid_argument("run_recovery_experiment: n_networks >= 1");
  RecoveryResult res;
  res.n_networks = n_networks;
  res.n_nodes = n_nodes;

  ResultsLog log(opts.results_path);
  const RandomStream master(opts.seed);
  GenerateConfig cfg = gen_cfg;
  cfg.n_nodes = n_nodes;

  const bool run_mnl = estimator != Estimator::Rc;
  const bool run_rc = estimator != Estimator::Mnl;
  std::vector<Eigen::VectorXd> mnl_est, mnl_se, mnl_p, rc_est, rc_se, rc_p;
  int n_random_flagged = 0, n_rc_converged = 0;

  const std::vector<std::string> rc_names = parameter_names(fit_spec);
  auto scale_flagged_random = [&](const Eigen::VectorXd& pvals) {
    for (std::size_t i = 0; i < rc_names.size(); ++i)
      if (rc_names[i].rfind("s_", 0) == 0 && pvals[i] <= 0.10) return true;
    return false;
  };

  for (int net = 0; net < n_networks; ++net) {
    const bool need_mnl = run_mnl && !log.get(net, "mnl");
    const bool need_rc = run_rc && !log.get(net, "rc");
    Dataset data;
    if (need_mnl || need_rc)
      data = generate_network(cfg, gen_spec, theta_true, master.derive(2 * net));
    bool ok = true;
    if (run_mnl) {
      LoggedFit row;
      if (const LoggedFit* logged = log.get(net, "mnl")) {
        row = *logged;
      } else {
        const FitResult fit = fit_mnl(data, opts.optim);
        log.append(net, "mnl", fit);
        row = {fit.converged, fit.estimates, fit.std_errors, fit.p_values};
      }
      if (row.converged) {
        mnl_est.push_back(row.est);
        mnl_se.push_back(row.se);
        mnl_p.push_back(row.p);
      } else {
        ok = false;
      }
    }
    if (run_rc) {
      LoggedFit row;
      if (const LoggedFit* logged = log.get(net, "rc")) {
        row = *logged;
      } else {
        RcOptions rc_opts;
        rc_opts.n_draws = opts.n_draws;
        rc_opts.seed = master.derive(2 * net + 1).seed();
        rc_opts.optim = opts.optim;
        const FitResult fit = fit_rc(data, fit_spec, rc_opts);
        log.append(net, "rc", fit);
        row = {fit.converged, fit.estimates, fit.std_errors, fit.p_values};
      }
      if (row.converged) {
        rc_est.push_back(row.est);
        rc_se.push_back(row.se);
        rc_p.push_back(row.p);
        ++n_rc_converged;
        if (scale_flagged_random(row.p)) ++n_random_flagged;
      } else {
        ok = false;
      }
    }
    if (!ok) res.excluded.push_back(net);
  }

  auto pack_runs = [](const std::vector<Eigen::VectorXd>& est,
                      const std::vector<Eigen::VectorXd>& se,
                      const std::vector<Eigen::VectorXd>& pv,
                      const std::vector<std::string>& names,
                      const Eigen::VectorXd& truth) {
    EstimatorRuns runs;
    runs.param_names = names;
    const int n = static_cast<int>(est.size());
    const int p = n ? static_cast<int>(est[0].size()) : 0;
    runs.estimates.resize(n, p);
    runs.std_errors.resize(n, p);
    runs.p_values.resize(n, p);
    for (int i = 0; i < n; ++i) {
      runs.estimates.row(i) = est[i].transpose();
      runs.std_errors.row(i) = se[i].transpose();
      runs.p_values.row(i) = pv[i].transpose();
    }
    for (int c = 0; c < p; ++c)
      runs.summary.push_back(summarize_column(
          names[c], c < truth.size() ? truth[c] : std::numeric_limits<double>::quiet_NaN(),
          runs.estimates.col(c)));
    return runs;
  };

  if (run_mnl && !mnl_est.empty()) {
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < mnl_est[0].size(); ++c)
      names.push_back("beta_" + std::to_string(c + 1));
    // Point estimates have a meaningful truth only under a deterministic
    // generating process.
    Eigen::VectorXd truth(0);
    if (gen_spec.all_fixed()) {
      truth.resize(gen_spec.n_coefficients());
      for (int c = 0; c < gen_spec.n_coefficients(); ++c) truth[c] = theta_true.means[c];
    }
    res.mnl = pack_runs(mnl_est, mnl_se, mnl_p, names, truth);
  }
  if (run_rc && !rc_est.empty()) {
    Eigen::VectorXd truth(0);
    if (gen_spec.coefficients.size() == fit_spec.coefficients.size()) {
      bool same = true;
      for (int c = 0; c < gen_spec.n_coefficients(); ++c)
        if (gen_spec.coefficients[c].family != fit_spec.coefficients[c].family) same = false;
      if (same && gen_spec.correlated == fit_spec.correlated) truth = theta_true.pack();
    }
    res.rc = pack_runs(rc_est, rc_se, rc_p, parameter_names(fit_spec), truth);
    res.misclassified_fraction =
        n_rc_converged > 0
            ? static_cast<double>(n_random_flagged) / static_cast<double>(n_rc_converged)
            : std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

ExperimentPreset experiment_preset(const std::string& table, bool desk) {
  ExperimentPreset p;
  p.name = table;
  const MixingSpec rc_spec = synth_rc_spec();
  const MixingSpec fixed_spec = synth_fixed_spec();
  ThetaVector rc_truth;
  rc_truth.means = {3.0, 0.0};
  rc_truth.scales = {2.0, 1.0};
  ThetaVector fixed_truth;
  fixed_truth.means = {-1.0, 3.0};

  if (table == "table1") {
    p.n_networks = desk ? 10 : 100;
    p.n_nodes = desk ? 200 : 1000;
    p.n_draws = desk ? 50 : 100;
    p.gen_spec = rc_spec;
    p.theta_true = rc_truth;
    p.fit_spec = rc_spec;
    p.estimator = Estimator::Rc;
  } else if (table == "table2") {
    p.n_networks = desk ? 10 : 1;
    p.n_nodes = 100;
    p.gen_spec = rc_spec;
    p.theta_true = rc_truth;
    p.fit_spec = rc_spec;
    p.estimator = Estimator::Mnl;
  } else if (table == "table3") {
    p.n_networks = desk ? 20 : 1;
    p.n_nodes = 100;
    p.n_draws = desk ? 50 : 100;
    p.gen_spec = fixed_spec;
    p.theta_true = fixed_truth;
    p.fit_spec = rc_spec;
    p.estimator = Estimator::Both;
  } else if (table == "table6") {
    p.n_networks = desk ? 10 : 50;
    p.n_nodes = 100;
    p.gen_spec = rc_spec;
    p.theta_true = rc_truth;
    p.fit_spec = rc_spec;
    p.estimator = Estimator::Mnl;
  } else if (table == "table7") {
    p.n_networks = desk ? 10 : 50;
    p.n_nodes = 100;
    p.n_draws = desk ? 50 : 100;
    p.gen_spec = fixed_spec;
    p.theta_true = fixed_truth;
    p.fit_spec = rc_spec;
    p.estimator = Estimator::Both;
  } else {
    throw std::invalid_argument("unknown experiment preset: " + table);
  }
  p.gen_cfg.n_nodes = p.n_nodes;
  return p;
}

std::string render_recovery_summary(const RecoveryResult& r) {
  std::ostringstream os;
  auto table = [&](const char* title, const EstimatorRuns& runs) {
    if (runs.summary.empty()) return;
    os << title << " (" << runs.estimates.rows() << " converged networks)\n";
    os << "Parameter   True Value   Mean       Median     Min        Max        Bias      "
          " Std. Error\n";
    for (const auto& s : runs.summary) {
      char line[256];
      auto cell = [](double v) {
        char b[32];
        if (std::isnan(v))
          std::snprintf(b, sizeof(b), "%9s", "-");
        else
          std::snprintf(b, sizeof(b), "%9.4f", v);
        return std::string(b);
      };
      std::snprintf(line, sizeof(line), "%-10s %s   %s  %s  %s  %s  %s  %s\n", s.name.c_str(),
                    cell(s.truth).c_str(), cell(s.mean).c_str(), cell(s.median).c_str(),
                    cell(s.min).c_str(), cell(s.max).c_str(), cell(s.bias).c_str(),
                    cell(s.se).c_str());
      os << line;
    }
  };
  table("MNL point estimates", r.mnl);
  table("RC distribution parameters", r.rc);
  if (!std::isnan(r.misclassified_fraction))
    os << "networks flagged as having random parameters: "
       << 100.0 * r.misclassified_fraction << "%\n";
  if (!r.excluded.empty()) {
    os << "excluded (non-converged) networks:";
    for (int i : r.excluded) os << ' ' << i;
    os << '\n';
  }
  return os.str();
}

}  // namespace netchoice
