#include "netchoice/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace netchoice {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad numeric field: '" + s + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "chooser_id,situation_index,alternative_id,is_chosen";
  for (const auto& name : data.characteristic_names) out << ',' << name;
  out << '\n';
  for (const auto& seq : data.sequences) {
    for (std::size_t t = 0; t < seq.situations.size(); ++t) {
      const auto& sit = seq.situations[t];
      for (std::size_t a = 0; a < sit.alternatives.size(); ++a) {
        const auto& alt = sit.alternatives[a];
        out << seq.chooser_id << ',' << t << ',' << alt.id << ','
            << (static_cast<int>(a) == sit.chosen_index ? 1 : 0);
        for (double v : alt.covariates) out << ',' << format_double(v);
        out << '\n';
      }
    }
  }
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "chooser_id" || header[1] != "situation_index" ||
      header[2] != "alternative_id" || header[3] != "is_chosen")
    throw std::runtime_error("bad dataset header in " + path);

  Dataset data;
  data.characteristic_names.assign(header.begin() + 4, header.end());
  const std::size_t k = data.characteristic_names.size();

  // Preserve file order of choosers and situations.
  std::vector<std::string> chooser_order;
  std::map<std::string, std::map<int, ChoiceSituation>> grouped;
  std::map<std::string, std::map<int, int>> chosen_seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4 + k)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong field count");
    const std::string& chooser = cells[0];
    const int sit_idx = std::stoi(cells[1]);
    if (!grouped.count(chooser)) chooser_order.push_back(chooser);
    ChoiceSituation& sit = grouped[chooser][sit_idx];
    Alternative alt;
    alt.id = cells[2];
    alt.covariates.reserve(k);
    for (std::size_t c = 0; c < k; ++c) alt.covariates.push_back(parse_double(cells[4 + c]));
    if (cells[3] == "1") {
      sit.chosen_index = static_cast<int>(sit.alternatives.size());
      ++chosen_seen[chooser][sit_idx];
    } else if (cells[3] != "0") {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": is_chosen must be 0/1");
    }
    sit.alternatives.push_back(std::move(alt));
  }
  for (const auto& chooser : chooser_order) {
    ChoiceSequence seq;
    seq.chooser_id = chooser;
    for (auto& [idx, sit] : grouped[chooser]) {
      if (chosen_seen[chooser][idx] != 1)
        throw std::runtime_error("situation " + std::to_string(idx) + " of chooser " + chooser +
                                 " must have exactly one chosen alternative");
      seq.situations.push_back(std::move(sit));
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

std::vector<EdgeRecord> read_edges_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty edge file " + path);
  const auto header = split_csv_line(line);
  if (header.size() != 3 || header[0] != "source" || header[1] != "target" ||
      header[2] != "order_key")
    throw std::runtime_error("bad edge header in " + path);
  std::vector<EdgeRecord> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw std::runtime_error("bad edge row in " + path);
    edges.push_back({cells[0], cells[1], std::stoll(cells[2])});
  }
  return edges;
}

void write_edges_csv(const std::vector<EdgeRecord>& edges, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "source,target,order_key\n";
  for (const auto& e : edges) out << e.source << ',' << e.target << ',' << e.order_key << '\n';
}

PatentCorpus read_patent_corpus(const std::string& patents_path,
                                const std::string& citations_path) {
  PatentCorpus corpus;
  {
    std::ifstream in = open_input(patents_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty patents file");
    const auto header = split_csv_line(line);
    if (header.size() != 4 || header[0] != "id" || header[1] != "award_year" ||
        header[2] != "category" || header[3] != "subcategory")
      throw std::runtime_error("bad patents header in " + patents_path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 4) throw std::runtime_error("bad patents row in " + patents_path);
      corpus.patents.push_back({cells[0], std::stoi(cells[1]), cells[2], cells[3]});
    }
  }
  {
    std::ifstream in = open_input(citations_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty citations file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "citing_id" || header[1] != "cited_id")
      throw std::runtime_error("bad citations header in " + citations_path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 2) throw std::runtime_error("bad citations row in " + citations_path);
      corpus.citations.push_back({cells[0], cells[1]});
    }
  }
  return corpus;
}

void write_patent_corpus(const PatentCorpus& corpus, const std::string& patents_path,
                         const std::string& citations_path) {
  {
    std::ofstream out = open_output(patents_path);
    out << "id,award_year,category,subcategory\n";
    for (const auto& p : corpus.patents)
      out << p.id << ',' << p.award_year << ',' << p.category << ',' << p.subcategory << '\n';
  }
  {
    std::ofstream out = open_output(citations_path);
    out << "citing_id,cited_id\n";
    for (const auto& c : corpus.citations) out << c.citing << ',' << c.cited << '\n';
  }
}

MixingSpec parse_mixing_spec(const std::string& json_text) {
  const auto j = ordered_json::parse(json_text);
  MixingSpec spec;
  for (const auto& c : j.at("coefficients"))
    spec.coefficients.push_back(
        {c.at("name").get<std::string>(), family_from_string(c.at("family").get<std::string>())});
  spec.correlated = j.value("correlated", false);
  spec.check();
  return spec;
}

MixingSpec load_mixing_spec(const std::string& path) {
  return parse_mixing_spec(read_text_file(path));
}

std::string mixing_spec_to_json(const MixingSpec& spec) {
  ordered_json j;
  j["coefficients"] = ordered_json::array();
  for (const auto& c : spec.coefficients)
    j["coefficients"].push_back({{"name", c.name}, {"family", family_to_string(c.family)}});
  j["correlated"] = spec.correlated;
  return j.dump();
}

ThetaVector parse_theta(const std::string& json_text) {
  const auto j = ordered_json::parse(json_text);
  ThetaVector t;
  t.means = j.at("means").get<std::vector<double>>();
  if (j.contains("scales")) t.scales = j.at("scales").get<std::vector<double>>();
  if (j.contains("corr_factors"))
    t.corr_factors = j.at("corr_factors").get<std::vector<double>>();
  return t;
}

ThetaVector load_theta(const std::string& path) { return parse_theta(read_text_file(path)); }

std::string theta_to_json(const ThetaVector& theta) {
  ordered_json j;
  j["means"] = theta.means;
  j["scales"] = theta.scales;
  j["corr_factors"] = theta.corr_factors;
  return j.dump();
}

std::string fit_result_to_json(const FitResult& fit) {
  ordered_json j;
  j["model"] = fit.n_draws > 0 ? "rc" : "mnl";
  j["converged"] = fit.converged;
  j["message"] = fit.message;
  j["log_likelihood"] = fit.log_likelihood;
  j["n_iterations"] = fit.n_iterations;
  j["n_draws"] = fit.n_draws;
  j["n_observations"] = fit.n_observations;
  j["parameters"] = ordered_json::array();
  for (int i = 0; i < fit.n_parameters(); ++i) {
    ordered_json p;
    p["name"] = fit.param_names[i];
    p["characteristic"] =
        i < static_cast<int>(fit.characteristics.size()) ? fit.characteristics[i] : "";
    p["estimate"] = fit.estimates[i];
    p["std_error"] = fit.std_errors[i];
    p["p_value"] = fit.p_values[i];
    j["parameters"].push_back(std::move(p));
  }
  j["covariance"] = ordered_json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c)
      row.push_back(fit.covariance(r, c));
    j["covariance"].push_back(std::move(row));
  }
  if (fit.spec) j["spec"] = ordered_json::parse(mixing_spec_to_json(*fit.spec));
  if (fit.theta) {
    j["theta"] = ordered_json::parse(theta_to_json(*fit.theta));
    if (fit.spec && fit.spec->correlated) {
      ordered_json cors = ordered_json::array();
      for (const auto& c : implied_correlations(*fit.spec, *fit.theta))
        cors.push_back({{"i", c.coef_i + 1}, {"j", c.coef_j + 1}, {"value", c.value}});
      j["implied_correlations"] = std::move(cors);
    }
  }
  return j.dump(2) + "\n";
}

FitResult fit_result_from_json(const std::string& json_text) {
  const auto j = ordered_json::parse(json_text);
  FitResult fit;
  fit.converged = j.at("converged").get<bool>();
  fit.message = j.value("message", "");
  fit.log_likelihood = j.at("log_likelihood").get<double>();
  fit.n_iterations = j.at("n_iterations").get<int>();
  fit.n_draws = j.at("n_draws").get<int>();
  fit.n_observations = j.at("n_observations").get<std::size_t>();
  const auto& params = j.at("parameters");
  const int p = static_cast<int>(params.size());
  fit.estimates.resize(p);
  fit.std_errors.resize(p);
  fit.p_values.resize(p);
  for (int i = 0; i < p; ++i) {
    fit.param_names.push_back(params[i].at("name").get<std::string>());
    fit.characteristics.push_back(params[i].at("characteristic").get<std::string>());
    fit.estimates[i] = params[i].at("estimate").get<double>();
    fit.std_errors[i] = params[i].at("std_error").get<double>();
    fit.p_values[i] = params[i].at("p_value").get<double>();
  }
  const auto& cov = j.at("covariance");
  fit.covariance.resize(cov.size(), cov.size());
  for (std::size_t r = 0; r < cov.size(); ++r)
    for (std::size_t c = 0; c < cov[r].size(); ++c)
      fit.covariance(r, c) = cov[r][c].get<double>();
  if (j.contains("spec")) fit.spec = parse_mixing_spec(j.at("spec").dump());
  if (j.contains("theta")) fit.theta = parse_theta(j.at("theta").dump());
  return fit;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_output(path);
  out << content;
}

}  // namespace netchoice
