#pragma once

#include <string>
#include <vector>

#include "netchoice/build_sequences.hpp"
#include "netchoice/choice_data.hpp"
#include "netchoice/fit_result.hpp"
#include "netchoice/mixing.hpp"
#include "netchoice/patents.hpp"

namespace netchoice {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Choice-sequence interchange: comma-separated, UTF-8, LF line endings, one
// row per alternative with header
//   chooser_id,situation_index,alternative_id,is_chosen,<characteristic...>.
// Writing then reading is the identity on all fields.
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

// Edge list: header source,target,order_key.
std::vector<EdgeRecord> read_edges_csv(const std::string& path);
void write_edges_csv(const std::vector<EdgeRecord>& edges, const std::string& path);

// Patent corpus: patents file (id,award_year,category,subcategory) and
// citations file (citing_id,cited_id).
PatentCorpus read_patent_corpus(const std::string& patents_path,
                                const std::string& citations_path);
void write_patent_corpus(const PatentCorpus& corpus, const std::string& patents_path,
                         const std::string& citations_path);

// Mixing-spec JSON:
//   {"coefficients":[{"name":"CReceived","family":"lognormal"},...],
//    "correlated":true}
MixingSpec parse_mixing_spec(const std::string& json_text);
MixingSpec load_mixing_spec(const std::string& path);
std::string mixing_spec_to_json(const MixingSpec& spec);

// Theta JSON: {"means":[...],"scales":[...],"corr_factors":[...]}.
ThetaVector parse_theta(const std::string& json_text);
ThetaVector load_theta(const std::string& path);
std::string theta_to_json(const ThetaVector& theta);

// Deterministic FitResult JSON (fixed key order, shortest float encoding).
std::string fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const std::string& json_text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace netchoice
