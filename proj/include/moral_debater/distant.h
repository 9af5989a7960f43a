#pragma once

#include <array>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "moral_debater/foundation.h"
#include "moral_debater/json_io.h"
#include "moral_debater/lexicon.h"

namespace moral_debater {

class DatasetEmptyError : public Error {
 public:
  using Error::Error;
};

// One argumentative text with aspects extracted upstream.
struct AspectText {
  std::string text;
  std::string topic;
  std::vector<std::string> aspects;
};

struct LabeledExample {
  std::string text;
  std::string topic;
  MoralSet morals;
  // Foundation -> aspect terms that produced it. Keys are a subset of morals.
  std::map<MoralFoundation, std::vector<std::string>> provenance;
};

using FoundationCounts = std::array<std::size_t, kFoundationCount>;

// Per-topic summary: for each topic, the share of label occurrences
// per foundation in percent.
struct DistributionReport {
  std::vector<std::string> topics;  // sorted
  std::map<std::string, FoundationCounts> counts;
  std::map<std::string, std::array<double, kFoundationCount>> percentages;
};

struct DistantDataset {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::set<std::string> train_topics;
  std::set<std::string> validation_topics;
  DistributionReport report;
};

// Union of the map entries for the aspects; unmapped aspects add nothing.
MoralSet distant_label(std::span<const std::string> aspects, const AspectMoralMap& map);

LabeledExample label_example(const AspectText& input, const AspectMoralMap& map);

FoundationCounts foundation_counts(std::span<const LabeledExample> examples);

// Downsamples so every foundation occurs equally often. Multi-label examples
// count toward each of their labels. Examples are admitted greedily in input
// order while all their labels are below the target; if some foundation ends
// short, the target drops to the smallest achieved count and the pass repeats.
std::vector<LabeledExample> balance_examples(std::span<const LabeledExample> examples);

DistributionReport distribution_report(std::span<const LabeledExample> examples);

// Topics are compared lowercased and trimmed. Throws ValidationError when a
// validation topic is absent from the corpus and DatasetEmptyError when no
// text receives a label.
DistantDataset build_distant_dataset(std::span<const AspectText> corpus, const AspectMoralMap& map,
                                     const std::set<std::string>& validation_topics);

// JSON-lines records: {text, topic, aspects[]}. Extra fields are ignored.
std::vector<AspectText> read_aspect_corpus(std::istream& in);

Json to_json_record(const LabeledExample& e);
Json report_to_json(const DistributionReport& report);

}  // namespace moral_debater
