#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "moral_debater/foundation.h"
#include "moral_debater/index.h"
#include "moral_debater/json_io.h"
#include "moral_debater/mining.h"
#include "moral_debater/narrative.h"
#include "moral_debater/scorer.h"

namespace moral_debater {

// Resource locations plus pipeline parameters. Relative paths in a config
// file resolve against the file's directory.
struct AppConfig {
  PipelineConfig pipeline;
  std::filesystem::path moral_lexicon;
  std::filesystem::path sentiment_markers;
  std::filesystem::path causality_markers;
  std::filesystem::path evidence_cues;  // empty: built-in cue list
  std::filesystem::path weights;        // empty: built-in weights, no polarity
  std::filesystem::path aspect_map;
  std::optional<std::string> scorer_endpoint;
  bool scorer_fallback = false;  // fall back to the lexicon on transport errors
};

// Bundled resources under `data_dir` (data/lexicons/...).
AppConfig default_app_config(const std::filesystem::path& data_dir);
// JSON document {"pipeline": {...}, "resources": {...}, "scorer": {...}};
// missing entries keep the values of `base`.
AppConfig load_app_config(const std::filesystem::path& file, AppConfig base);

MarkerLexicons load_marker_lexicons(const AppConfig& config);
ArgumentWeights load_weights(const AppConfig& config);
std::shared_ptr<const MoralLexicon> load_lexicon(const AppConfig& config);
// Lexicon scorer, or the external scorer when an endpoint is configured
// (wrapped in a lexicon fallback when scorer_fallback is set).
std::shared_ptr<const MoralScorer> make_scorer(const AppConfig& config);

struct GenerationRequest {
  std::string topic;
  Stance stance = Stance::kPro;
  std::optional<Framing> framing;
  std::optional<MoralSet> morals;
  Json overrides = Json::object();  // PipelineConfig fields

  // Throws ValidationError when both framing and morals are set, the topic
  // is blank, or an explicit moral set is empty.
  void validate() const;
  // Uncontrolled framing when neither framing nor morals is given.
  std::optional<Framing> effective_framing() const;
  std::optional<MoralSet> target_morals() const;
};

GenerationRequest generation_request_from_json(const Json& j);

struct GenerationTiming {
  double retrieve_ms = 0.0;
  double select_ms = 0.0;
  double compose_ms = 0.0;
  double total_ms = 0.0;
};

struct GenerationResult {
  std::optional<MoralArgument> argument;
  std::string failure;  // set when argument is absent
  std::size_t retrieved = 0;
  std::size_t selected = 0;
  std::size_t after_dedupe = 0;
  GenerationTiming timing;
};

// Structured response. Timing is optional so that outputs can be compared
// byte for byte.
Json result_to_json(const GenerationResult& result, bool include_timing);

// Stateless after construction; generate() may run concurrently.
class Generator {
 public:
  Generator(std::shared_ptr<const SentenceIndex> index, std::shared_ptr<const MoralScorer> scorer,
            ArgumentWeights weights, PipelineConfig config);

  // Runs queries, selection, dedupe, clustering and assembly. A lack of
  // material is reported in the result rather than thrown.
  GenerationResult generate(const GenerationRequest& request) const;

  const PipelineConfig& config() const { return config_; }
  const SentenceIndex& index() const { return *index_; }
  const MoralScorer& scorer() const { return *scorer_; }

 private:
  std::shared_ptr<const SentenceIndex> index_;
  std::shared_ptr<const MoralScorer> scorer_;
  ArgumentWeights weights_;
  PipelineConfig config_;
};

// File-name friendly form of a topic: lowercase words joined by '-'.
std::string topic_slug(std::string_view topic);

}  // namespace moral_debater
