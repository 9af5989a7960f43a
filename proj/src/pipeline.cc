#include "moral_debater/pipeline.h"

#include <chrono>

#include "moral_debater/retrieval.h"
#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

AppConfig default_app_config(const std::filesystem::path& data_dir) {
  AppConfig c;
  const auto lex = data_dir / "lexicons";
  c.moral_lexicon = lex / "moral_lexicon.csv";
  c.sentiment_markers = lex / "sentiment.txt";
  c.causality_markers = lex / "causality.txt";
  c.evidence_cues = lex / "evidence_cues.txt";
  c.weights = lex / "weights.ini";
  c.aspect_map = lex / "aspect_map.tsv";
  return c;
}

AppConfig load_app_config(const std::filesystem::path& file, AppConfig base) {
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const Json::parse_error& e) {
    throw ValidationError("config " + file.string() + ": " + e.what());
  }
  const auto dir = file.parent_path();
  for (const auto& [key, value] : j.items()) {
    if (key == "pipeline") {
      Json merged = base.pipeline;
      merged.merge_patch(value);
      base.pipeline = merged.get<PipelineConfig>();
    } else if (key == "resources") {
      for (const auto& [rk, rv] : value.items()) {
        const auto path = resolve(dir, rv.get<std::string>());
        if (rk == "moral_lexicon") base.moral_lexicon = path;
        else if (rk == "sentiment_markers") base.sentiment_markers = path;
        else if (rk == "causality_markers") base.causality_markers = path;
        else if (rk == "evidence_cues") base.evidence_cues = path;
        else if (rk == "weights") base.weights = path;
        else if (rk == "aspect_map") base.aspect_map = path;
        else throw ValidationError("config: unknown resource '" + rk + "'");
      }
    } else if (key == "scorer") {
      if (value.contains("endpoint")) base.scorer_endpoint = value.at("endpoint").get<std::string>();
      if (value.contains("fallback")) base.scorer_fallback = value.at("fallback").get<bool>();
    } else {
      throw ValidationError("config: unknown section '" + key + "'");
    }
  }
  base.pipeline.validate();
  return base;
}

MarkerLexicons load_marker_lexicons(const AppConfig& config) {
  MarkerLexicons lex;
  lex.sentiment = load_marker_lexicon(read_file(config.sentiment_markers));
  lex.causality = load_marker_lexicon(read_file(config.causality_markers));
  if (!config.evidence_cues.empty()) {
    lex.evidence_cues = load_marker_lexicon(read_file(config.evidence_cues));
  }
  return lex;
}

ArgumentWeights load_weights(const AppConfig& config) {
  if (config.weights.empty()) return default_argument_weights();
  auto w = load_argument_weights(read_file(config.weights));
  return w;
}

std::shared_ptr<const MoralLexicon> load_lexicon(const AppConfig& config) {
  return std::make_shared<const MoralLexicon>(load_moral_lexicon(read_file(config.moral_lexicon)));
}

std::shared_ptr<const MoralScorer> make_scorer(const AppConfig& config) {
  std::shared_ptr<const MoralScorer> lexicon;
  if (!config.scorer_endpoint || config.scorer_fallback) {
    lexicon = std::make_shared<LexiconScorer>(load_lexicon(config),
                                              config.pipeline.lexicon_normalization);
  }
  if (!config.scorer_endpoint) return lexicon;
  auto external = std::make_shared<ExternalScorer>(*config.scorer_endpoint);
  if (config.scorer_fallback) return std::make_shared<FallbackScorer>(external, lexicon);
  return external;
}

void GenerationRequest::validate() const {
  if (trim(topic).empty()) throw ValidationError("request needs a topic");
  if (framing && morals) {
    throw ValidationError("framing and an explicit moral set are mutually exclusive");
  }
  if (morals && morals->empty()) throw ValidationError("explicit moral set is empty");
}

std::optional<Framing> GenerationRequest::effective_framing() const {
  if (morals) return std::nullopt;
  return framing.value_or(Framing::kUncontrolled);
}

std::optional<MoralSet> GenerationRequest::target_morals() const {
  if (morals) return morals;
  return framing_to_morals(framing.value_or(Framing::kUncontrolled));
}

GenerationRequest generation_request_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("generation request must be an object");
  GenerationRequest r;
  try {
    r.topic = j.at("topic").get<std::string>();
    const auto stance = parse_stance(j.at("stance").get<std::string>());
    if (!stance) throw ValidationError("stance must be pro or con");
    r.stance = *stance;
    if (j.contains("framing") && !j.at("framing").is_null()) {
      r.framing = parse_framing(j.at("framing").get<std::string>());
      if (!r.framing) throw ValidationError("unknown framing");
    }
    if (j.contains("morals") && !j.at("morals").is_null()) r.morals = j.at("morals").get<MoralSet>();
    if (j.contains("overrides")) r.overrides = j.at("overrides");
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed generation request: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "topic" && key != "stance" && key != "framing" && key != "morals" &&
        key != "overrides") {
      throw ValidationError("unknown request field '" + key + "'");
    }
  }
  r.validate();
  return r;
}

Json result_to_json(const GenerationResult& result, bool include_timing) {
  Json j;
  if (result.argument) {
    j["status"] = "ok";
    j["argument"] = argument_to_json(*result.argument);
    j["text"] = render_text(*result.argument);
  } else {
    j["status"] = "insufficient_material";
    j["reason"] = result.failure;
  }
  j["counts"] = {{"retrieved", result.retrieved},
                 {"selected", result.selected},
                 {"after_dedupe", result.after_dedupe}};
  if (include_timing) {
    j["timing_ms"] = {{"retrieve", result.timing.retrieve_ms},
                      {"select", result.timing.select_ms},
                      {"compose", result.timing.compose_ms},
                      {"total", result.timing.total_ms}};
  }
  return j;
}

Generator::Generator(std::shared_ptr<const SentenceIndex> index,
                     std::shared_ptr<const MoralScorer> scorer, ArgumentWeights weights,
                     PipelineConfig config)
    : index_(std::move(index)),
      scorer_(std::move(scorer)),
      weights_(std::move(weights)),
      config_(config) {
  if (!index_ || !scorer_) throw ValidationError("generator needs an index and a scorer");
  config_.validate();
}

GenerationResult Generator::generate(const GenerationRequest& request) const {
  request.validate();
  PipelineConfig config = config_;
  if (!request.overrides.empty()) {
    Json merged = config;
    merged.merge_patch(request.overrides);
    config = merged.get<PipelineConfig>();
    config.validate();
  }

  GenerationResult result;
  const auto start = Clock::now();
  const auto queries = build_topic_queries(request.topic, config);
  const auto& topic = queries.front().topic;
  const auto sentences = retrieve_union(*index_, queries);
  result.retrieved = sentences.size();
  result.timing.retrieve_ms = ms_since(start);

  auto t = Clock::now();
  const auto target = request.target_morals();
  const auto units =
      select_units(sentences, topic, request.stance, target, *scorer_, config, weights_);
  result.selected = units.size();
  const auto kept = dedupe(units, config.dedupe_threshold);
  result.after_dedupe = kept.size();
  result.timing.select_ms = ms_since(t);

  t = Clock::now();
  if (kept.empty()) {
    result.failure = "insufficient material: no sentence passed selection";
  } else {
    try {
      const auto clusters = cluster_themes(kept, topic, ClusterOptions{config.max_themes});
      result.argument = assemble_argument(clusters, join(topic, " "), request.stance,
                                          request.effective_framing(), target);
    } catch (const CompositionError& e) {
      result.failure = std::string("insufficient material: ") + e.what();
    }
  }
  result.timing.compose_ms = ms_since(t);
  result.timing.total_ms = ms_since(start);
  return result;
}

std::string topic_slug(std::string_view topic) {
  return join(tokenize(topic), "-");
}

}  // namespace moral_debater
