// moral-debater command-line entry point.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "moral_debater/distant.h"
#include "moral_debater/framing_report.h"
#include "moral_debater/index.h"
#include "moral_debater/metrics.h"
#include "moral_debater/pipeline.h"
#include "moral_debater/rank_stats.h"
#include "moral_debater/service.h"
#include "moral_debater/study.h"
#include "moral_debater/text_util.h"

#ifndef MORAL_DEBATER_DATA_DIR
#define MORAL_DEBATER_DATA_DIR "data"
#endif

namespace md = moral_debater;
namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string scorer_endpoint;
};

md::AppConfig resolve_config(const CommonOptions& opts) {
  const char* data_env = std::getenv("MD_DATA_DIR");
  auto config = md::default_app_config(data_env ? data_env : MORAL_DEBATER_DATA_DIR);
  if (!opts.config.empty()) config = md::load_app_config(opts.config, config);
  if (const char* env = std::getenv("MD_SCORER_ENDPOINT"); env && *env) {
    config.scorer_endpoint = env;
  }
  if (!opts.scorer_endpoint.empty()) config.scorer_endpoint = opts.scorer_endpoint;
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool scorer) {
  cmd->add_option("--config", opts.config, "JSON config file")->check(CLI::ExistingFile);
  if (scorer) {
    cmd->add_option("--scorer-endpoint", opts.scorer_endpoint,
                    "moral classifier service (overrides MD_SCORER_ENDPOINT)");
  }
}

void write_or_print(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
  } else {
    md::write_file(out, contents);
  }
}

std::unique_ptr<md::Generator> make_generator(const md::AppConfig& config,
                                              const std::string& index_dir) {
  auto index = std::make_shared<const md::SentenceIndex>(md::SentenceIndex::load(index_dir));
  return std::make_unique<md::Generator>(index, md::make_scorer(config), md::load_weights(config),
                                         config.pipeline);
}

std::vector<std::string> read_topics(const std::string& path) {
  std::vector<std::string> topics;
  const auto text = md::read_file(path);
  for (auto line : md::lines_of(text)) {
    const auto t = md::trim(line);
    if (t.empty() || t.front() == '#') continue;
    topics.emplace_back(t);
  }
  return topics;
}

int run_ingest(const CommonOptions& common, const std::string& corpus, const std::string& out) {
  const auto config = resolve_config(common);
  std::ifstream in(corpus);
  if (!in) throw md::Error("cannot open corpus " + corpus);
  const auto docs = md::read_corpus_jsonl(in);
  const auto index = md::build_index(docs, config.pipeline, md::load_marker_lexicons(config));
  index.save(out);
  const auto& st = index.stats();
  std::cerr << "indexed " << st.sentence_count << " sentences from " << st.document_count
            << " documents (" << st.excluded_by_length << " excluded by length)\n";
  return 0;
}

int run_build_dataset(const CommonOptions& common, const std::string& corpus,
                      const std::string& out, const std::vector<std::string>& validation) {
  const auto config = resolve_config(common);
  std::ifstream in(corpus);
  if (!in) throw md::Error("cannot open corpus " + corpus);
  const auto texts = md::read_aspect_corpus(in);
  const auto map = md::load_aspect_map(md::read_file(config.aspect_map));
  const std::set<std::string> topics(validation.begin(), validation.end());
  const auto dataset = md::build_distant_dataset(texts, map, topics);
  auto dump = [](const std::vector<md::LabeledExample>& xs) {
    std::string s;
    for (const auto& x : xs) s += md::to_json_record(x).dump() + '\n';
    return s;
  };
  const fs::path dir(out);
  md::write_file(dir / "train.jsonl", dump(dataset.train));
  md::write_file(dir / "validation.jsonl", dump(dataset.validation));
  md::write_file(dir / "report.json", md::report_to_json(dataset.report).dump(2) + '\n');
  std::cerr << "train " << dataset.train.size() << ", validation " << dataset.validation.size()
            << " examples\n";
  return 0;
}

int run_generate(const CommonOptions& common, const std::string& index_dir,
                 md::GenerationRequest request, const std::string& out) {
  const auto config = resolve_config(common);
  request.validate();
  const auto generator = make_generator(config, index_dir);
  const auto result = generator->generate(request);
  write_or_print(out, md::result_to_json(result, true).dump(2) + '\n');
  if (!result.argument) {
    std::cerr << "error: " << result.failure << '\n';
    return 1;
  }
  return 0;
}

int run_batch(const CommonOptions& common, const std::string& index_dir,
              const std::string& topics_file, const std::string& out) {
  const auto config = resolve_config(common);
  const auto generator = make_generator(config, index_dir);
  const fs::path dir(out);
  fs::create_directories(dir);
  md::Json entries = md::Json::array();
  std::size_t ok = 0, failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& topic : read_topics(topics_file)) {
    for (auto stance : {md::Stance::kPro, md::Stance::kCon}) {
      for (auto framing : md::kAllFramings) {
        md::GenerationRequest request;
        request.topic = topic;
        request.stance = stance;
        request.framing = framing;
        const auto result = generator->generate(request);
        const std::string file = md::topic_slug(topic) + "__" + std::string(md::to_string(stance)) +
                                 "__" + std::string(md::to_string(framing)) + ".json";
        md::Json entry = {{"topic", topic},
                          {"stance", md::to_string(stance)},
                          {"framing", md::to_string(framing)}};
        if (result.argument) {
          md::write_file(dir / file, md::result_to_json(result, false).dump(2) + '\n');
          entry["status"] = "ok";
          entry["file"] = file;
          ++ok;
        } else {
          entry["status"] = "insufficient_material";
          entry["reason"] = result.failure;
          std::cerr << "warning: " << topic << " / " << md::to_string(stance) << " / "
                    << md::to_string(framing) << ": " << result.failure << '\n';
          ++failed;
        }
        entries.push_back(std::move(entry));
      }
    }
  }
  const md::Json manifest = {
      {"format", "moral-debater-batch"}, {"version", 1}, {"arguments", entries}};
  md::write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << ok << " arguments written, " << failed << " failed, " << secs << " s\n";
  return failed == 0 ? 0 : 1;
}

// Gold file: JSON lines {text, morals[]}. Predictions aggregate per-sentence
// scorer output at the configured moral threshold.
int run_evaluate(const CommonOptions& common, const std::string& gold_file,
                 const std::string& arguments_dir, const std::string& out) {
  const auto config = resolve_config(common);
  const auto scorer = md::make_scorer(config);
  std::string report_text;
  md::Json report = md::Json::object();
  const fs::path out_dir(out);

  if (!gold_file.empty()) {
    std::ifstream in(gold_file);
    if (!in) throw md::Error("cannot open " + gold_file);
    std::vector<md::MoralSet> gold, pred;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (md::trim(line).empty()) continue;
      const auto j = md::Json::parse(line);
      gold.push_back(j.at("morals").get<md::MoralSet>());
      md::Document doc{std::to_string(n), "", j.at("text").get<std::string>(), std::nullopt};
      std::vector<md::MoralProfile> profiles;
      for (const auto& s : md::segment_and_tokenize(doc)) profiles.push_back(scorer->score(s));
      pred.push_back(md::aggregate_text_morals(profiles, config.pipeline.moral_confidence_threshold));
    }
    const auto prf = md::multilabel_prf(gold, pred);
    report_text += md::format_prf_table(prf);
    md::Json per = md::Json::object();
    for (auto f : md::kAllFoundations) {
      const auto& v = prf.per_foundation[md::index_of(f)];
      per[std::string(md::to_string(f))] = {
          {"precision", v.precision}, {"recall", v.recall}, {"f1", v.f1}};
    }
    report["labels"] = {{"examples", prf.examples},
                        {"per_foundation", per},
                        {"macro",
                         {{"precision", prf.macro.precision},
                          {"recall", prf.macro.recall},
                          {"f1", prf.macro.f1}}}};
    if (!out.empty()) md::write_file(out_dir / "metrics.csv", md::format_prf_csv(prf));
  }

  if (!arguments_dir.empty()) {
    const auto manifest = md::Json::parse(md::read_file(fs::path(arguments_dir) / "manifest.json"));
    std::vector<md::MoralArgument> args;
    for (const auto& entry : manifest.at("arguments")) {
      if (entry.at("status") != "ok") continue;
      const auto doc = md::Json::parse(
          md::read_file(fs::path(arguments_dir) / entry.at("file").get<std::string>()));
      args.push_back(md::argument_from_json(doc.at("argument")));
    }
    const auto rows = md::framing_moral_distribution(args, *scorer);
    if (!report_text.empty()) report_text += '\n';
    report_text += md::format_distribution_table(rows);
    md::Json dist = md::Json::object();
    for (const auto& [k, row] : rows) dist[k] = row;
    report["framing_distribution"] = dist;
  }
  if (report.empty()) throw md::ValidationError("evaluate needs --gold and/or --arguments");

  if (out.empty()) {
    std::cout << report_text;
  } else {
    md::write_file(out_dir / "report.json", report.dump(2) + '\n');
    md::write_file(out_dir / "report.txt", report_text);
    std::cout << report_text;
  }
  return 0;
}

int run_analyze(const std::string& store_dir, const std::string& args_dir,
                const std::string& records_file, bool by_ideology, bool by_relation,
                const std::string& out) {
  std::vector<md::RankingRecord> records;
  if (!records_file.empty()) {
    std::ifstream in(records_file);
    if (!in) throw md::Error("cannot open " + records_file);
    records = md::read_exported_records(in);
  } else {
    if (args_dir.empty()) throw md::ValidationError("--store needs --arguments");
    md::StudyStore store(md::load_study_items(args_dir), store_dir);
    records = store.records();
  }
  const auto stats = md::rank_stats(records, by_ideology, by_relation);
  std::cout << md::format_rank_table(stats);
  if (!out.empty()) {
    const fs::path dir(out);
    md::write_file(dir / "rank_stats.json", md::rank_stats_to_json(stats).dump(2) + '\n');
    md::write_file(dir / "rank_stats.csv", md::rank_stats_csv(stats));
  }
  return 0;
}

int run_serve(const CommonOptions& common, const std::string& index_dir,
              const std::string& args_dir, const std::string& store_dir,
              const std::string& static_dir, const std::string& host, int port) {
  const auto config = resolve_config(common);
  std::shared_ptr<const md::Generator> generator;
  if (!index_dir.empty()) generator = make_generator(config, index_dir);
  std::shared_ptr<md::StudyStore> study;
  if (!args_dir.empty()) {
    study = std::make_shared<md::StudyStore>(md::load_study_items(args_dir), store_dir);
  }
  if (!generator && !study) throw md::ValidationError("serve needs --index and/or --arguments");
  md::Service service(generator, study);
  std::optional<fs::path> static_path;
  if (!static_dir.empty()) static_path = static_dir;
  const int bound = service.start(host, port, static_path);
  std::cerr << "listening on http://" << host << ":" << bound << '\n';
  service.wait();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morally framed argument generation, datasets and study tooling"};
  app.require_subcommand(1);
  CommonOptions common;

  auto* ingest = app.add_subcommand("ingest", "Build a sentence index from a JSON-lines corpus");
  std::string corpus, out, index_dir;
  add_common(ingest, common, false);
  ingest->add_option("--corpus", corpus, "corpus JSON lines")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", out, "index directory")->required();

  auto* dataset = app.add_subcommand("build-dataset", "Distant-supervision dataset from aspects");
  std::vector<std::string> validation_topics = {"cloning", "school uniforms"};
  add_common(dataset, common, false);
  dataset->add_option("--corpus", corpus, "aspect corpus JSON lines")
      ->required()
      ->check(CLI::ExistingFile);
  dataset->add_option("--out", out, "output directory")->required();
  dataset->add_option("--validation-topic", validation_topics, "held-out topics")
      ->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Generate one argument");
  std::string topic, stance_label, framing_label, morals_label;
  add_common(generate, common, true);
  generate->add_option("--index", index_dir, "index directory")->required();
  generate->add_option("--topic", topic)->required();
  generate->add_option("--stance", stance_label)->required()->check(CLI::IsMember({"pro", "con"}));
  auto* framing_opt = generate->add_option("--framing", framing_label)
                          ->check(CLI::IsMember({"individualizing", "binding", "uncontrolled"}));
  auto* morals_opt =
      generate->add_option("--morals", morals_label, "comma-separated foundations");
  framing_opt->excludes(morals_opt);
  morals_opt->excludes(framing_opt);
  generate->add_option("--out", out, "output file (default stdout)");

  auto* batch = app.add_subcommand("batch-generate", "Topics x stances x framings grid");
  std::string topics_file;
  add_common(batch, common, true);
  batch->add_option("--index", index_dir)->required();
  batch->add_option("--topics", topics_file, "one topic per line")
      ->required()
      ->check(CLI::ExistingFile);
  batch->add_option("--out", out, "output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Metrics reports");
  std::string gold_file, arguments_dir;
  add_common(evaluate, common, true);
  evaluate->add_option("--gold", gold_file, "hand-labeled JSON lines {text, morals}")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--arguments", arguments_dir, "batch-generate output directory")
      ->check(CLI::ExistingDirectory);
  evaluate->add_option("--out", out, "report directory");

  auto* analyze = app.add_subcommand("analyze-study", "Rank statistics over study records");
  std::string store_dir = "study-store", records_file;
  bool by_ideology = false, by_relation = false;
  auto* store_opt = analyze->add_option("--store", store_dir, "study store directory");
  auto* records_opt = analyze->add_option("--records", records_file, "exported JSON lines")
                          ->check(CLI::ExistingFile);
  store_opt->excludes(records_opt);
  analyze->add_option("--arguments", arguments_dir, "batch directory the study was run on");
  analyze->add_flag("--by-ideology", by_ideology);
  analyze->add_flag("--by-relation", by_relation);
  analyze->add_option("--out", out, "report directory");

  auto* serve = app.add_subcommand("serve", "HTTP API for generation and the study");
  std::string static_dir, host = "127.0.0.1";
  int port = 8080;
  add_common(serve, common, true);
  serve->add_option("--index", index_dir);
  serve->add_option("--arguments", arguments_dir, "batch directory with the study arguments");
  serve->add_option("--store", store_dir, "study store directory")->capture_default_str();
  serve->add_option("--static", static_dir, "built study UI to serve at /");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str()->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return run_ingest(common, corpus, out);
    if (*dataset) return run_build_dataset(common, corpus, out, validation_topics);
    if (*generate) {
      md::GenerationRequest request;
      request.topic = topic;
      request.stance = *md::parse_stance(stance_label);
      if (!framing_label.empty()) request.framing = md::parse_framing(framing_label);
      if (!morals_label.empty()) {
        try {
          request.morals = md::parse_moral_set(morals_label);
        } catch (const md::ValidationError& e) {
          std::cerr << "--morals: " << e.what() << '\n';
          return 2;
        }
      }
      return run_generate(common, index_dir, request, out);
    }
    if (*batch) return run_batch(common, index_dir, topics_file, out);
    if (*evaluate) return run_evaluate(common, gold_file, arguments_dir, out);
    if (*analyze) {
      return run_analyze(*records_opt ? "" : store_dir, arguments_dir, records_file, by_ideology,
                         by_relation, out);
    }
    if (*serve) {
      return run_serve(common, index_dir, arguments_dir, store_dir, static_dir, host, port);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
