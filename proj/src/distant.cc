#include "moral_debater/distant.h"

#include <algorithm>
#include <numeric>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

std::string normalize_topic(std::string_view topic) { return to_lower(trim(topic)); }

}  // namespace

MoralSet distant_label(std::span<const std::string> aspects, const AspectMoralMap& map) {
  MoralSet out;
  for (const auto& a : aspects) out |= map.lookup(a);
  return out;
}

LabeledExample label_example(const AspectText& input, const AspectMoralMap& map) {
  LabeledExample e;
  e.text = input.text;
  e.topic = normalize_topic(input.topic);
  for (const auto& aspect : input.aspects) {
    const auto morals = map.lookup(aspect);
    for (auto f : morals.members()) {
      auto& list = e.provenance[f];
      if (std::find(list.begin(), list.end(), aspect) == list.end()) list.push_back(aspect);
    }
    e.morals |= morals;
  }
  return e;
}

FoundationCounts foundation_counts(std::span<const LabeledExample> examples) {
  FoundationCounts counts{};
  for (const auto& e : examples) {
    for (auto f : e.morals.members()) ++counts[index_of(f)];
  }
  return counts;
}

std::vector<LabeledExample> balance_examples(std::span<const LabeledExample> examples) {
  const auto available = foundation_counts(examples);
  std::size_t target = *std::min_element(available.begin(), available.end());
  while (true) {
    std::vector<LabeledExample> kept;
    FoundationCounts counts{};
    for (const auto& e : examples) {
      if (e.morals.empty()) continue;
      const auto members = e.morals.members();
      const bool fits = std::all_of(members.begin(), members.end(), [&](MoralFoundation f) {
        return counts[index_of(f)] < target;
      });
      if (!fits) continue;
      for (auto f : members) ++counts[index_of(f)];
      kept.push_back(e);
    }
    const auto lowest = *std::min_element(counts.begin(), counts.end());
    if (lowest == target) return kept;
    target = lowest;
  }
}

DistributionReport distribution_report(std::span<const LabeledExample> examples) {
  DistributionReport report;
  for (const auto& e : examples) {
    auto& c = report.counts[e.topic];
    for (auto f : e.morals.members()) ++c[index_of(f)];
  }
  for (const auto& [topic, c] : report.counts) {
    report.topics.push_back(topic);
    const double total = static_cast<double>(std::accumulate(c.begin(), c.end(), std::size_t{0}));
    auto& pct = report.percentages[topic];
    for (std::size_t f = 0; f < kFoundationCount; ++f) {
      pct[f] = total > 0 ? 100.0 * static_cast<double>(c[f]) / total : 0.0;
    }
  }
  return report;
}

DistantDataset build_distant_dataset(std::span<const AspectText> corpus, const AspectMoralMap& map,
                                     const std::set<std::string>& validation_topics) {
  std::set<std::string> corpus_topics;
  for (const auto& t : corpus) corpus_topics.insert(normalize_topic(t.topic));
  std::set<std::string> held_out;
  for (const auto& t : validation_topics) {
    const auto norm = normalize_topic(t);
    if (!corpus_topics.count(norm)) {
      throw ValidationError("validation topic '" + t + "' does not occur in the corpus");
    }
    held_out.insert(norm);
  }

  std::vector<LabeledExample> train;
  DistantDataset ds;
  for (const auto& input : corpus) {
    auto e = label_example(input, map);
    if (e.morals.empty()) continue;
    if (held_out.count(e.topic)) {
      ds.validation.push_back(std::move(e));
    } else {
      train.push_back(std::move(e));
    }
  }
  if (train.empty() && ds.validation.empty()) {
    throw DatasetEmptyError("no text received a moral label");
  }
  ds.train = balance_examples(train);
  for (const auto& e : ds.train) ds.train_topics.insert(e.topic);
  for (const auto& e : ds.validation) ds.validation_topics.insert(e.topic);

  std::vector<LabeledExample> all = ds.train;
  all.insert(all.end(), ds.validation.begin(), ds.validation.end());
  ds.report = distribution_report(all);
  return ds;
}

std::vector<AspectText> read_aspect_corpus(std::istream& in) {
  std::vector<AspectText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = Json::parse(line);
      AspectText t;
      t.text = j.at("text").get<std::string>();
      t.topic = j.at("topic").get<std::string>();
      t.aspects = j.value("aspects", std::vector<std::string>{});
      out.push_back(std::move(t));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

Json to_json_record(const LabeledExample& e) {
  Json prov = Json::object();
  for (const auto& [f, aspects] : e.provenance) prov[std::string(to_string(f))] = aspects;
  return {{"text", e.text}, {"topic", e.topic}, {"morals", e.morals}, {"provenance", prov}};
}

Json report_to_json(const DistributionReport& report) {
  Json topics = Json::array();
  for (const auto& topic : report.topics) {
    Json pct = Json::object();
    Json counts = Json::object();
    for (auto f : kAllFoundations) {
      pct[std::string(to_string(f))] = report.percentages.at(topic)[index_of(f)];
      counts[std::string(to_string(f))] = report.counts.at(topic)[index_of(f)];
    }
    topics.push_back({{"topic", topic}, {"percentages", pct}, {"counts", counts}});
  }
  Json foundations = Json::array();
  for (auto f : kAllFoundations) foundations.push_back(std::string(to_string(f)));
  return {{"foundations", foundations}, {"topics", topics}};
}

}  // namespace moral_debater
