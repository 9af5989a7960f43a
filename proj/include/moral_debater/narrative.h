#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moral_debater/foundation.h"
#include "moral_debater/json_io.h"
#include "moral_debater/mining.h"

namespace moral_debater {

// Jaccard similarity of the token-trigram sets. Sequences shorter than three
// tokens contribute themselves as a single gram.
double trigram_jaccard(std::span<const std::string> a, std::span<const std::string> b);

// Greedy in input order: drops a unit whose similarity with any kept unit
// exceeds the threshold.
std::vector<ArgumentUnit> dedupe(std::span<const ArgumentUnit> units, double threshold);

struct ThemeCluster {
  std::string label;
  std::vector<ArgumentUnit> members;
  std::size_t representative = 0;  // index into members; always a claim
  double cohesion = 1.0;           // mean pairwise cosine; 1 for singletons

  const ArgumentUnit& representative_claim() const { return members.at(representative); }
};

struct ClusterOptions {
  std::size_t max_themes = 4;
  // Pairs at least this similar are merged even when the count is already
  // within max_themes.
  double merge_similarity = 0.5;
};

// Average-linkage agglomerative clustering over tf-idf cosine similarity of
// non-topic content terms. Claim-free clusters fold into their nearest
// claim-bearing cluster. Throws CompositionError when no unit is a claim.
std::vector<ThemeCluster> cluster_themes(std::span<const ArgumentUnit> units,
                                         std::span<const std::string> topic,
                                         const ClusterOptions& options = {});

struct ThemeParagraph {
  std::string label;
  std::string opening;
  std::string representative_claim_id;
  std::vector<ArgumentUnit> units;  // representative first

  std::string text() const;
};

struct UnitProvenance {
  SentenceId sentence_id = 0;
  std::string doc_id;
};

struct MoralArgument {
  std::string topic;
  Stance stance = Stance::kPro;
  std::optional<Framing> framing;          // nullopt when explicit morals were requested
  std::optional<MoralSet> target_morals;   // nullopt means uncontrolled
  std::string intro;
  std::vector<ThemeParagraph> themes;
  std::map<std::string, UnitProvenance> provenance;  // unit id -> origin
};

// Theme labels enumerated by an intro produced by assemble_argument.
std::vector<std::string> enumerated_themes(std::string_view intro);

// Throws CompositionError for an empty cluster list.
MoralArgument assemble_argument(std::span<const ThemeCluster> clusters, std::string_view topic,
                                Stance stance, std::optional<Framing> framing,
                                std::optional<MoralSet> target_morals);

// Intro, blank line, then paragraphs separated by blank lines.
std::string render_text(const MoralArgument& argument);

// Walks rendered text and returns the unit ids of its content sentences in
// order. Throws CompositionError when the text contains anything other than
// the intro, paragraph openings and verbatim unit sentences.
std::vector<std::string> trace_units(std::string_view rendered, const MoralArgument& argument);

// Narrative invariants: intro/paragraph theme agreement, nonempty
// paragraphs, provenance total over units, at most `max_themes` themes.
std::optional<std::string> check_argument(const MoralArgument& argument, std::size_t max_themes);

Json argument_to_json(const MoralArgument& argument);
MoralArgument argument_from_json(const Json& j);

}  // namespace moral_debater
