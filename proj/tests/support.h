#pragma once

// Helpers shared by the unit tests and the acceptance runner. The oracles
// here deliberately avoid the library's own matching code: marker positions
// are recomputed from the raw list files and queries are evaluated by a
// plain scan over every sentence.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"
#include "moral_debater/retrieval.h"

namespace md_test {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(MD_SOURCE_DIR); }
inline fs::path fixture_dir() { return source_dir() / "tests" / "fixtures"; }
inline fs::path data_dir() { return source_dir() / "data"; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// Fresh scratch directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("md_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

using Phrase = std::vector<std::string>;

// Marker list file: one phrase per line, '#' comments.
inline std::vector<Phrase> load_phrases(const fs::path& p) {
  std::vector<Phrase> out;
  for (auto& line : read_lines(p)) {
    if (line[0] == '#') continue;
    std::istringstream words(line);
    Phrase ph;
    for (std::string w; words >> w;) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      ph.push_back(w);
    }
    if (!ph.empty()) out.push_back(ph);
  }
  return out;
}

struct Hit {
  std::size_t begin;
  std::size_t end;
};

// Longest phrase starting at every position.
inline std::vector<Hit> phrase_hits(const std::vector<std::string>& tokens,
                                    const std::vector<Phrase>& phrases) {
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t best = 0;
    for (const auto& ph : phrases) {
      if (ph.size() <= best || i + ph.size() > tokens.size()) continue;
      if (std::equal(ph.begin(), ph.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        best = ph.size();
      }
    }
    if (best) hits.push_back({i, i + best});
  }
  return hits;
}

inline std::size_t gap(std::size_t pos, const Hit& h) {
  if (pos < h.begin) return h.begin - pos;
  if (pos >= h.end) return pos - (h.end - 1);
  return 0;
}

struct OracleLexicons {
  std::vector<Phrase> sentiment;
  std::vector<Phrase> causality;
  std::vector<Phrase> cues;
};

inline OracleLexicons bundled_oracle_lexicons() {
  const auto lex = data_dir() / "lexicons";
  return {load_phrases(lex / "sentiment.txt"), load_phrases(lex / "causality.txt"),
          load_phrases(lex / "evidence_cues.txt")};
}

// Minimum distance from any topic token position to any hit, or max if
// either side is empty.
inline std::size_t min_topic_distance(const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& topic,
                                      const std::vector<Hit>& hits) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (std::find(topic.begin(), topic.end(), tokens[i]) == topic.end()) continue;
    for (const auto& h : hits) best = std::min(best, gap(i, h));
  }
  return best;
}

inline bool oracle_matches(const std::vector<std::string>& tokens,
                           const moral_debater::QuerySpec& q, const OracleLexicons& lex) {
  using moral_debater::QueryKind;
  if (tokens.size() < q.min_len || tokens.size() > q.max_len) return false;
  for (const auto& t : q.topic) {
    if (std::find(tokens.begin(), tokens.end(), t) == tokens.end()) return false;
  }
  const auto near = [&](const std::vector<Phrase>& phrases) {
    return min_topic_distance(tokens, q.topic, phrase_hits(tokens, phrases)) < q.window_size;
  };
  switch (q.kind) {
    case QueryKind::kTopicOnly:
      return true;
    case QueryKind::kTopicCausality:
      return near(lex.causality);
    case QueryKind::kTopicCausalitySentiment:
      return near(lex.causality) && near(lex.sentiment);
    case QueryKind::kEvidenceCue:
      return !phrase_hits(tokens, lex.cues).empty();
  }
  return false;
}

inline std::set<moral_debater::SentenceId> oracle_retrieve(
    const std::vector<moral_debater::Sentence>& sentences, const moral_debater::QuerySpec& q,
    const OracleLexicons& lex) {
  std::set<moral_debater::SentenceId> out;
  for (const auto& s : sentences) {
    if (oracle_matches(s.tokens, q, lex)) out.insert(s.id);
  }
  return out;
}

}  // namespace md_test
