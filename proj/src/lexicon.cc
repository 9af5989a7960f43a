#include "moral_debater/lexicon.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "moral_debater/corpus.h"
#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

bool is_comment_or_blank(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

MoralFoundation require_foundation(std::string_view label, std::size_t line) {
  auto f = parse_foundation(label);
  if (!f) {
    throw ValidationError("line " + std::to_string(line) + ": unknown moral foundation '" +
                          std::string(trim(label)) + "'");
  }
  return *f;
}

std::string format_weight(double w) {
  std::ostringstream out;
  out.precision(17);
  out << w;
  return out.str();
}

}  // namespace

void MoralLexicon::add(std::string_view word, MoralFoundation f, double weight) {
  auto it = entries_.find(word);
  if (it == entries_.end()) {
    Weights w{};
    w.fill(0.0);
    it = entries_.emplace(std::string(word), w).first;
  }
  auto& slot = it->second[index_of(f)];
  slot = std::max(slot, weight);
}

const MoralLexicon::Weights* MoralLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string MoralLexicon::to_csv() const {
  std::string out = "word,foundation,weight\n";
  for (const auto& [word, weights] : entries_) {
    for (auto f : kAllFoundations) {
      const double w = weights[index_of(f)];
      if (w <= 0.0) continue;
      out += word;
      out += ',';
      out += to_string(f);
      out += ',';
      out += format_weight(w);
      out += '\n';
    }
  }
  return out;
}

MoralLexicon load_moral_lexicon(std::string_view source) {
  MoralLexicon lexicon;
  const auto lines = lines_of(source);
  bool first_row = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_comment_or_blank(lines[i])) continue;
    const auto cols = split(trim(lines[i]), ',');
    if (first_row) {
      first_row = false;
      if (to_lower(trim(cols[0])) == "word" && cols.size() >= 2 &&
          to_lower(trim(cols[1])) == "foundation") {
        continue;
      }
    }
    if (cols.size() < 2 || cols.size() > 3) {
      throw ParseError("expected word,foundation[,weight]", line_no);
    }
    const auto word = to_lower(trim(cols[0]));
    if (word.empty() || has_whitespace(word)) {
      throw ParseError("word must be nonempty and contain no whitespace", line_no);
    }
    const auto foundation = require_foundation(cols[1], line_no);
    double weight = 1.0;
    if (cols.size() == 3 && !trim(cols[2]).empty()) {
      auto parsed = parse_double(cols[2]);
      if (!parsed) throw ParseError("weight is not a number", line_no);
      if (!(*parsed > 0.0 && *parsed <= 1.0)) {
        throw ParseError("weight must lie in (0,1]", line_no);
      }
      weight = *parsed;
    }
    lexicon.add(word, foundation, weight);
  }
  return lexicon;
}

void AspectMoralMap::add(std::string_view aspect, MoralSet morals) {
  if (morals.empty()) throw ValidationError("aspect '" + std::string(aspect) + "' maps to no moral");
  entries_[to_lower(trim(aspect))] |= morals;
}

MoralSet AspectMoralMap::lookup(std::string_view aspect) const {
  auto it = entries_.find(to_lower(trim(aspect)));
  return it == entries_.end() ? MoralSet{} : it->second;
}

std::string AspectMoralMap::to_tsv() const {
  std::string out;
  for (const auto& [aspect, morals] : entries_) {
    out += aspect;
    out += '\t';
    out += join(morals.labels(), ",");
    out += '\n';
  }
  return out;
}

AspectMoralMap load_aspect_map(std::string_view source) {
  AspectMoralMap map;
  const auto lines = lines_of(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_comment_or_blank(lines[i])) continue;
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError("expected aspect<TAB>foundation[,foundation...]", line_no);
    const auto aspect = trim(cols[0]);
    if (aspect.empty()) throw ParseError("empty aspect", line_no);
    MoralSet morals;
    for (auto label : split(cols[1], ',')) {
      if (trim(label).empty()) continue;
      morals.insert(require_foundation(label, line_no));
    }
    if (morals.empty()) throw ParseError("aspect lists no foundation", line_no);
    map.add(aspect, morals);
  }
  return map;
}

MarkerLexicon::MarkerLexicon(std::initializer_list<std::string_view> entries) {
  for (auto e : entries) add(e);
}

void MarkerLexicon::add(std::string_view phrase) {
  auto tokens = tokenize(phrase);
  if (tokens.empty()) return;
  auto& bucket = by_first_[tokens.front()];
  if (std::find(bucket.begin(), bucket.end(), tokens) != bucket.end()) return;
  bucket.push_back(std::move(tokens));
  // Longest entries first so match_at returns the longest match.
  std::stable_sort(bucket.begin(), bucket.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  ++size_;
}

std::size_t MarkerLexicon::match_at(std::span<const std::string> tokens, std::size_t pos) const {
  if (pos >= tokens.size()) return 0;
  auto it = by_first_.find(tokens[pos]);
  if (it == by_first_.end()) return 0;
  for (const auto& entry : it->second) {
    if (pos + entry.size() > tokens.size()) continue;
    if (std::equal(entry.begin(), entry.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos))) {
      return entry.size();
    }
  }
  return 0;
}

bool MarkerLexicon::contains(std::string_view token) const {
  auto it = by_first_.find(std::string(token));
  if (it == by_first_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [](const auto& e) { return e.size() == 1; });
}

MarkerLexicon load_marker_lexicon(std::string_view source) {
  MarkerLexicon lex;
  for (auto line : lines_of(source)) {
    if (is_comment_or_blank(line)) continue;
    lex.add(trim(line));
  }
  return lex;
}

MarkerLexicon default_evidence_cues() {
  return {"surveys", "analyses", "researches", "reports", "research", "survey"};
}

}  // namespace moral_debater
