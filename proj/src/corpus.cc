#include "moral_debater/corpus.h"

#include <algorithm>
#include <array>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

enum class CharClass { kWord, kJoiner, kTerminal, kSpace, kOther };

struct Decoded {
  CharClass cls;
  std::size_t len;  // bytes consumed
};

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Classifies the character starting at s[i].
Decoded classify(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    if (is_ascii_alnum(c)) return {CharClass::kWord, 1};
    if (c == '-' || c == '\'') return {CharClass::kJoiner, 1};
    if (c == '.' || c == '!' || c == '?') return {CharClass::kTerminal, 1};
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      return {CharClass::kSpace, 1};
    }
    return {CharClass::kOther, 1};
  }
  std::size_t len = 1;
  if ((c & 0xE0) == 0xC0) len = 2;
  else if ((c & 0xF0) == 0xE0) len = 3;
  else if ((c & 0xF8) == 0xF0) len = 4;
  len = std::min(len, s.size() - i);
  if (len == 2 && c == 0xC2) {
    const auto d = static_cast<unsigned char>(s[i + 1]);
    if (d == 0xA0) return {CharClass::kSpace, 2};                   // nbsp
    if (d == 0xAB || d == 0xBB || d == 0xBF || d == 0xA1) return {CharClass::kOther, 2};
  }
  if (len == 3 && c == 0xE2) {
    const auto d = static_cast<unsigned char>(s[i + 1]);
    const auto e = static_cast<unsigned char>(s[i + 2]);
    if (d == 0x80 && e == 0x99) return {CharClass::kJoiner, 3};     // right single quote
    if (d == 0x80 && e == 0xA6) return {CharClass::kTerminal, 3};   // ellipsis
    if (d == 0x80 || d == 0x81) return {CharClass::kOther, 3};
  }
  return {CharClass::kWord, len};
}

constexpr std::array<std::string_view, 18> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs",
    "e.g", "i.e", "u.s", "u.k", "u.n", "gen", "sen", "rep", "gov"};

bool is_abbreviation(std::string_view body, std::size_t dot_pos) {
  std::size_t start = dot_pos;
  while (start > 0) {
    const char c = body[start - 1];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '(' || c == '"') break;
    --start;
  }
  const std::string word = to_lower(body.substr(start, dot_pos - start));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace

std::uint32_t span_distance(TokenSpan a, TokenSpan b) {
  if (a.end <= b.begin) return b.begin - (a.end - 1);
  if (b.end <= a.begin) return a.begin - (b.end - 1);
  return 0;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::string pending;  // joiner bytes awaiting a following word character
  std::size_t i = 0;
  while (i < text.size()) {
    const auto d = classify(text, i);
    if (d.cls == CharClass::kWord) {
      if (!pending.empty()) {
        current += pending;
        pending.clear();
      }
      current += to_lower(text.substr(i, d.len));
    } else if (d.cls == CharClass::kJoiner && !current.empty() && pending.empty()) {
      pending = d.len == 1 ? std::string(1, text[i]) : std::string("'");
    } else {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      pending.clear();
    }
    i += d.len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view body) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    const auto piece = trim(body.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (i < body.size()) {
    const auto d = classify(body, i);
    if (d.cls != CharClass::kTerminal) {
      i += d.len;
      continue;
    }
    const std::size_t first_terminal = i;
    std::size_t j = i;
    while (j < body.size()) {
      const auto t = classify(body, j);
      if (t.cls != CharClass::kTerminal) break;
      j += t.len;
    }
    while (j < body.size() && is_closer(body[j])) ++j;
    const bool at_boundary = j >= body.size() || classify(body, j).cls == CharClass::kSpace;
    const bool single_dot = j - first_terminal == 1 && body[first_terminal] == '.';
    if (at_boundary && !(single_dot && is_abbreviation(body, first_terminal))) {
      emit(j);
    }
    i = j;
  }
  emit(body.size());
  return out;
}

std::vector<Sentence> segment_and_tokenize(const Document& document) {
  std::vector<Sentence> out;
  for (auto& text : split_sentences(document.body)) {
    auto tokens = tokenize(text);
    if (tokens.empty()) continue;
    Sentence s;
    s.id = static_cast<SentenceId>(out.size());
    s.doc_id = document.id;
    s.text = std::move(text);
    s.tokens = std::move(tokens);
    out.push_back(std::move(s));
  }
  return out;
}

MarkerAnnotation annotate_markers(std::span<const std::string> tokens,
                                  const MarkerLexicons& lexicons) {
  MarkerAnnotation out;
  const auto scan = [&](const MarkerLexicon& lex, std::vector<TokenSpan>& hits) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (const auto len = lex.match_at(tokens, i)) {
        hits.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + len)});
      }
    }
  };
  scan(lexicons.sentiment, out.sentiment);
  scan(lexicons.causality, out.causality);
  scan(lexicons.evidence_cues, out.evidence_cue);
  return out;
}

bool window_cooccurs(std::span<const TokenSpan> a, std::span<const TokenSpan> b,
                     std::uint32_t window_size) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (span_distance(x, y) < window_size) return true;
    }
  }
  return false;
}

bool window_cooccurs(std::span<const std::uint32_t> positions_a,
                     std::span<const std::uint32_t> positions_b,
                     std::uint32_t window_size) {
  for (auto a : positions_a) {
    for (auto b : positions_b) {
      const auto d = a > b ? a - b : b - a;
      if (d < window_size) return true;
    }
  }
  return false;
}

}  // namespace moral_debater
