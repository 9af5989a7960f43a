#include "moral_debater/text_util.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "moral_debater/foundation.h"

namespace moral_debater {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

namespace {

constexpr std::array<std::string_view, 96> kStopwords = {
    "a",       "about",  "after",  "all",    "also",   "an",     "and",     "any",
    "are",     "as",     "at",     "be",     "because", "been",  "before",  "being",
    "between", "both",   "but",    "by",     "can",    "could",  "did",     "do",
    "does",    "doing",  "down",   "during", "each",   "even",   "few",     "for",
    "from",    "further", "had",   "has",    "have",   "having", "he",      "her",
    "here",    "him",    "his",    "how",    "i",      "if",     "in",      "into",
    "is",      "it",     "its",    "itself", "just",   "many",   "may",     "me",
    "might",   "more",   "most",   "much",   "must",   "my",     "no",      "nor",
    "not",     "now",    "of",     "on",     "once",   "only",   "or",      "other",
    "our",     "out",    "over",   "own",    "same",   "she",    "should",  "so",
    "some",    "such",   "than",   "that",   "the",    "their",  "them",    "then",
    "there",   "these",  "they",   "this",   "those",  "through", "to",     "too"};

constexpr std::array<std::string_view, 24> kMoreStopwords = {
    "under", "until", "up",   "very",  "was",   "we",    "were",  "what",
    "when",  "where", "which", "while", "who",  "whom",  "why",   "will",
    "with",  "would", "you",  "your",  "one",   "us",    "upon",  "via"};

}  // namespace

bool is_stopword(std::string_view token) {
  return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end() ||
         std::find(kMoreStopwords.begin(), kMoreStopwords.end(), token) != kMoreStopwords.end();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("short write to " + path.string());
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

}  // namespace moral_debater
