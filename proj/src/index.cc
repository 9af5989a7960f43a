#include "moral_debater/index.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "moral_debater/json_io.h"
#include "moral_debater/text_util.h"

namespace moral_debater {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPostingsMagic = "MDPS";
constexpr std::string_view kManifestFormat = "moral-debater-index";

}  // namespace

std::vector<Document> read_corpus_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text")) {
      throw ParseError("corpus record needs 'id' and 'text'", line_no);
    }
    Document d;
    d.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    d.body = j.at("text").get<std::string>();
    if (j.contains("title") && j.at("title").is_string()) d.title = j.at("title").get<std::string>();
    if (j.contains("topic") && j.at("topic").is_string()) d.topic = j.at("topic").get<std::string>();
    docs.push_back(std::move(d));
  }
  return docs;
}

std::span<const SentenceId> SentenceIndex::postings(std::string_view token) const {
  auto it = postings_.find(token);
  if (it == postings_.end()) return {};
  return it->second;
}

IndexBuilder::IndexBuilder(PipelineConfig config, MarkerLexicons lexicons)
    : lexicons_(std::move(lexicons)) {
  config.validate();
  index_.config_ = config;
}

void IndexBuilder::add(const Document& document) {
  if (document.id.empty()) throw IngestError("document with empty id");
  auto pos = std::lower_bound(seen_ids_.begin(), seen_ids_.end(), document.id);
  if (pos != seen_ids_.end() && *pos == document.id) {
    throw IngestError("duplicate document id '" + document.id + "'");
  }
  seen_ids_.insert(pos, document.id);
  ++index_.stats_.document_count;

  const auto& cfg = index_.config_;
  for (auto& sentence : segment_and_tokenize(document)) {
    const auto n = sentence.tokens.size();
    if (n < cfg.min_len || n > cfg.max_len) {
      ++index_.stats_.excluded_by_length;
      continue;
    }
    sentence.id = static_cast<SentenceId>(index_.sentences_.size());
    sentence.markers = annotate_markers(sentence.tokens, lexicons_);
    for (const auto& tok : sentence.tokens) {
      auto& list = index_.postings_[tok];
      if (list.empty() || list.back() != sentence.id) list.push_back(sentence.id);
    }
    index_.stats_.token_count += n;
    index_.sentences_.push_back(std::move(sentence));
  }
  index_.stats_.sentence_count = index_.sentences_.size();
}

SentenceIndex IndexBuilder::finish() && { return std::move(index_); }

SentenceIndex build_index(std::span<const Document> documents, const PipelineConfig& config,
                          const MarkerLexicons& lexicons) {
  IndexBuilder builder(config, lexicons);
  for (const auto& d : documents) builder.add(d);
  return std::move(builder).finish();
}

void put_varint(std::string& out, std::uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<char>((value & 0x7f) | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<char>(value));
}

std::uint64_t get_varint(std::string_view in, std::size_t& pos) {
  std::uint64_t value = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw Error("truncated varint in postings file");
    const auto byte = static_cast<unsigned char>(in[pos++]);
    value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
    if (!(byte & 0x80)) return value;
  }
  throw Error("varint longer than 64 bits in postings file");
}

void SentenceIndex::save(const fs::path& dir) const {
  fs::create_directories(dir);

  Json manifest = {{"format", kManifestFormat},
                   {"version", kFormatVersion},
                   {"config", config_},
                   {"counts",
                    {{"sentences", stats_.sentence_count},
                     {"tokens", stats_.token_count},
                     {"documents", stats_.document_count},
                     {"excluded_by_length", stats_.excluded_by_length},
                     {"terms", postings_.size()}}}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string lines;
  for (const auto& s : sentences_) {
    lines += Json(s).dump();
    lines += '\n';
  }
  write_file(dir / "sentences.jsonl", lines);

  // magic, version, term count, then per term: length-prefixed UTF-8 bytes,
  // posting count, and delta-coded ids (first delta is the absolute id).
  std::string bin(kPostingsMagic);
  put_varint(bin, kFormatVersion);
  put_varint(bin, postings_.size());
  for (const auto& [term, ids] : postings_) {
    put_varint(bin, term.size());
    bin += term;
    put_varint(bin, ids.size());
    SentenceId prev = 0;
    for (auto id : ids) {
      put_varint(bin, id - prev);
      prev = id;
    }
  }
  write_file(dir / "postings.bin", bin);
}

SentenceIndex SentenceIndex::load(const fs::path& dir) {
  SentenceIndex index;
  const Json manifest = Json::parse(read_file(dir / "manifest.json"));
  if (manifest.value("format", "") != kManifestFormat) {
    throw Error(dir.string() + " is not an index directory");
  }
  if (manifest.at("version").get<std::uint32_t>() != kFormatVersion) {
    throw Error("unsupported index version " + manifest.at("version").dump());
  }
  index.config_ = manifest.at("config").get<PipelineConfig>();
  const auto& counts = manifest.at("counts");
  index.stats_.sentence_count = counts.at("sentences").get<std::uint64_t>();
  index.stats_.token_count = counts.at("tokens").get<std::uint64_t>();
  index.stats_.document_count = counts.at("documents").get<std::uint64_t>();
  index.stats_.excluded_by_length = counts.at("excluded_by_length").get<std::uint64_t>();

  const auto text = read_file(dir / "sentences.jsonl");
  for (auto line : lines_of(text)) {
    if (trim(line).empty()) continue;
    auto s = Json::parse(line).get<Sentence>();
    if (s.id != index.sentences_.size()) throw Error("sentences.jsonl ids are not dense");
    index.sentences_.push_back(std::move(s));
  }
  if (index.sentences_.size() != index.stats_.sentence_count) {
    throw Error("sentence count disagrees with manifest");
  }

  const auto bin = read_file(dir / "postings.bin");
  if (bin.substr(0, kPostingsMagic.size()) != kPostingsMagic) throw Error("bad postings magic");
  std::size_t pos = kPostingsMagic.size();
  if (get_varint(bin, pos) != kFormatVersion) throw Error("postings version mismatch");
  const auto terms = get_varint(bin, pos);
  for (std::uint64_t t = 0; t < terms; ++t) {
    const auto len = get_varint(bin, pos);
    if (pos + len > bin.size()) throw Error("truncated term in postings file");
    std::string term = bin.substr(pos, len);
    pos += len;
    const auto n = get_varint(bin, pos);
    std::vector<SentenceId> ids;
    ids.reserve(n);
    SentenceId prev = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
      prev += static_cast<SentenceId>(get_varint(bin, pos));
      if (prev >= index.sentences_.size()) throw Error("posting refers to unknown sentence");
      ids.push_back(prev);
    }
    index.postings_.emplace(std::move(term), std::move(ids));
  }
  if (pos != bin.size()) throw Error("trailing bytes in postings file");
  return index;
}

}  // namespace moral_debater
