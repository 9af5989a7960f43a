#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"
#include "moral_debater/index.h"
#include "moral_debater/json_io.h"
#include "moral_debater/lexicon.h"
#include "moral_debater/pipeline.h"
#include "moral_debater/retrieval.h"
#include "moral_debater/text_util.h"
#include "support.h"

using namespace moral_debater;

namespace {

std::vector<Document> fixture_documents() {
  std::ifstream in(md_test::fixture_dir() / "corpus.jsonl");
  return read_corpus_jsonl(in);
}

MarkerLexicons bundled_markers() {
  return load_marker_lexicons(default_app_config(md_test::data_dir()));
}

Sentence make_sentence(std::string_view text, const MarkerLexicons& lex, SentenceId id = 0) {
  Sentence s;
  s.id = id;
  s.text = std::string(text);
  s.tokens = tokenize(text);
  s.markers = annotate_markers(s.tokens, lex);
  return s;
}

}  // namespace

// ---- foundation ----

TEST(Foundation, FiveLabelsRoundTrip) {
  std::set<std::string> seen;
  for (auto f : kAllFoundations) {
    const auto label = std::string(to_string(f));
    seen.insert(label);
    EXPECT_EQ(parse_foundation(label), f);
    std::string upper = label;
    for (auto& c : upper) c = static_cast<char>(std::toupper(c));
    EXPECT_EQ(parse_foundation(upper), f);
  }
  EXPECT_EQ(seen.size(), 5u);
  EXPECT_FALSE(parse_foundation("courage"));
}

TEST(Foundation, FramingPresets) {
  using F = MoralFoundation;
  EXPECT_EQ(framing_to_morals(Framing::kIndividualizing), (MoralSet{F::kCare, F::kFairness}));
  EXPECT_EQ(framing_to_morals(Framing::kBinding),
            (MoralSet{F::kLoyalty, F::kAuthority, F::kPurity}));
  EXPECT_FALSE(framing_to_morals(Framing::kUncontrolled).has_value());
}

TEST(Foundation, IndividualizingAndBindingPartitionTheFoundations) {
  const auto a = *framing_to_morals(Framing::kIndividualizing);
  const auto b = *framing_to_morals(Framing::kBinding);
  EXPECT_TRUE((a & b).empty());
  EXPECT_EQ(a | b, MoralSet::all());
}

TEST(Foundation, MoralSetOperations) {
  using F = MoralFoundation;
  MoralSet s{F::kPurity, F::kCare};
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"care", "purity"}));
  EXPECT_TRUE(s.is_subset_of(MoralSet::all()));
  EXPECT_FALSE(MoralSet::all().is_subset_of(s));
  EXPECT_EQ(parse_moral_set("care, purity"), s);
  EXPECT_THROW(parse_moral_set("care,courage"), ValidationError);
  for (unsigned m = 0; m < 32; ++m) {
    const auto set = MoralSet::from_mask(static_cast<std::uint8_t>(m));
    Json j = set;
    EXPECT_EQ(j.get<MoralSet>(), set);
  }
}

TEST(Foundation, ProfileRejectsOutOfRange) {
  EXPECT_THROW(MoralProfile({1.5, 0, 0, 0, 0}), ValidationError);
  EXPECT_THROW(MoralProfile({std::nan(""), 0, 0, 0, 0}), ValidationError);
  MoralProfile p({0.7, 0.5, 0.2, 0.9, 0.0});
  EXPECT_EQ(p.above(0.5), (MoralSet{MoralFoundation::kCare, MoralFoundation::kAuthority}));
  Json j = p;
  EXPECT_EQ(j.get<MoralProfile>(), p);
}

TEST(Foundation, PipelineConfigDefaultsAndValidation) {
  PipelineConfig c;
  EXPECT_DOUBLE_EQ(c.moral_confidence_threshold, 0.5);
  EXPECT_DOUBLE_EQ(c.claim_threshold, 0.8);
  EXPECT_DOUBLE_EQ(c.evidence_threshold, 0.6);
  EXPECT_EQ(c.window_size, 12u);
  EXPECT_EQ(c.min_len, 6u);
  EXPECT_EQ(c.max_len, 60u);
  EXPECT_EQ(c.per_query_limit, 10000u);
  EXPECT_EQ(c.max_themes, 4u);
  EXPECT_DOUBLE_EQ(c.dedupe_threshold, 0.8);
  EXPECT_NO_THROW(c.validate());

  auto bad = c;
  bad.claim_threshold = 1.2;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = c;
  bad.min_len = 70;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = c;
  bad.max_themes = 0;
  EXPECT_THROW(bad.validate(), ValidationError);

  Json j = c;
  EXPECT_EQ(j.get<PipelineConfig>(), c);
  EXPECT_THROW((Json{{"window", 3}}.get<PipelineConfig>()), std::exception);
}

// ---- lexicons ----

TEST(Lexicon, SingleRow) {
  const auto lex = load_moral_lexicon("harm,care,0.9");
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_DOUBLE_EQ((*lex.find("harm"))[index_of(MoralFoundation::kCare)], 0.9);
}

TEST(Lexicon, DuplicateRowsKeepMaximum) {
  const auto lex = load_moral_lexicon("fair,fairness,0.5\nfair,fairness,0.8\n");
  EXPECT_DOUBLE_EQ((*lex.find("fair"))[index_of(MoralFoundation::kFairness)], 0.8);
  const auto rev = load_moral_lexicon("fair,fairness,0.8\nfair,fairness,0.5\n");
  EXPECT_EQ(lex, rev);
}

TEST(Lexicon, UnknownFoundationIsValidationError) {
  EXPECT_THROW(load_moral_lexicon("x,courage,1.0"), ValidationError);
}

TEST(Lexicon, MalformedRowNamesLine) {
  try {
    load_moral_lexicon("word,foundation,weight\nharm,care,0.9\nbroken\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_moral_lexicon("harm,care,1.5"), ParseError);
  EXPECT_THROW(load_moral_lexicon("harm,care,0"), ParseError);
}

TEST(Lexicon, WeightDefaultsToOneAndLabelsAreCaseInsensitive) {
  const auto lex = load_moral_lexicon("# comment\nloyal,LOYALTY\n");
  EXPECT_DOUBLE_EQ((*lex.find("loyal"))[index_of(MoralFoundation::kLoyalty)], 1.0);
}

TEST(Lexicon, SerializedFormReloadsEqual) {
  const auto lex = load_moral_lexicon(md_test::slurp(md_test::data_dir() / "lexicons/moral_lexicon.csv"));
  EXPECT_GT(lex.size(), 50u);
  EXPECT_EQ(load_moral_lexicon(lex.to_csv()), lex);
}

TEST(AspectMap, Examples) {
  const auto m = load_aspect_map("respect\tauthority\n");
  EXPECT_EQ(m.lookup("respect"), MoralSet{MoralFoundation::kAuthority});
  const auto u = load_aspect_map("justice\tfairness\njustice\tcare\n");
  EXPECT_EQ(u.lookup("Justice"), (MoralSet{MoralFoundation::kFairness, MoralFoundation::kCare}));
  EXPECT_TRUE(load_aspect_map("").empty());
  EXPECT_TRUE(m.lookup("banana").empty());
}

TEST(AspectMap, MultiFoundationRowsAndRoundTrip) {
  const auto m = load_aspect_map(md_test::slurp(md_test::data_dir() / "lexicons/aspect_map.tsv"));
  EXPECT_EQ(m.lookup("tradition"), (MoralSet{MoralFoundation::kAuthority, MoralFoundation::kLoyalty}));
  EXPECT_EQ(load_aspect_map(m.to_tsv()), m);
  EXPECT_THROW(load_aspect_map("respect\tcourage\n"), ValidationError);
  EXPECT_THROW(load_aspect_map("no tab here\n"), ParseError);
}

// ---- tokenization and segmentation ----

TEST(Segmentation, SingleSentenceNineTokens) {
  Document d{"d", "", "Gun laws are only obeyed by law abiding people.", std::nullopt};
  const auto s = segment_and_tokenize(d);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tokens.size(), 9u);
  EXPECT_EQ(s[0].tokens.front(), "gun");
}

TEST(Segmentation, EmptyBody) {
  EXPECT_TRUE(segment_and_tokenize(Document{"d", "", "", std::nullopt}).empty());
}

TEST(Segmentation, TerminalPunctuation) {
  const auto s = segment_and_tokenize(Document{"d", "", "A. B? C!", std::nullopt});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].text, "A.");
  EXPECT_EQ(s[2].text, "C!");
  EXPECT_EQ(s[1].id, 1u);
}

TEST(Segmentation, AbbreviationGuard) {
  EXPECT_EQ(split_sentences("Dr. Smith spoke first. Then we left.").size(), 2u);
  EXPECT_EQ(split_sentences("Prices rose 3.5 percent. Nobody cared.").size(), 2u);
}

TEST(Tokenizer, HyphensApostrophesAndCase) {
  EXPECT_EQ(tokenize("Self-defense isn't WRONG"),
            (std::vector<std::string>{"self-defense", "isn't", "wrong"}));
  EXPECT_EQ(tokenize("end-- of -line"), (std::vector<std::string>{"end", "of", "line"}));
  // Typographic apostrophe folds to the ASCII one.
  EXPECT_EQ(tokenize("it\xE2\x80\x99s fine"), (std::vector<std::string>{"it's", "fine"}));
  EXPECT_TRUE(tokenize(" ... ").empty());
}

// ---- markers and windows ----

TEST(Markers, CausalityPosition) {
  MarkerLexicons lex;
  lex.causality = MarkerLexicon{"because"};
  const std::vector<std::string> tokens{"crime", "rises", "because", "of", "poverty"};
  const auto m = annotate_markers(tokens, lex);
  ASSERT_EQ(m.causality.size(), 1u);
  EXPECT_EQ(m.causality[0], (TokenSpan{2, 3}));
}

TEST(Markers, DefaultEvidenceCues) {
  MarkerLexicons lex;
  const auto tokens = tokenize("a recent survey found little");
  EXPECT_FALSE(annotate_markers(tokens, lex).evidence_cue.empty());
  for (auto w : {"surveys", "analyses", "researches", "reports", "research", "survey"}) {
    EXPECT_TRUE(lex.evidence_cues.contains(w)) << w;
  }
}

TEST(Markers, DisjointSentenceHasNoMarkers) {
  const auto lex = bundled_markers();
  const auto m = annotate_markers(tokenize("the cat sat on the mat"), lex);
  EXPECT_EQ(m.total(), 0u);
}

TEST(Markers, PhrasesProduceSpans) {
  const auto lex = bundled_markers();
  const auto m = annotate_markers(tokenize("prices fell as a result of trade"), lex);
  ASSERT_EQ(m.causality.size(), 1u);
  EXPECT_EQ(m.causality[0], (TokenSpan{2, 5}));
}

TEST(Window, Examples) {
  const std::vector<std::uint32_t> a{3}, b{4}, c{0}, d{13}, none{}, e{5};
  EXPECT_TRUE(window_cooccurs(a, b, 12));
  EXPECT_FALSE(window_cooccurs(c, d, 12));
  EXPECT_FALSE(window_cooccurs(none, e, 12));
}

TEST(Window, StrictBoundary) {
  const std::vector<std::uint32_t> zero{0}, eleven{11}, twelve{12};
  EXPECT_TRUE(window_cooccurs(zero, eleven, 12));
  EXPECT_FALSE(window_cooccurs(zero, twelve, 12));
}

TEST(Window, SpansUseNearestBoundary) {
  const std::vector<TokenSpan> phrase{{10, 13}}, before{{0, 1}}, after{{24, 25}}, inside{{11, 12}};
  EXPECT_TRUE(window_cooccurs(phrase, before, 12));   // 10 - 0
  EXPECT_FALSE(window_cooccurs(phrase, after, 12));   // 24 - 12
  EXPECT_TRUE(window_cooccurs(phrase, inside, 1));    // overlap
  EXPECT_EQ(span_distance({10, 13}, {23, 24}), 11u);
}

TEST(Window, SymmetricOnRandomInputs) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint32_t> pos(0, 40), count(0, 4), win(1, 15);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::uint32_t> a(count(rng)), b(count(rng));
    for (auto& x : a) x = pos(rng);
    for (auto& x : b) x = pos(rng);
    const auto w = win(rng);
    bool brute = false;
    for (auto x : a)
      for (auto y : b) brute |= (x > y ? x - y : y - x) < w;
    ASSERT_EQ(window_cooccurs(a, b, w), brute);
    ASSERT_EQ(window_cooccurs(b, a, w), brute);
  }
}

// ---- index ----

TEST(Index, SingleDocument) {
  const Document d{"d1", "t", "Gun laws are only obeyed by law abiding people.", std::nullopt};
  const auto index = build_index(std::span(&d, 1), PipelineConfig{}, bundled_markers());
  EXPECT_EQ(index.size(), 1u);
  EXPECT_EQ(index.stats().token_count, 9u);
}

TEST(Index, ShortSentenceExcluded) {
  const Document d{"d1", "", "Only five tokens are here. This one has exactly six tokens.", std::nullopt};
  const auto index = build_index(std::span(&d, 1), PipelineConfig{}, bundled_markers());
  ASSERT_EQ(index.size(), 1u);
  EXPECT_EQ(index.sentence(0).tokens.size(), 6u);
  EXPECT_EQ(index.stats().excluded_by_length, 1u);
}

TEST(Index, DuplicateIdRejected) {
  IndexBuilder b(PipelineConfig{}, bundled_markers());
  b.add({"same", "", "One sentence with enough tokens in it.", std::nullopt});
  try {
    b.add({"same", "", "Another sentence with enough tokens too.", std::nullopt});
    FAIL();
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("same"), std::string::npos);
  }
}

TEST(Index, MatchesExhaustiveReconstruction) {
  auto docs = fixture_documents();
  docs.resize(12);
  const PipelineConfig config;
  const auto lex = bundled_markers();
  const auto index = build_index(docs, config, lex);

  // Oracle: segment every document independently, keep in-range sentences.
  std::vector<std::pair<std::string, std::vector<std::string>>> expected;
  for (const auto& d : docs) {
    for (const auto& piece : split_sentences(d.body)) {
      auto tokens = tokenize(piece);
      if (tokens.size() >= config.min_len && tokens.size() <= config.max_len) {
        expected.emplace_back(piece, tokens);
      }
    }
  }
  ASSERT_EQ(index.size(), expected.size());
  std::map<std::string, std::set<SentenceId>> postings;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(index.sentence(static_cast<SentenceId>(i)).text, expected[i].first);
    EXPECT_EQ(index.sentence(static_cast<SentenceId>(i)).tokens, expected[i].second);
    for (const auto& t : expected[i].second) postings[t].insert(static_cast<SentenceId>(i));
  }
  ASSERT_EQ(index.all_postings().size(), postings.size());
  for (const auto& [tok, ids] : postings) {
    const auto got = index.postings(tok);
    EXPECT_TRUE(std::equal(got.begin(), got.end(), ids.begin(), ids.end())) << tok;
  }
}

TEST(Index, SaveLoadRoundTrip) {
  const auto docs = fixture_documents();
  const auto index = build_index(docs, PipelineConfig{}, bundled_markers());
  const auto dir = md_test::scratch_dir("index_rt");
  index.save(dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "postings.bin"));
  const auto loaded = SentenceIndex::load(dir);
  EXPECT_EQ(loaded, index);
  std::filesystem::remove_all(dir);
}

TEST(Index, VarintRoundTrip) {
  std::mt19937_64 rng(3);
  std::string buf;
  std::vector<std::uint64_t> values{0, 1, 127, 128, 300, UINT64_MAX};
  for (int i = 0; i < 200; ++i) values.push_back(rng() >> (rng() % 64));
  for (auto v : values) put_varint(buf, v);
  std::size_t pos = 0;
  for (auto v : values) EXPECT_EQ(get_varint(buf, pos), v);
  EXPECT_EQ(pos, buf.size());
  std::size_t p2 = 0;
  EXPECT_THROW(get_varint(std::string("\x80"), p2), Error);
}

TEST(Index, CorpusReaderRejectsBadLines) {
  std::istringstream bad("{\"id\":\"a\",\"text\":\"x\"}\n{\"text\":\"no id\"}\n");
  try {
    read_corpus_jsonl(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

// ---- retrieval ----

TEST(Queries, BuildFourQueries) {
  const auto q = build_topic_queries("globalization", PipelineConfig{});
  ASSERT_EQ(q.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(q[i].kind, kAllQueryKinds[i]);
    EXPECT_EQ(q[i].topic, std::vector<std::string>{"globalization"});
    EXPECT_EQ(q[i].window_size, 12u);
    EXPECT_EQ(q[i].limit, 10000u);
  }
  EXPECT_EQ(build_topic_queries("school uniforms", PipelineConfig{})[0].topic.size(), 2u);
  EXPECT_THROW(build_topic_queries("", PipelineConfig{}), ValidationError);
  EXPECT_THROW(build_topic_queries(" ?! ", PipelineConfig{}), ValidationError);
}

TEST(Retrieval, EmptyIndex) {
  const SentenceIndex empty;
  for (const auto& q : build_topic_queries("globalization", PipelineConfig{})) {
    EXPECT_TRUE(retrieve(empty, q).empty());
  }
}

class FixtureRetrieval : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto docs = fixture_documents();
    index_ = new SentenceIndex(build_index(docs, PipelineConfig{}, bundled_markers()));
  }
  static void TearDownTestSuite() { delete index_; }
  static SentenceIndex* index_;
};
SentenceIndex* FixtureRetrieval::index_ = nullptr;

TEST_F(FixtureRetrieval, TopicOnlyMatchesScan) {
  const auto lex = md_test::bundled_oracle_lexicons();
  const auto q = build_topic_queries("globalization", PipelineConfig{})[0];
  const auto got = retrieve(*index_, q);
  std::set<SentenceId> ids;
  for (const auto& s : got) ids.insert(s.id);
  EXPECT_EQ(ids, md_test::oracle_retrieve(index_->sentences(), q, lex));
  EXPECT_GT(ids.size(), 40u);
}

TEST_F(FixtureRetrieval, MonotoneAlongConstraints) {
  for (const auto& topic : md_test::read_lines(md_test::fixture_dir() / "retrieval_topics.txt")) {
    const auto qs = build_topic_queries(topic, PipelineConfig{});
    std::vector<std::set<SentenceId>> sets;
    for (std::size_t k = 0; k < 3; ++k) {
      std::set<SentenceId> s;
      for (const auto& x : retrieve(*index_, qs[k])) s.insert(x.id);
      sets.push_back(s);
    }
    EXPECT_TRUE(std::includes(sets[0].begin(), sets[0].end(), sets[1].begin(), sets[1].end()));
    EXPECT_TRUE(std::includes(sets[1].begin(), sets[1].end(), sets[2].begin(), sets[2].end()));
  }
}

TEST_F(FixtureRetrieval, OrderingAndLimit) {
  auto q = build_topic_queries("gun control", PipelineConfig{})[0];
  const auto all = retrieve(*index_, q);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto prev = *match_query(all[i - 1], q);
    const auto cur = *match_query(all[i], q);
    ASSERT_TRUE(prev > cur || (prev == cur && all[i - 1].id < all[i].id));
  }
  for (const auto& s : all) {
    EXPECT_GE(s.tokens.size(), 6u);
    EXPECT_LE(s.tokens.size(), 60u);
  }
  q.limit = 5;
  const auto capped = retrieve(*index_, q);
  ASSERT_EQ(capped.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(capped[i].id, all[i].id);
}

TEST_F(FixtureRetrieval, UnionKeepsFirstOccurrence) {
  const auto qs = build_topic_queries("euthanasia", PipelineConfig{});
  const auto u = retrieve_union(*index_, qs);
  std::set<SentenceId> ids;
  for (const auto& s : u) EXPECT_TRUE(ids.insert(s.id).second);
  EXPECT_EQ(ids.size(), retrieve(*index_, qs[0]).size());  // topic-only is the superset
}

TEST(Retrieval, MultiTokenTopicRequiresAllTokens) {
  const auto lex = bundled_markers();
  const auto q = build_topic_queries("school uniforms", PipelineConfig{})[0];
  EXPECT_FALSE(match_query(make_sentence("The school board met again on a Monday evening.", lex), q));
  EXPECT_TRUE(match_query(make_sentence("Uniforms at the school were discussed again today.", lex), q));
}
