#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "httplib.h"
#include "moral_debater/corpus.h"
#include "moral_debater/index.h"
#include "moral_debater/mining.h"
#include "moral_debater/narrative.h"
#include "moral_debater/pipeline.h"
#include "moral_debater/retrieval.h"
#include "moral_debater/scorer.h"
#include "support.h"

using namespace moral_debater;
using F = MoralFoundation;

namespace {

MarkerLexicons bundled_markers() {
  return load_marker_lexicons(default_app_config(md_test::data_dir()));
}

Sentence make_sentence(std::string_view text, SentenceId id = 0) {
  static const auto lex = bundled_markers();
  Sentence s;
  s.id = id;
  s.doc_id = "doc";
  s.text = std::string(text);
  s.tokens = tokenize(text);
  s.markers = annotate_markers(s.tokens, lex);
  return s;
}

ArgumentUnit make_unit(SentenceId id, std::string_view text, UnitKind kind = UnitKind::kClaim,
                       double claim = 0.9) {
  ArgumentUnit u;
  u.sentence = make_sentence(text, id);
  u.kind = kind;
  u.claim_likelihood = claim;
  u.evidence_likelihood = 0.7;
  if (kind == UnitKind::kClaim) u.claim_span = TokenSpan{0, static_cast<std::uint32_t>(u.sentence.tokens.size())};
  u.stance_score = 0.1;
  return u;
}

std::vector<std::string> ids_of(const std::vector<ArgumentUnit>& units) {
  std::vector<std::string> out;
  for (const auto& u : units) out.push_back(u.id());
  return out;
}

}  // namespace

// ---- lexicon scorer ----

TEST(LexiconScorer, HandCountExample) {
  const auto lex = load_moral_lexicon("harm,care,0.9");
  const std::vector<std::string> tokens{"killing", "is", "harm"};
  const auto p = score_sentence_morals_lexicon(tokens, lex);
  EXPECT_NEAR(p[F::kCare], 0.30, 1e-12);
  for (auto f : {F::kFairness, F::kLoyalty, F::kAuthority, F::kPurity}) EXPECT_EQ(p[f], 0.0);
}

TEST(LexiconScorer, DisjointAndEmptyLexicon) {
  const auto lex = load_moral_lexicon("harm,care,0.9");
  const std::vector<std::string> tokens{"the", "cat", "sat"};
  EXPECT_EQ(score_sentence_morals_lexicon(tokens, lex), MoralProfile{});
  EXPECT_EQ(score_sentence_morals_lexicon(tokens, MoralLexicon{}, LexiconNormalization::kRaw),
            MoralProfile{});
}

TEST(LexiconScorer, OrderInvariantAndAdditive) {
  const auto lex = load_moral_lexicon(md_test::slurp(md_test::data_dir() / "lexicons/moral_lexicon.csv"));
  std::mt19937 rng(5);
  std::vector<std::string> vocab;
  for (const auto& [w, _] : lex.entries()) vocab.push_back(w);
  vocab.insert(vocab.end(), {"the", "a", "market", "people", "went", "home"});
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(1, 20);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> tokens(len(rng));
    for (auto& t : tokens) t = vocab[pick(rng)];
    auto shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto mode : {LexiconNormalization::kPerToken, LexiconNormalization::kRaw}) {
      const auto a = score_sentence_morals_lexicon(tokens, lex, mode);
      const auto b = score_sentence_morals_lexicon(shuffled, lex, mode);
      for (auto f : kAllFoundations) ASSERT_NEAR(a[f], b[f], 1e-12);
    }
    // Raw mode: uncapped sum of weights, computed directly.
    for (auto f : kAllFoundations) {
      double sum = 0.0;
      for (const auto& t : tokens) {
        if (const auto* w = lex.find(t)) sum += (*w)[index_of(f)];
      }
      ASSERT_NEAR(score_sentence_morals_lexicon(tokens, lex, LexiconNormalization::kRaw)[f],
                  std::min(1.0, sum), 1e-12);
      ASSERT_NEAR(score_sentence_morals_lexicon(tokens, lex, LexiconNormalization::kPerToken)[f],
                  std::min(1.0, sum / static_cast<double>(tokens.size())), 1e-12);
    }
  }
}

// ---- aggregation and filtering ----

TEST(Aggregate, Examples) {
  MoralProfile care;
  care.set(F::kCare, 0.7);
  EXPECT_EQ(aggregate_text_morals(std::vector{care}, 0.5), MoralSet{F::kCare});

  MoralProfile other;
  other.set(F::kAuthority, 0.6);
  other.set(F::kPurity, 0.4);
  EXPECT_EQ(aggregate_text_morals(std::vector{care, other}, 0.5),
            (MoralSet{F::kCare, F::kAuthority}));

  MoralProfile boundary;
  boundary.set(F::kCare, 0.5);
  EXPECT_TRUE(aggregate_text_morals(std::vector{boundary}, 0.5).empty());
  EXPECT_TRUE(aggregate_text_morals(std::vector<MoralProfile>{}, 0.5).empty());
}

TEST(Aggregate, MonotoneInThreshold) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<MoralProfile> profiles(1 + trial % 5);
    for (auto& p : profiles)
      for (auto f : kAllFoundations) p.set(f, u(rng));
    const double lo = u(rng), hi = lo + (1.0 - lo) * u(rng);
    ASSERT_TRUE(aggregate_text_morals(profiles, hi).is_subset_of(aggregate_text_morals(profiles, lo)));
  }
}

TEST(Filter, Examples) {
  const MoralSet target{F::kCare, F::kFairness};
  EXPECT_TRUE(filter_by_target_morals(MoralSet{F::kCare}, target));
  EXPECT_FALSE(filter_by_target_morals(MoralSet{}, target));
  EXPECT_FALSE(filter_by_target_morals(MoralSet{F::kCare, F::kAuthority}, target));
  EXPECT_TRUE(filter_by_target_morals(MoralSet{}, std::nullopt));
  EXPECT_TRUE(filter_by_target_morals(MoralSet::all(), std::nullopt));
}

// ---- external scorer ----

class MockClassifier : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = Json::parse(req.body);
      const auto text = body.at("text").get<std::string>();
      if (text.find("overflow") != std::string::npos) {
        res.set_content(R"({"care":1.7,"fairness":0,"loyalty":0,"authority":0,"purity":0})",
                        "application/json");
      } else if (text.find("garbled") != std::string::npos) {
        res.set_content("not json", "application/json");
      } else if (text.find("missing") != std::string::npos) {
        res.set_content(R"({"care":0.1})", "application/json");
      } else if (text.find("failure") != std::string::npos) {
        res.status = 500;
      } else if (text.find("slow") != std::string::npos) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.set_content(R"({"care":0,"fairness":0,"loyalty":0,"authority":0,"purity":0})",
                        "application/json");
      } else {
        res.set_content(R"({"care":0.8,"fairness":0.1,"loyalty":0,"authority":0.55,"purity":0.2})",
                        "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/score"; }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(MockClassifier, EchoesFixedProfile) {
  ExternalScorer scorer(endpoint());
  const auto p = scorer.score(make_sentence("Anything at all goes here."));
  EXPECT_EQ(p, MoralProfile({0.8, 0.1, 0.0, 0.55, 0.2}));
}

TEST_F(MockClassifier, RangeViolationIsProtocolError) {
  ExternalScorer scorer(endpoint());
  EXPECT_THROW(scorer.score_text("overflow"), ProtocolError);
  EXPECT_THROW(scorer.score_text("garbled"), ProtocolError);
  EXPECT_THROW(scorer.score_text("missing"), ProtocolError);
}

TEST_F(MockClassifier, ServerErrorAndTimeoutAreTransportErrors) {
  ExternalScorer scorer(endpoint(), std::chrono::milliseconds(150));
  EXPECT_THROW(scorer.score_text("failure"), TransportError);
  EXPECT_THROW(scorer.score_text("slow"), TransportError);
}

TEST_F(MockClassifier, FallbackOnlyOnTransportError) {
  auto lexicon = std::make_shared<LexiconScorer>(
      std::make_shared<const MoralLexicon>(load_moral_lexicon("harm,care,0.9")),
      LexiconNormalization::kRaw);
  FallbackScorer fb(std::make_shared<ExternalScorer>("http://127.0.0.1:1/score"), lexicon);
  EXPECT_NEAR(fb.score(make_sentence("harm everywhere today"))[F::kCare], 0.9, 1e-12);

  FallbackScorer proto(std::make_shared<ExternalScorer>(endpoint()), lexicon);
  EXPECT_THROW(proto.score(make_sentence("overflow of harm")), ProtocolError);
}

TEST(ExternalScorer, UnreachableEndpoint) {
  ExternalScorer scorer("http://127.0.0.1:1/score", std::chrono::milliseconds(300));
  EXPECT_THROW(scorer.score_text("hello"), TransportError);
  EXPECT_THROW(ExternalScorer("ftp://nowhere"), ValidationError);
}

// ---- argumentativeness and stance ----

TEST(Argumentativeness, TopicCausalitySentimentClaim) {
  const auto w = default_argument_weights();
  const auto s = make_sentence("Globalization helps poorer regions because it opens new export markets.");
  const std::vector<std::string> topic{"globalization"};
  const auto f = extract_features(s, topic, w);
  EXPECT_TRUE(f.topic && f.causality && f.sentiment && f.length_in_range);
  EXPECT_FALSE(f.evidence_cue || f.leading_connective);
  const auto a = score_argumentativeness(s, topic, w);
  EXPECT_NEAR(a.claim_likelihood, 0.88, 0.005);
  EXPECT_NEAR(a.claim_likelihood, 1.0 / (1.0 + std::exp(-2.0)), 1e-12);
  ASSERT_TRUE(a.claim_span);
  EXPECT_EQ(a.claim_span->begin, 0u);
  EXPECT_EQ(a.claim_span->end, s.tokens.size());
}

TEST(Argumentativeness, AllFeaturesFalse) {
  const auto w = default_argument_weights();
  const auto s = make_sentence("Nothing here.");
  const std::vector<std::string> topic{"globalization"};
  const auto a = score_argumentativeness(s, topic, w);
  EXPECT_NEAR(a.claim_likelihood, 0.047, 0.0005);
  EXPECT_NEAR(a.evidence_likelihood, 1.0 / (1.0 + std::exp(3.0)), 1e-12);
  EXPECT_FALSE(a.claim_span);
}

TEST(Argumentativeness, ClaimSpanSkipsLeadingConnective) {
  const auto w = default_argument_weights();
  const auto s = make_sentence("However, globalization helps trade because markets open wide.");
  const std::vector<std::string> topic{"globalization"};
  const auto a = score_argumentativeness(s, topic, w);
  EXPECT_TRUE(extract_features(s, topic, w).leading_connective);
  ASSERT_TRUE(a.claim_span);
  EXPECT_EQ(s.tokens[a.claim_span->begin], "globalization");
}

TEST(Argumentativeness, MonotoneInPositiveFeatures) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    FeatureWeights w{u(rng), pos(rng), pos(rng), pos(rng), pos(rng), pos(rng), pos(rng)};
    ArgumentFeatures f;
    bool* flags[] = {&f.topic, &f.causality, &f.sentiment, &f.evidence_cue, &f.length_in_range,
                     &f.leading_connective};
    for (auto* b : flags) *b = rng() % 2;
    const double before = likelihood(w, f);
    *flags[rng() % 6] = true;
    ASSERT_GE(likelihood(w, f), before);
  }
}

TEST(Stance, ThreatExample) {
  PolarityLexicon pol{{"threat", -0.8}};
  EXPECT_NEAR(score_stance_tokens(tokenize("globalization is a threat"), pol), -0.2, 1e-12);
  EXPECT_EQ(score_stance_tokens(tokenize("globalization is a topic"), pol), 0.0);
}

TEST(Stance, NegationFlip) {
  PolarityLexicon pol{{"harmful", -0.7}};
  EXPECT_NEAR(score_stance_tokens(tokenize("not harmful"), pol), 0.35, 1e-12);
  // Four tokens back is outside the negation window.
  EXPECT_NEAR(score_stance_tokens(tokenize("not a b c harmful"), pol), -0.14, 1e-12);
}

TEST(Stance, AntisymmetricUnderNegatedLexicon) {
  const auto w = load_argument_weights(md_test::slurp(md_test::data_dir() / "lexicons/weights.ini"));
  PolarityLexicon neg;
  for (const auto& [k, v] : w.polarity) neg[k] = -v;
  std::vector<std::string> vocab;
  for (const auto& [k, _] : w.polarity) vocab.push_back(k);
  vocab.insert(vocab.end(), {"not", "never", "the", "policy", "people"});
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(1, 15);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> tokens(len(rng));
    for (auto& t : tokens) t = vocab[pick(rng)];
    ASSERT_NEAR(score_stance_tokens(tokens, w.polarity), -score_stance_tokens(tokens, neg), 1e-12);
    const double s = score_stance_tokens(tokens, w.polarity);
    ASSERT_GE(s, -1.0);
    ASSERT_LE(s, 1.0);
  }
}

TEST(Weights, IniOverridesAndDefaults) {
  const auto d = default_argument_weights();
  EXPECT_EQ(d.claim, (FeatureWeights{-3, 1.5, 1.5, 1, -0.5, 1, -0.5}));
  EXPECT_EQ(d.evidence, (FeatureWeights{-3, 1, 0.5, 0, 2.5, 0.5, 0}));
  const auto w = load_argument_weights("[claim_weights]\nbias = -2\n[features]\nlength_min = 4\n"
                                       "[polarity_lexicon]\ngood = 0.5\n");
  EXPECT_EQ(w.claim.bias, -2.0);
  EXPECT_EQ(w.claim.topic, 1.5);
  EXPECT_EQ(w.length_min, 4u);
  EXPECT_EQ(w.length_max, 60u);
  EXPECT_EQ(w.polarity.at("good"), 0.5);
  EXPECT_THROW(load_argument_weights("[polarity_lexicon]\ngood = 3\n"), Error);
}

// ---- unit selection ----

class Selection : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::ifstream in(md_test::fixture_dir() / "corpus.jsonl");
    const auto docs = read_corpus_jsonl(in);
    const auto config = default_app_config(md_test::data_dir());
    index_ = new SentenceIndex(build_index(docs, PipelineConfig{}, load_marker_lexicons(config)));
    weights_ = new ArgumentWeights(load_weights(config));
    scorer_holder_ = new std::shared_ptr<const MoralScorer>(make_scorer(config));
    scorer_ = scorer_holder_->get();
  }
  static void TearDownTestSuite() {
    delete index_;
    delete weights_;
    delete scorer_holder_;
  }

  static std::vector<Sentence> sample(std::string_view topic, std::size_t n) {
    auto s = retrieve_union(*index_, build_topic_queries(topic, PipelineConfig{}));
    if (s.size() > n) s.resize(n);
    return s;
  }

  static SentenceIndex* index_;
  static ArgumentWeights* weights_;
  static const MoralScorer* scorer_;
  static std::shared_ptr<const MoralScorer>* scorer_holder_;
};
SentenceIndex* Selection::index_ = nullptr;
ArgumentWeights* Selection::weights_ = nullptr;
const MoralScorer* Selection::scorer_ = nullptr;
std::shared_ptr<const MoralScorer>* Selection::scorer_holder_ = nullptr;

TEST_F(Selection, MatchesPredicateComposition) {
  const PipelineConfig config;
  const std::vector<std::string> topic{"abortion"};
  const auto sentences = sample("abortion", 20);
  ASSERT_EQ(sentences.size(), 20u);
  for (auto stance : {Stance::kPro, Stance::kCon}) {
    for (const auto& target : {std::optional<MoralSet>{}, framing_to_morals(Framing::kIndividualizing),
                               framing_to_morals(Framing::kBinding)}) {
      std::vector<std::pair<SentenceId, UnitKind>> expected;
      for (const auto& s : sentences) {
        const auto morals = scorer_->score(s).above(config.moral_confidence_threshold);
        if (target && (morals.empty() || !morals.is_subset_of(*target))) continue;
        const auto a = score_argumentativeness(s, topic, *weights_);
        UnitKind kind;
        if (a.claim_likelihood > config.claim_threshold) kind = UnitKind::kClaim;
        else if (a.evidence_likelihood > config.evidence_threshold) kind = UnitKind::kEvidence;
        else continue;
        std::vector<std::string> span = s.tokens;
        if (kind == UnitKind::kClaim) {
          span.assign(s.tokens.begin() + a.claim_span->begin, s.tokens.begin() + a.claim_span->end);
        }
        const double st = score_stance_tokens(span, weights_->polarity);
        if (stance == Stance::kPro ? st <= 0 : st >= 0) continue;
        expected.emplace_back(s.id, kind);
      }
      const auto got = select_units(sentences, topic, stance, target, *scorer_, config, *weights_);
      std::vector<std::pair<SentenceId, UnitKind>> actual;
      for (const auto& u : got) {
        actual.emplace_back(u.sentence.id, u.kind);
        EXPECT_FALSE(check_unit(u, config)) << *check_unit(u, config);
      }
      EXPECT_EQ(actual, expected);
    }
  }
}

TEST_F(Selection, ModerateMoralExcludedRegardlessOfLikelihood) {
  const auto s = make_sentence("Abortion boosts respect for authority because it helps order.");
  const std::vector<std::string> topic{"abortion"};
  ASSERT_GT(score_argumentativeness(s, topic, *weights_).claim_likelihood, 0.8);
  const std::vector<Sentence> one{s};
  EXPECT_EQ(select_units(one, topic, Stance::kPro, std::nullopt, *scorer_, PipelineConfig{}, *weights_).size(), 1u);
  EXPECT_TRUE(select_units(one, topic, Stance::kPro, framing_to_morals(Framing::kIndividualizing),
                           *scorer_, PipelineConfig{}, *weights_)
                  .empty());
}

TEST_F(Selection, StrictThresholds) {
  ArgumentWeights w = *weights_;
  w.claim = FeatureWeights{std::log(0.79 / 0.21), 0, 0, 0, 0, 0, 0};
  w.evidence = FeatureWeights{std::log(0.3 / 0.7), 0, 0, 0, 0, 0, 0};
  const std::vector<Sentence> one{make_sentence("Abortion helps justice because it improves equality.")};
  const std::vector<std::string> topic{"abortion"};
  EXPECT_TRUE(select_units(one, topic, Stance::kPro, std::nullopt, *scorer_, PipelineConfig{}, w).empty());
  w.claim.bias = std::log(0.81 / 0.19);
  EXPECT_EQ(select_units(one, topic, Stance::kPro, std::nullopt, *scorer_, PipelineConfig{}, w).size(), 1u);
}

TEST_F(Selection, ThresholdMonotonicityAndStancePartition) {
  const std::vector<std::string> topic{"minimum", "wage"};
  const auto sentences = sample("minimum wage", 200);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.3, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    PipelineConfig lo;
    lo.claim_threshold = u(rng);
    lo.evidence_threshold = u(rng);
    PipelineConfig hi = lo;
    hi.claim_threshold = std::min(1.0, lo.claim_threshold + 0.1 * (trial % 4));
    hi.evidence_threshold = std::min(1.0, lo.evidence_threshold + 0.05 * (trial % 3));
    for (auto stance : {Stance::kPro, Stance::kCon}) {
      std::set<SentenceId> a, b;
      for (const auto& x : select_units(sentences, topic, stance, std::nullopt, *scorer_, lo, *weights_)) a.insert(x.sentence.id);
      for (const auto& x : select_units(sentences, topic, stance, std::nullopt, *scorer_, hi, *weights_)) b.insert(x.sentence.id);
      ASSERT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    }
  }
  std::set<SentenceId> pro, con;
  for (const auto& x : select_units(sentences, topic, Stance::kPro, std::nullopt, *scorer_, PipelineConfig{}, *weights_)) pro.insert(x.sentence.id);
  for (const auto& x : select_units(sentences, topic, Stance::kCon, std::nullopt, *scorer_, PipelineConfig{}, *weights_)) con.insert(x.sentence.id);
  EXPECT_FALSE(pro.empty());
  EXPECT_FALSE(con.empty());
  for (auto id : pro) EXPECT_FALSE(con.count(id));
}

// ---- dedupe ----

TEST(Dedupe, IdenticalAndDisjoint) {
  const std::vector<ArgumentUnit> same{make_unit(1, "one two three four five"), make_unit(2, "one two three four five")};
  EXPECT_EQ(ids_of(dedupe(same, 0.8)), (std::vector<std::string>{"u1"}));
  const std::vector<ArgumentUnit> disjoint{make_unit(1, "one two three four"), make_unit(2, "five six seven eight")};
  EXPECT_EQ(dedupe(disjoint, 0.8).size(), 2u);
}

TEST(Dedupe, HandComputedGreedyResult) {
  // u1: 8 trigrams. u2 shares 4 of them (J = 4/12). u3 extends u1 by one
  // token (J = 8/9 > 0.8). u4 is disjoint. u5 repeats u2 (J = 1).
  const std::vector<ArgumentUnit> units{
      make_unit(1, "t0 t1 t2 t3 t4 t5 t6 t7 t8 t9"),
      make_unit(2, "t0 t1 t2 t3 t4 t5 y1 y2 y3 y4"),
      make_unit(3, "t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 x1"),
      make_unit(4, "w1 w2 w3 w4 w5"),
      make_unit(5, "t0 t1 t2 t3 t4 t5 y1 y2 y3 y4"),
  };
  EXPECT_NEAR(trigram_jaccard(units[0].sentence.tokens, units[1].sentence.tokens), 4.0 / 12.0, 1e-12);
  EXPECT_NEAR(trigram_jaccard(units[0].sentence.tokens, units[2].sentence.tokens), 8.0 / 9.0, 1e-12);
  const auto kept = dedupe(units, 0.8);
  EXPECT_EQ(ids_of(kept), (std::vector<std::string>{"u1", "u2", "u4"}));
  EXPECT_EQ(ids_of(dedupe(kept, 0.8)), ids_of(kept));
}

TEST(Dedupe, ShortSequencesAreSingleGrams) {
  EXPECT_EQ(trigram_jaccard(std::vector<std::string>{"a", "b"}, std::vector<std::string>{"a", "b"}), 1.0);
  EXPECT_EQ(trigram_jaccard(std::vector<std::string>{"a", "b"}, std::vector<std::string>{"a", "b", "c"}), 0.0);
}

// ---- clustering and assembly ----

TEST(Clustering, Singleton) {
  const std::vector<ArgumentUnit> one{make_unit(1, "Reactors produce waste that lasts")};
  const auto c = cluster_themes(one, std::vector<std::string>{"nuclear"});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].members.size(), 1u);
  EXPECT_EQ(c[0].cohesion, 1.0);
}

TEST(Clustering, TwoLexicalPairs) {
  const std::vector<ArgumentUnit> units{
      make_unit(1, "reactors produce uranium waste"),
      make_unit(2, "electricity prices raise employer costs"),
      make_unit(3, "uranium waste from reactors piles up"),
      make_unit(4, "employer costs follow electricity prices"),
  };
  const auto c = cluster_themes(units, std::vector<std::string>{"nuclear"}, ClusterOptions{2, 0.5});
  ASSERT_EQ(c.size(), 2u);
  std::set<std::set<std::string>> groups;
  for (const auto& cl : c) {
    std::set<std::string> g;
    for (const auto& m : cl.members) g.insert(m.id());
    groups.insert(g);
  }
  EXPECT_EQ(groups, (std::set<std::set<std::string>>{{"u1", "u3"}, {"u2", "u4"}}));
}

TEST(Clustering, IdenticalTextsFormOneCluster) {
  std::vector<ArgumentUnit> units;
  for (SentenceId i = 0; i < 5; ++i) units.push_back(make_unit(i, "school uniforms reduce clothing costs"));
  EXPECT_EQ(cluster_themes(units, std::vector<std::string>{"school", "uniforms"}).size(), 1u);
}

TEST(Clustering, RepresentativeAndEvidenceFolding) {
  const std::vector<ArgumentUnit> units{
      make_unit(1, "reactors produce uranium waste for decades", UnitKind::kClaim, 0.85),
      make_unit(2, "reactors produce uranium waste", UnitKind::kClaim, 0.85),
      make_unit(3, "reactors uranium waste survey", UnitKind::kEvidence, 0.1),
      make_unit(4, "tariffs exporters shipping", UnitKind::kEvidence, 0.1),
  };
  const auto c = cluster_themes(units, std::vector<std::string>{"nuclear"}, ClusterOptions{4, 0.5});
  std::size_t total = 0;
  for (const auto& cl : c) {
    total += cl.members.size();
    EXPECT_EQ(cl.representative_claim().kind, UnitKind::kClaim);
  }
  EXPECT_EQ(total, 4u);
  // Equal likelihood: the shorter sentence wins.
  EXPECT_EQ(c.front().representative_claim().id(), "u2");
}

TEST(Clustering, NoClaimsIsCompositionError) {
  const std::vector<ArgumentUnit> units{make_unit(1, "a survey of reactors", UnitKind::kEvidence, 0.1)};
  EXPECT_THROW(cluster_themes(units, std::vector<std::string>{"nuclear"}), CompositionError);
}

TEST(Clustering, PropertiesOnRandomSubsets) {
  const std::vector<std::string> vocab{"reactors", "waste", "uranium", "prices", "jobs", "workers",
                                       "safety", "plants", "rivers", "costs", "energy", "towns"};
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ArgumentUnit> units;
    const std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      std::string text;
      for (int w = 0; w < 5; ++w) text += vocab[rng() % vocab.size()] + " ";
      units.push_back(make_unit(static_cast<SentenceId>(i), text, i % 3 ? UnitKind::kClaim : UnitKind::kEvidence,
                                0.81 + 0.01 * static_cast<double>(rng() % 10)));
    }
    if (std::none_of(units.begin(), units.end(), [](const auto& u) { return u.kind == UnitKind::kClaim; })) continue;
    const std::size_t max_themes = 1 + rng() % 4;
    const auto c = cluster_themes(units, std::vector<std::string>{"nuclear"}, ClusterOptions{max_themes, 0.5});
    ASSERT_LE(c.size(), max_themes);
    std::multiset<std::string> seen;
    for (const auto& cl : c) {
      ASSERT_FALSE(cl.members.empty());
      for (const auto& m : cl.members) seen.insert(m.id());
    }
    ASSERT_EQ(seen.size(), n);
    ASSERT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), n);
    for (std::size_t i = 1; i < c.size(); ++i) ASSERT_GE(c[i - 1].members.size(), c[i].members.size());
  }
}

namespace {

std::vector<ThemeCluster> four_clusters() {
  const std::vector<ArgumentUnit> units{
      make_unit(1, "reactors produce uranium waste"),
      make_unit(2, "uranium waste from reactors piles up"),
      make_unit(3, "electricity prices rise for towns"),
      make_unit(4, "rivers warm near cooling plants"),
      make_unit(5, "workers find jobs at new sites"),
      make_unit(6, "a survey of rivers near plants", UnitKind::kEvidence, 0.2),
  };
  return cluster_themes(units, std::vector<std::string>{"nuclear", "energy"}, ClusterOptions{4, 0.5});
}

}  // namespace

TEST(Assembly, FourThemes) {
  const auto clusters = four_clusters();
  ASSERT_EQ(clusters.size(), 4u);
  const auto arg = assemble_argument(clusters, "nuclear energy", Stance::kPro, Framing::kUncontrolled, std::nullopt);
  EXPECT_TRUE(arg.intro.starts_with("The crowd raised four issues, explaining its views."));
  ASSERT_EQ(arg.themes.size(), 4u);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(arg.themes[i].label, clusters[i].label);
    labels.push_back(arg.themes[i].label);
  }
  EXPECT_EQ(enumerated_themes(arg.intro), labels);
  EXPECT_TRUE(arg.themes[0].opening.starts_with("Starting with"));
  EXPECT_TRUE(arg.themes[1].opening.starts_with("Turning to"));
  EXPECT_TRUE(arg.themes[3].opening.starts_with("Lastly") ||
              arg.themes[3].opening.starts_with("The last issue mentioned was"));
  EXPECT_FALSE(check_argument(arg, 4));
}

TEST(Assembly, SingleTheme) {
  const std::vector<ArgumentUnit> units{make_unit(1, "reactors produce uranium waste")};
  const auto clusters = cluster_themes(units, std::vector<std::string>{"nuclear"});
  const auto arg = assemble_argument(clusters, "nuclear", Stance::kCon, Framing::kBinding,
                                     framing_to_morals(Framing::kBinding));
  ASSERT_EQ(arg.themes.size(), 1u);
  EXPECT_EQ(enumerated_themes(arg.intro).size(), 1u);
  EXPECT_TRUE(arg.themes[0].opening.starts_with("Starting with"));
  EXPECT_THROW(assemble_argument({}, "x", Stance::kPro, std::nullopt, std::nullopt), CompositionError);
}

TEST(Assembly, ClaimsBeforeEvidenceByLikelihood) {
  const std::vector<ArgumentUnit> units{
      make_unit(1, "reactors waste uranium here", UnitKind::kEvidence, 0.1),
      make_unit(2, "reactors waste uranium there", UnitKind::kClaim, 0.85),
      make_unit(3, "reactors waste uranium now", UnitKind::kClaim, 0.95),
      make_unit(4, "reactors waste uranium soon", UnitKind::kClaim, 0.9),
  };
  const auto clusters = cluster_themes(units, std::vector<std::string>{"nuclear"}, ClusterOptions{1, 0.5});
  const auto arg = assemble_argument(clusters, "nuclear", Stance::kPro, std::nullopt, std::nullopt);
  EXPECT_EQ(ids_of(arg.themes[0].units), (std::vector<std::string>{"u3", "u4", "u2", "u1"}));
}

TEST(Rendering, DeterministicTraceableAndRoundTrips) {
  const auto arg = assemble_argument(four_clusters(), "nuclear energy", Stance::kPro, Framing::kIndividualizing,
                                     framing_to_morals(Framing::kIndividualizing));
  const auto text = render_text(arg);
  EXPECT_EQ(text, render_text(arg));
  EXPECT_TRUE(text.starts_with(arg.intro + "\n\n"));

  std::vector<std::string> expected;
  for (const auto& p : arg.themes)
    for (const auto& u : p.units) expected.push_back(u.id());
  EXPECT_EQ(trace_units(text, arg), expected);

  const auto back = argument_from_json(argument_to_json(arg));
  EXPECT_EQ(render_text(back), text);
  EXPECT_EQ(trace_units(render_text(back), back), expected);
  EXPECT_EQ(argument_to_json(back), argument_to_json(arg));

  auto tampered = text;
  tampered.insert(text.find("\n\n") + 2 + arg.themes[0].opening.size(), " Invented words here.");
  EXPECT_THROW(trace_units(tampered, arg), CompositionError);
}

TEST(Rendering, CheckArgumentFlagsBrokenInvariants) {
  auto arg = assemble_argument(four_clusters(), "nuclear energy", Stance::kPro, std::nullopt, std::nullopt);
  EXPECT_TRUE(check_argument(arg, 3).has_value());
  auto swapped = arg;
  std::swap(swapped.themes[0], swapped.themes[1]);
  EXPECT_TRUE(check_argument(swapped, 4).has_value());
  auto missing = arg;
  missing.provenance.erase(missing.provenance.begin());
  EXPECT_TRUE(check_argument(missing, 4).has_value());
}
