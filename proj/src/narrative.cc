#include "moral_debater/narrative.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

std::set<std::string> trigram_set(std::span<const std::string> tokens) {
  std::set<std::string> grams;
  if (tokens.size() < 3) {
    std::vector<std::string> all(tokens.begin(), tokens.end());
    grams.insert(join(all, " "));
    return grams;
  }
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    grams.insert(tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2]);
  }
  return grams;
}

using SparseVector = std::vector<std::pair<std::size_t, double>>;  // sorted by term id

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      s += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

struct TermSpace {
  std::vector<std::string> terms;
  std::vector<SparseVector> vectors;  // L2-normalized tf-idf per unit
};

bool is_content_term(const std::string& tok, std::span<const std::string> topic) {
  if (tok.size() < 2 || is_stopword(tok)) return false;
  if (std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  return std::find(topic.begin(), topic.end(), tok) == topic.end();
}

TermSpace build_term_space(std::span<const ArgumentUnit> units, std::span<const std::string> topic) {
  TermSpace space;
  std::map<std::string, std::size_t> ids;
  std::vector<std::map<std::size_t, double>> tf(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& s = units[u].sentence;
    // Marker tokens are argumentative scaffolding, not theme vocabulary.
    std::vector<bool> marker(s.tokens.size(), false);
    for (const auto* spans : {&s.markers.sentiment, &s.markers.causality, &s.markers.evidence_cue}) {
      for (const auto& sp : *spans) {
        for (auto i = sp.begin; i < sp.end && i < marker.size(); ++i) marker[i] = true;
      }
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& tok = s.tokens[i];
      if (marker[i] || !is_content_term(tok, topic)) continue;
      auto [it, inserted] = ids.emplace(tok, ids.size());
      if (inserted) space.terms.push_back(tok);
      tf[u][it->second] += 1.0;
    }
  }
  std::vector<double> df(space.terms.size(), 0.0);
  for (const auto& row : tf) {
    for (const auto& [t, _] : row) df[t] += 1.0;
  }
  const double n = static_cast<double>(units.size());
  for (const auto& row : tf) {
    SparseVector v;
    double norm = 0.0;
    for (const auto& [t, count] : row) {
      const double w = count * (std::log((1.0 + n) / (1.0 + df[t])) + 1.0);
      v.emplace_back(t, w);
      norm += w * w;
    }
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (auto& [_, w] : v) w /= norm;
    }
    space.vectors.push_back(std::move(v));
  }
  return space;
}

bool has_claim(const std::vector<std::size_t>& members, std::span<const ArgumentUnit> units) {
  return std::any_of(members.begin(), members.end(),
                     [&](std::size_t i) { return units[i].kind == UnitKind::kClaim; });
}

// Higher claim likelihood, then fewer tokens, then lower sentence id.
bool better_representative(const ArgumentUnit& a, const ArgumentUnit& b) {
  if (a.claim_likelihood != b.claim_likelihood) return a.claim_likelihood > b.claim_likelihood;
  if (a.sentence.tokens.size() != b.sentence.tokens.size()) {
    return a.sentence.tokens.size() < b.sentence.tokens.size();
  }
  return a.sentence.id < b.sentence.id;
}

bool likelier(const ArgumentUnit& a, const ArgumentUnit& b) {
  if (a.likelihood() != b.likelihood()) return a.likelihood() > b.likelihood();
  return a.sentence.id < b.sentence.id;
}

constexpr std::array<std::string_view, 11> kNumberWords = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

std::string number_word(std::size_t n) {
  return n < kNumberWords.size() ? std::string(kNumberWords[n]) : std::to_string(n);
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

constexpr std::string_view kIntroHead = "The crowd raised ";
constexpr std::string_view kEnumerationLead = "We will hear about ";

std::string opening_for(std::size_t position, std::size_t count, const std::string& label) {
  if (position == 0) return "Starting with " + label + ".";
  if (position + 1 == count) {
    return count % 2 == 0 ? "Lastly, " + label + "." : "The last issue mentioned was " + label + ".";
  }
  return position % 2 == 1 ? "Turning to " + label + "." : capitalize(label) + " was also mentioned.";
}

Json unit_to_json(const ArgumentUnit& u) {
  Json j = {{"id", u.id()},
            {"sentence_id", u.sentence.id},
            {"text", u.sentence.text},
            {"kind", to_string(u.kind)},
            {"morals", u.morals},
            {"claim_likelihood", u.claim_likelihood},
            {"evidence_likelihood", u.evidence_likelihood},
            {"stance_score", u.stance_score}};
  if (u.claim_span) j["claim_span"] = {u.claim_span->begin, u.claim_span->end};
  return j;
}

ArgumentUnit unit_from_json(const Json& j, const std::map<std::string, UnitProvenance>& prov) {
  ArgumentUnit u;
  const auto id = j.at("id").get<std::string>();
  u.sentence.text = j.at("text").get<std::string>();
  u.sentence.tokens = tokenize(u.sentence.text);
  if (auto it = prov.find(id); it != prov.end()) {
    u.sentence.id = it->second.sentence_id;
    u.sentence.doc_id = it->second.doc_id;
  } else {
    u.sentence.id = j.at("sentence_id").get<SentenceId>();
  }
  auto kind = parse_unit_kind(j.at("kind").get<std::string>());
  if (!kind) throw ValidationError("unknown unit kind in argument document");
  u.kind = *kind;
  u.morals = j.at("morals").get<MoralSet>();
  u.claim_likelihood = j.at("claim_likelihood").get<double>();
  u.evidence_likelihood = j.at("evidence_likelihood").get<double>();
  u.stance_score = j.at("stance_score").get<double>();
  if (j.contains("claim_span")) {
    u.claim_span = TokenSpan{j["claim_span"].at(0).get<std::uint32_t>(),
                             j["claim_span"].at(1).get<std::uint32_t>()};
  }
  return u;
}

}  // namespace

double trigram_jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  const auto ga = trigram_set(a);
  const auto gb = trigram_set(b);
  std::size_t common = 0;
  for (const auto& g : ga) common += gb.count(g);
  const std::size_t uni = ga.size() + gb.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<ArgumentUnit> dedupe(std::span<const ArgumentUnit> units, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("dedupe threshold must lie in [0,1]");
  }
  std::vector<ArgumentUnit> kept;
  std::vector<std::set<std::string>> kept_grams;
  for (const auto& u : units) {
    const auto grams = trigram_set(u.sentence.tokens);
    bool redundant = false;
    for (const auto& other : kept_grams) {
      std::size_t common = 0;
      for (const auto& g : grams) common += other.count(g);
      const std::size_t uni = grams.size() + other.size() - common;
      const double sim = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
      if (sim > threshold) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    kept.push_back(u);
    kept_grams.push_back(grams);
  }
  return kept;
}

std::vector<ThemeCluster> cluster_themes(std::span<const ArgumentUnit> units,
                                         std::span<const std::string> topic,
                                         const ClusterOptions& options) {
  if (options.max_themes == 0) throw ValidationError("max_themes must be positive");
  if (std::none_of(units.begin(), units.end(),
                   [](const ArgumentUnit& u) { return u.kind == UnitKind::kClaim; })) {
    throw CompositionError("insufficient claims");
  }
  const auto space = build_term_space(units, topic);
  const std::size_t n = units.size();

  std::vector<std::vector<double>> unit_sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    unit_sim[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      unit_sim[i][j] = unit_sim[j][i] = dot(space.vectors[i], space.vectors[j]);
    }
  }

  // Active clusters, each a list of unit indices; linkage matrix kept by
  // Lance-Williams updates for average linkage.
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  std::vector<std::vector<double>> link = unit_sim;
  std::vector<bool> alive(n, true);
  std::size_t alive_count = n;

  auto merge = [&](std::size_t a, std::size_t b) {
    const double na = static_cast<double>(clusters[a].size());
    const double nb = static_cast<double>(clusters[b].size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == a || k == b) continue;
      link[a][k] = link[k][a] = (na * link[a][k] + nb * link[b][k]) / (na + nb);
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    std::sort(clusters[a].begin(), clusters[a].end());
    clusters[b].clear();
    alive[b] = false;
    --alive_count;
  };

  while (alive_count > 1) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (link[i][j] > best) {
          best = link[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (alive_count <= options.max_themes && best < options.merge_similarity) break;
    merge(bi, bj);
  }

  // Fold claim-free clusters into the nearest claim-bearing one.
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i] || has_claim(clusters[i], units)) continue;
    std::size_t target = n;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !alive[j] || !has_claim(clusters[j], units)) continue;
      if (link[i][j] > best) {
        best = link[i][j];
        target = j;
      }
    }
    merge(target, i);
  }

  std::vector<ThemeCluster> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    ThemeCluster c;
    const auto& idx = clusters[i];
    for (auto u : idx) c.members.push_back(units[u]);
    std::optional<std::size_t> rep;
    for (std::size_t m = 0; m < c.members.size(); ++m) {
      if (c.members[m].kind != UnitKind::kClaim) continue;
      if (!rep || better_representative(c.members[m], c.members[*rep])) rep = m;
    }
    c.representative = *rep;
    if (idx.size() > 1) {
      double total = 0.0;
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
          total += unit_sim[idx[a]][idx[b]];
          ++pairs;
        }
      }
      c.cohesion = total / static_cast<double>(pairs);
    }
    out.push_back(std::move(c));
  }

  std::sort(out.begin(), out.end(), [](const ThemeCluster& a, const ThemeCluster& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    const auto& ra = a.representative_claim();
    const auto& rb = b.representative_claim();
    if (ra.claim_likelihood != rb.claim_likelihood) return ra.claim_likelihood > rb.claim_likelihood;
    return ra.sentence.id < rb.sentence.id;
  });

  // Labels: highest summed tf-idf term not already used by an earlier theme.
  std::unordered_map<SentenceId, std::size_t> position;
  for (std::size_t i = 0; i < units.size(); ++i) position.emplace(units[i].sentence.id, i);
  std::set<std::string> used;
  for (auto& c : out) {
    std::map<std::string, double> score;
    for (const auto& m : c.members) {
      for (const auto& [t, w] : space.vectors[position.at(m.sentence.id)]) score[space.terms[t]] += w;
    }
    std::vector<std::pair<std::string, double>> ranked(score.begin(), score.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [term, _] : ranked) {
      if (!used.count(term)) {
        c.label = term;
        break;
      }
    }
    if (c.label.empty()) c.label = ranked.empty() ? join({topic.begin(), topic.end()}, " ") : ranked.front().first;
    used.insert(c.label);
  }
  return out;
}

std::string ThemeParagraph::text() const {
  std::string out = opening;
  for (const auto& u : units) {
    out += ' ';
    out += u.sentence.text;
  }
  return out;
}

std::vector<std::string> enumerated_themes(std::string_view intro) {
  std::vector<std::string> labels;
  auto pos = intro.find(kEnumerationLead);
  std::string_view list;
  if (pos != std::string_view::npos) {
    list = intro.substr(pos + kEnumerationLead.size());
  } else if ((pos = intro.find(": ")) != std::string_view::npos) {
    list = intro.substr(pos + 2);
  } else {
    return labels;
  }
  if (!list.empty() && list.back() == '.') list.remove_suffix(1);
  std::string rest(list);
  if (const auto last_and = rest.rfind(" and "); last_and != std::string::npos) {
    rest.replace(last_and, 5, ", ");
  }
  for (auto part : split(rest, ',')) {
    const auto label = trim(part);
    if (!label.empty()) labels.emplace_back(label);
  }
  return labels;
}

MoralArgument assemble_argument(std::span<const ThemeCluster> clusters, std::string_view topic,
                                Stance stance, std::optional<Framing> framing,
                                std::optional<MoralSet> target_morals) {
  if (clusters.empty()) throw CompositionError("no themes to assemble");
  MoralArgument arg;
  arg.topic = std::string(topic);
  arg.stance = stance;
  arg.framing = framing;
  arg.target_morals = target_morals;

  const std::size_t count = clusters.size();
  std::vector<std::string> labels;
  for (const auto& c : clusters) labels.push_back(c.label);
  if (count == 1) {
    arg.intro = std::string(kIntroHead) + "one issue, explaining its views: " + labels[0] + ".";
  } else {
    std::string list;
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) list += (i + 1 == count) ? " and " : ", ";
      list += labels[i];
    }
    arg.intro = std::string(kIntroHead) + number_word(count) +
                " issues, explaining its views. " + std::string(kEnumerationLead) + list + ".";
  }

  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = clusters[i];
    ThemeParagraph p;
    p.label = c.label;
    p.opening = opening_for(i, count, c.label);
    const auto& rep = c.representative_claim();
    p.representative_claim_id = rep.id();
    p.units.push_back(rep);
    std::vector<ArgumentUnit> claims, evidence;
    for (std::size_t m = 0; m < c.members.size(); ++m) {
      if (m == c.representative) continue;
      (c.members[m].kind == UnitKind::kClaim ? claims : evidence).push_back(c.members[m]);
    }
    std::sort(claims.begin(), claims.end(), likelier);
    std::sort(evidence.begin(), evidence.end(), likelier);
    p.units.insert(p.units.end(), claims.begin(), claims.end());
    p.units.insert(p.units.end(), evidence.begin(), evidence.end());
    for (const auto& u : p.units) {
      arg.provenance[u.id()] = UnitProvenance{u.sentence.id, u.sentence.doc_id};
    }
    arg.themes.push_back(std::move(p));
  }
  return arg;
}

std::string render_text(const MoralArgument& argument) {
  std::string out = argument.intro;
  for (const auto& p : argument.themes) {
    out += "\n\n";
    out += p.text();
  }
  out += '\n';
  return out;
}

std::vector<std::string> trace_units(std::string_view rendered, const MoralArgument& argument) {
  std::vector<std::string> ids;
  std::string_view rest = rendered;
  auto consume = [&](std::string_view piece) {
    rest = trim(rest);
    if (rest.substr(0, piece.size()) != piece) return false;
    rest.remove_prefix(piece.size());
    return true;
  };
  if (!consume(argument.intro)) throw CompositionError("rendered text does not start with the intro");
  for (const auto& p : argument.themes) {
    if (!consume(p.opening)) {
      throw CompositionError("missing paragraph opening '" + p.opening + "'");
    }
    // Longest matching unit text first, so a sentence that prefixes another
    // cannot shadow it.
    std::vector<const ArgumentUnit*> candidates;
    for (const auto& u : p.units) candidates.push_back(&u);
    std::sort(candidates.begin(), candidates.end(), [](const auto* a, const auto* b) {
      return a->sentence.text.size() > b->sentence.text.size();
    });
    for (std::size_t k = 0; k < p.units.size(); ++k) {
      const ArgumentUnit* hit = nullptr;
      for (const auto* u : candidates) {
        if (consume(u->sentence.text)) {
          hit = u;
          break;
        }
      }
      if (!hit) throw CompositionError("non-extractive content in theme '" + p.label + "'");
      ids.push_back(hit->id());
    }
  }
  if (!trim(rest).empty()) throw CompositionError("trailing content after the last paragraph");
  return ids;
}

std::optional<std::string> check_argument(const MoralArgument& argument, std::size_t max_themes) {
  if (argument.themes.empty()) return "argument has no themes";
  if (argument.themes.size() > max_themes) return "argument has more than max_themes themes";
  std::vector<std::string> labels;
  for (const auto& p : argument.themes) labels.push_back(p.label);
  if (enumerated_themes(argument.intro) != labels) {
    return "intro enumeration disagrees with paragraph themes";
  }
  std::set<std::string> seen;
  for (const auto& p : argument.themes) {
    if (p.units.empty()) return "theme '" + p.label + "' has no sentences";
    if (p.units.front().id() != p.representative_claim_id ||
        p.units.front().kind != UnitKind::kClaim) {
      return "theme '" + p.label + "' does not open with its representative claim";
    }
    for (const auto& u : p.units) {
      if (!seen.insert(u.id()).second) return "unit " + u.id() + " appears twice";
      auto it = argument.provenance.find(u.id());
      if (it == argument.provenance.end() || it->second.sentence_id != u.sentence.id) {
        return "unit " + u.id() + " lacks provenance";
      }
    }
  }
  if (seen.size() != argument.provenance.size()) return "provenance lists units not in the text";
  try {
    const auto traced = trace_units(render_text(argument), argument);
    if (traced.size() != seen.size()) return "rendered text does not map onto units";
  } catch (const CompositionError& e) {
    return e.what();
  }
  return std::nullopt;
}

Json argument_to_json(const MoralArgument& argument) {
  Json themes = Json::array();
  for (const auto& p : argument.themes) {
    Json sentences = Json::array();
    for (const auto& u : p.units) sentences.push_back(unit_to_json(u));
    themes.push_back({{"label", p.label},
                      {"opening", p.opening},
                      {"representative_claim_id", p.representative_claim_id},
                      {"sentences", sentences}});
  }
  Json provenance = Json::object();
  for (const auto& [id, origin] : argument.provenance) {
    provenance[id] = {{"sentence_id", origin.sentence_id}, {"doc_id", origin.doc_id}};
  }
  Json j = {{"topic", argument.topic},
            {"stance", to_string(argument.stance)},
            {"framing", argument.framing ? std::string(to_string(*argument.framing)) : "custom"},
            {"intro", argument.intro},
            {"themes", themes},
            {"provenance", provenance}};
  j["target_morals"] = argument.target_morals ? Json(*argument.target_morals) : Json(nullptr);
  return j;
}

MoralArgument argument_from_json(const Json& j) {
  MoralArgument arg;
  arg.topic = j.at("topic").get<std::string>();
  auto stance = parse_stance(j.at("stance").get<std::string>());
  if (!stance) throw ValidationError("argument document has an unknown stance");
  arg.stance = *stance;
  const auto framing = j.at("framing").get<std::string>();
  if (framing != "custom") {
    arg.framing = parse_framing(framing);
    if (!arg.framing) throw ValidationError("argument document has an unknown framing");
  }
  if (j.contains("target_morals") && !j.at("target_morals").is_null()) {
    arg.target_morals = j.at("target_morals").get<MoralSet>();
  }
  arg.intro = j.at("intro").get<std::string>();
  for (const auto& [id, origin] : j.at("provenance").items()) {
    arg.provenance[id] = UnitProvenance{origin.at("sentence_id").get<SentenceId>(),
                                        origin.at("doc_id").get<std::string>()};
  }
  for (const auto& t : j.at("themes")) {
    ThemeParagraph p;
    p.label = t.at("label").get<std::string>();
    p.opening = t.at("opening").get<std::string>();
    p.representative_claim_id = t.at("representative_claim_id").get<std::string>();
    for (const auto& s : t.at("sentences")) p.units.push_back(unit_from_json(s, arg.provenance));
    arg.themes.push_back(std::move(p));
  }
  return arg;
}

}  // namespace moral_debater
