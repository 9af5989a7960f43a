#include "moral_debater/study.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

constexpr std::array<char, 3> kPositionIds = {'A', 'B', 'C'};

std::string hex_token(std::mt19937_64& rng) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

Framing framing_or_throw(const std::string& s) {
  auto f = parse_framing(s);
  if (!f) throw Error("unknown framing '" + s + "' in study store");
  return *f;
}

template <typename T>
T field(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  try {
    return body.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

Json session_to_json(const StudySession& s, const std::vector<StudyItemSpec>& specs) {
  Json items = Json::array();
  for (const auto& it : s.items) {
    Json display = Json::array();
    for (auto f : it.display) display.push_back(to_string(f));
    Json item = {{"topic", specs.at(it.spec).topic},
                 {"stance", to_string(specs.at(it.spec).stance)},
                 {"display", display}};
    item["ranking"] = it.ranking ? Json(*it.ranking) : Json(nullptr);
    items.push_back(std::move(item));
  }
  Json j = {{"id", s.id},
            {"participant", s.participant},
            {"ideology", to_string(s.ideology)},
            {"quiz_result", s.quiz_result},
            {"items", items},
            {"stances", s.stances}};
  j["questionnaire"] = s.questionnaire ? *s.questionnaire : Json(nullptr);
  return j;
}

StudySession session_from_json(const Json& j, const std::vector<StudyItemSpec>& specs) {
  StudySession s;
  s.id = j.at("id").get<std::string>();
  s.participant = j.at("participant").get<std::string>();
  s.ideology = parse_ideology(j.at("ideology").get<std::string>()).value_or(Ideology::kUnknown);
  s.quiz_result = j.at("quiz_result").get<std::string>();
  for (const auto& item : j.at("items")) {
    const auto topic = item.at("topic").get<std::string>();
    const auto stance = parse_stance(item.at("stance").get<std::string>());
    auto match = std::find_if(specs.begin(), specs.end(), [&](const StudyItemSpec& spec) {
      return spec.topic == topic && stance && spec.stance == *stance;
    });
    if (match == specs.end()) {
      throw Error("study store references '" + topic + "', which is not in the argument set");
    }
    ItemProgress p;
    p.spec = static_cast<std::size_t>(match - specs.begin());
    const auto& display = item.at("display");
    for (std::size_t i = 0; i < 3; ++i) p.display[i] = framing_or_throw(display.at(i).get<std::string>());
    if (!item.at("ranking").is_null()) p.ranking = item.at("ranking").get<std::array<int, 3>>();
    s.items.push_back(p);
  }
  s.stances = j.at("stances").get<std::map<std::string, int>>();
  if (!j.at("questionnaire").is_null()) s.questionnaire = j.at("questionnaire");
  return s;
}

Json progress_json(const StudySession& s) {
  const auto done = std::count_if(s.items.begin(), s.items.end(),
                                  [](const ItemProgress& p) { return p.ranking.has_value(); });
  return {{"done", done}, {"total", s.items.size()}};
}

// Index of the first unranked item, or nullopt when all are ranked.
std::optional<std::size_t> current_item(const StudySession& s) {
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (!s.items[i].ranking) return i;
  }
  return std::nullopt;
}

}  // namespace

std::vector<StudyItemSpec> load_study_items(const std::filesystem::path& batch_dir) {
  if (!std::filesystem::exists(batch_dir / "manifest.json")) {
    throw ValidationError(batch_dir.string() + " has no manifest.json");
  }
  const auto manifest = Json::parse(read_file(batch_dir / "manifest.json"));
  if (manifest.value("format", "") != "moral-debater-batch") {
    throw ValidationError(batch_dir.string() + " is not a batch-generate output directory");
  }
  std::vector<StudyItemSpec> items;
  std::vector<std::array<bool, 3>> present;
  for (const auto& entry : manifest.at("arguments")) {
    if (entry.at("status").get<std::string>() != "ok") continue;
    const auto topic = entry.at("topic").get<std::string>();
    const auto stance = parse_stance(entry.at("stance").get<std::string>());
    const auto framing = parse_framing(entry.at("framing").get<std::string>());
    if (!stance || !framing) throw ValidationError("batch manifest has a malformed entry");
    auto it = std::find_if(items.begin(), items.end(), [&](const StudyItemSpec& s) {
      return s.topic == topic && s.stance == *stance;
    });
    if (it == items.end()) {
      items.push_back({topic, *stance, {}});
      present.push_back({false, false, false});
      it = items.end() - 1;
    }
    const auto doc = Json::parse(read_file(batch_dir / entry.at("file").get<std::string>()));
    it->texts[static_cast<std::size_t>(*framing)] = doc.at("text").get<std::string>();
    present[static_cast<std::size_t>(it - items.begin())][static_cast<std::size_t>(*framing)] = true;
  }
  std::vector<StudyItemSpec> complete;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (present[i][0] && present[i][1] && present[i][2]) complete.push_back(std::move(items[i]));
  }
  return complete;
}

const std::map<std::string, std::vector<std::string>>& questionnaire_options() {
  static const std::map<std::string, std::vector<std::string>> kOptions = {
      {"views", {"matched", "challenged", "neither"}},
      {"knowledge", {"already_knew", "not_familiar", "neither"}},
      {"others_views", {"share", "oppose", "neither"}},
      {"effectiveness", {"your_views", "your_knowledge", "others_views"}},
  };
  return kOptions;
}

bool StudySession::complete() const {
  return questionnaire.has_value() &&
         std::all_of(items.begin(), items.end(),
                     [](const ItemProgress& p) { return p.ranking.has_value(); });
}

StudyStore::StudyStore(std::vector<StudyItemSpec> items, std::filesystem::path dir,
                       std::size_t snapshot_every, std::optional<std::uint64_t> seed)
    : items_(std::move(items)),
      dir_(std::move(dir)),
      snapshot_every_(std::max<std::size_t>(1, snapshot_every)),
      rng_(seed ? *seed : std::random_device{}()) {
  if (items_.empty()) throw ValidationError("study needs at least one complete item");
  std::filesystem::create_directories(dir_);
  replay();
  journal_.open(dir_ / "journal.jsonl", std::ios::app);
  if (!journal_) throw Error("cannot open study journal in " + dir_.string());
}

void StudyStore::replay() {
  const auto snap = dir_ / "snapshot.json";
  if (std::filesystem::exists(snap)) {
    const auto j = Json::parse(read_file(snap));
    seq_ = j.at("seq").get<std::uint64_t>();
    for (const auto& s : j.at("sessions")) {
      auto session = session_from_json(s, items_);
      order_.push_back(session.id);
      sessions_.emplace(session.id, std::move(session));
    }
  }
  const auto journal = dir_ / "journal.jsonl";
  if (!std::filesystem::exists(journal)) return;
  const auto text = read_file(journal);
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    Json event;
    try {
      event = Json::parse(lines[i]);
    } catch (const Json::parse_error&) {
      // A torn final line from a crash mid-write is dropped.
      if (i + 1 == lines.size()) break;
      throw ParseError("corrupt study journal entry", i + 1);
    }
    const auto seq = event.at("seq").get<std::uint64_t>();
    if (seq <= seq_) continue;
    apply(event);
    seq_ = seq;
    ++since_snapshot_;
  }
}

void StudyStore::apply(const Json& event) {
  const auto type = event.at("type").get<std::string>();
  if (type == "create") {
    auto session = session_from_json(event.at("session"), items_);
    order_.push_back(session.id);
    sessions_.emplace(session.id, std::move(session));
    return;
  }
  auto& s = find_locked(event.at("session").get<std::string>());
  if (type == "stance") {
    s.stances[event.at("topic").get<std::string>()] = event.at("value").get<int>();
  } else if (type == "ranking") {
    s.items.at(event.at("item").get<std::size_t>()).ranking =
        event.at("ranks").get<std::array<int, 3>>();
  } else if (type == "questionnaire") {
    s.questionnaire = event.at("answers");
  } else {
    throw Error("unknown study journal event '" + type + "'");
  }
}

void StudyStore::append(Json event) {
  event["seq"] = ++seq_;
  journal_ << event.dump() << '\n';
  journal_.flush();
  if (!journal_) throw Error("failed to write study journal");
  apply(event);
  if (++since_snapshot_ >= snapshot_every_) write_snapshot_locked();
}

void StudyStore::write_snapshot_locked() {
  Json sessions = Json::array();
  for (const auto& id : order_) sessions.push_back(session_to_json(sessions_.at(id), items_));
  const Json snap = {{"seq", seq_}, {"sessions", sessions}};
  const auto tmp = dir_ / "snapshot.json.tmp";
  write_file(tmp, snap.dump());
  std::filesystem::rename(tmp, dir_ / "snapshot.json");
  since_snapshot_ = 0;
}

void StudyStore::snapshot() {
  std::lock_guard lock(mu_);
  write_snapshot_locked();
}

StudySession& StudyStore::find_locked(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

const StudySession& StudyStore::find_locked(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

Json StudyStore::create_session(const Json& body) {
  const auto participant = field<std::string>(body, "participant");
  if (trim(participant).empty()) throw ValidationError("participant label is empty");
  Ideology ideology = Ideology::kUnknown;
  if (body.contains("ideology")) {
    auto parsed = parse_ideology(field<std::string>(body, "ideology"));
    if (!parsed) throw ValidationError("ideology must be liberal, conservative or unknown");
    ideology = *parsed;
  }
  std::string quiz;
  if (body.contains("quiz_result")) quiz = field<std::string>(body, "quiz_result");

  std::lock_guard lock(mu_);
  StudySession s;
  do {
    s.id = hex_token(rng_);
  } while (sessions_.count(s.id));
  s.participant = participant;
  s.ideology = ideology;
  s.quiz_result = quiz;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    ItemProgress p;
    p.spec = i;
    p.display = kAllFramings;
    std::shuffle(p.display.begin(), p.display.end(), rng_);
    s.items.push_back(p);
  }
  append({{"type", "create"}, {"session", session_to_json(s, items_)}});
  return {{"session_id", s.id}, {"items", items_.size()}};
}

Json StudyStore::next(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  const auto& s = find_locked(session_id);
  Json out = {{"session_id", s.id}, {"progress", progress_json(s)}};
  if (auto cur = current_item(s)) {
    const auto& item = s.items[*cur];
    const auto& spec = items_[item.spec];
    if (!s.stances.count(spec.topic)) {
      out["step"] = "stance";
      out["topic"] = spec.topic;
      out["scale"] = {{"min", 1}, {"max", 5}};
      return out;
    }
    out["step"] = "ranking";
    out["item"] = *cur;
    out["topic"] = spec.topic;
    out["stance"] = to_string(spec.stance);
    Json args = Json::array();
    for (std::size_t p = 0; p < 3; ++p) {
      args.push_back({{"id", std::string(1, kPositionIds[p])},
                      {"text", spec.texts[static_cast<std::size_t>(item.display[p])]}});
    }
    out["arguments"] = args;
    return out;
  }
  if (!s.questionnaire) {
    out["step"] = "questionnaire";
    out["conditions"] = kQuestionnaireConditions;
    out["questions"] = questionnaire_options();
    return out;
  }
  out["step"] = "done";
  return out;
}

Json StudyStore::submit_stance(const std::string& session_id, const Json& body) {
  const auto topic = field<std::string>(body, "topic");
  const auto value = field<int>(body, "value");
  if (value < 1 || value > 5) throw ValidationError("stance value must be 1-5");
  std::lock_guard lock(mu_);
  const auto& s = find_locked(session_id);
  if (s.stances.count(topic)) throw StateError("stance on '" + topic + "' already recorded");
  const auto cur = current_item(s);
  if (!cur || items_[s.items[*cur].spec].topic != topic) {
    throw StateError("the session is not waiting for a stance on '" + topic + "'");
  }
  append({{"type", "stance"}, {"session", session_id}, {"topic", topic}, {"value", value}});
  return {{"accepted", true}};
}

Json StudyStore::submit_ranking(const std::string& session_id, const Json& body) {
  const auto item = field<std::size_t>(body, "item");
  const auto ranks = field<std::vector<int>>(body, "ranks");
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::vector<int>{1, 2, 3}) {
    throw ValidationError("ranks must be a permutation of 1, 2, 3");
  }
  std::lock_guard lock(mu_);
  const auto& s = find_locked(session_id);
  if (item >= s.items.size()) throw ValidationError("item index out of range");
  if (s.items[item].ranking) throw StateError("item " + std::to_string(item) + " is already ranked");
  const auto cur = current_item(s);
  if (!cur || *cur != item) throw StateError("item " + std::to_string(item) + " is not current");
  if (!s.stances.count(items_[s.items[item].spec].topic)) {
    throw StateError("stance for this topic must be submitted first");
  }
  append({{"type", "ranking"}, {"session", session_id}, {"item", item}, {"ranks", ranks}});
  return {{"accepted", true}};
}

Json StudyStore::submit_questionnaire(const std::string& session_id, const Json& body) {
  if (!body.is_object()) throw ValidationError("questionnaire must be an object");
  const auto& options = questionnaire_options();
  Json answers = Json::object();
  for (auto condition : kQuestionnaireConditions) {
    const std::string cond(condition);
    if (!body.contains(cond) || !body.at(cond).is_object()) {
      throw ValidationError("questionnaire is missing the " + cond + " answers");
    }
    const auto& given = body.at(cond);
    for (const auto& [question, value] : given.items()) {
      if (!options.count(question)) throw ValidationError("unknown question '" + question + "'");
    }
    for (const auto& [question, opts] : options) {
      if (!given.contains(question) || !given.at(question).is_string()) {
        throw ValidationError("question '" + question + "' unanswered for " + cond);
      }
      const auto v = given.at(question).get<std::string>();
      if (std::find(opts.begin(), opts.end(), v) == opts.end()) {
        throw ValidationError("'" + v + "' is not an option of '" + question + "'");
      }
      answers[cond][question] = v;
    }
  }
  for (const auto& [key, value] : body.items()) {
    if (key != "empowering" && key != "challenging") {
      throw ValidationError("unknown questionnaire field '" + key + "'");
    }
  }
  std::lock_guard lock(mu_);
  const auto& s = find_locked(session_id);
  if (current_item(s)) throw StateError("questionnaire comes after all items are ranked");
  if (s.questionnaire) throw StateError("questionnaire already submitted");
  append({{"type", "questionnaire"}, {"session", session_id}, {"answers", answers}});
  return {{"accepted", true}, {"complete", true}};
}

std::vector<RankingRecord> StudyStore::records() const {
  std::lock_guard lock(mu_);
  std::vector<RankingRecord> out;
  for (const auto& id : order_) {
    const auto& s = sessions_.at(id);
    for (const auto& item : s.items) {
      if (!item.ranking) continue;
      const auto& spec = items_[item.spec];
      RankingRecord r;
      r.participant_id = s.id;
      r.ideology = s.ideology;
      r.topic = spec.topic;
      r.stance_presented = spec.stance;
      r.participant_stance = s.stances.at(spec.topic);
      r.relation = relation_for(r.participant_stance, r.stance_presented);
      for (std::size_t p = 0; p < 3; ++p) {
        r.ranks[static_cast<std::size_t>(item.display[p])] = (*item.ranking)[p];
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string StudyStore::export_jsonl() const {
  std::string out;
  for (const auto& r : records()) {
    Json j = to_json(r);
    j["type"] = "ranking";
    out += j.dump() + '\n';
  }
  std::lock_guard lock(mu_);
  for (const auto& id : order_) {
    const auto& s = sessions_.at(id);
    if (!s.questionnaire) continue;
    const Json j = {{"type", "questionnaire"},
                    {"participant_id", s.id},
                    {"participant", s.participant},
                    {"ideology", to_string(s.ideology)},
                    {"answers", *s.questionnaire}};
    out += j.dump() + '\n';
  }
  return out;
}

std::size_t StudyStore::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::optional<StudySession> StudyStore::session(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::vector<RankingRecord> read_exported_records(std::istream& in) {
  std::vector<RankingRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(e.what(), n);
    }
    if (j.value("type", "ranking") != "ranking") continue;
    out.push_back(ranking_record_from_json(j));
  }
  return out;
}

}  // namespace moral_debater
