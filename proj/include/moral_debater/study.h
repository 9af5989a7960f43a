#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "moral_debater/foundation.h"
#include "moral_debater/json_io.h"
#include "moral_debater/rank_stats.h"

namespace moral_debater {

// Submission arrived in the wrong step, or would revise a finished item.
class StateError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// One topic-stance pair with the rendered argument per framing.
struct StudyItemSpec {
  std::string topic;
  Stance stance = Stance::kPro;
  std::array<std::string, 3> texts;  // indexed by Framing
};

// Reads the manifest written by batch-generate and keeps the topic-stance
// pairs for which all three framings were produced, in manifest order.
std::vector<StudyItemSpec> load_study_items(const std::filesystem::path& batch_dir);

// Question ids and their option ids, identical for both conditions.
const std::map<std::string, std::vector<std::string>>& questionnaire_options();
inline constexpr std::array<std::string_view, 2> kQuestionnaireConditions = {"empowering",
                                                                             "challenging"};

struct ItemProgress {
  std::size_t spec = 0;
  std::array<Framing, 3> display{};            // position -> framing
  std::optional<std::array<int, 3>> ranking;   // position -> rank
};

struct StudySession {
  std::string id;
  std::string participant;
  Ideology ideology = Ideology::kUnknown;
  std::string quiz_result;
  std::vector<ItemProgress> items;
  std::map<std::string, int> stances;  // topic -> 1..5
  std::optional<Json> questionnaire;

  bool complete() const;
};

// Session state with an append-only journal (journal.jsonl) and periodic
// snapshots (snapshot.json) in `dir`. Every mutation is serialized through
// one mutex; the journal line is flushed before the call returns.
class StudyStore {
 public:
  StudyStore(std::vector<StudyItemSpec> items, std::filesystem::path dir,
             std::size_t snapshot_every = 50, std::optional<std::uint64_t> seed = std::nullopt);

  // Body: {participant, ideology?, quiz_result?}. Returns {session_id, items}.
  Json create_session(const Json& body);
  // Server-driven step: stance, ranking, questionnaire or done.
  Json next(const std::string& session_id) const;
  // Body: {topic, value}. The topic must be the one the next step asks for.
  Json submit_stance(const std::string& session_id, const Json& body);
  // Body: {item, ranks:[rank of A, rank of B, rank of C]}.
  Json submit_ranking(const std::string& session_id, const Json& body);
  // Body: {empowering:{question:option}, challenging:{...}}.
  Json submit_questionnaire(const std::string& session_id, const Json& body);

  std::vector<RankingRecord> records() const;
  // JSON lines: one document per ranking ("type":"ranking") and per
  // questionnaire ("type":"questionnaire").
  std::string export_jsonl() const;

  std::size_t session_count() const;
  std::optional<StudySession> session(const std::string& id) const;
  const std::vector<StudyItemSpec>& items() const { return items_; }

  // Writes a snapshot now.
  void snapshot();

 private:
  void replay();
  void apply(const Json& event);
  void append(Json event);
  void write_snapshot_locked();
  StudySession& find_locked(const std::string& id);
  const StudySession& find_locked(const std::string& id) const;

  std::vector<StudyItemSpec> items_;
  std::filesystem::path dir_;
  std::size_t snapshot_every_;
  mutable std::mutex mu_;
  std::mt19937_64 rng_;
  std::map<std::string, StudySession> sessions_;
  std::vector<std::string> order_;  // creation order
  std::uint64_t seq_ = 0;
  std::uint64_t since_snapshot_ = 0;
  std::ofstream journal_;
};

// Ranking records from an export file; questionnaire lines are skipped.
std::vector<RankingRecord> read_exported_records(std::istream& in);

}  // namespace moral_debater
