#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "edurec/recommend.hpp"

namespace edurec::service {

struct SessionRecord {
  QuizSession session;
  // Artifact that grades this session, fixed at creation.
  std::string model_id;
  std::optional<FeatureVector> features;
  std::optional<Recommendation> recommendation;
  std::optional<double> performance_score;
};

// Append-only JSON-lines event log plus the in-memory index rebuilt from it.
//
// Event records (one per line):
//   {"type":"created","session":..,"student":..,"subject":..,"phase":..,
//    "questions":[..],"model":..}
//   {"type":"answer","session":..,"question":..,"option":n}
//   {"type":"scored","session":..,"features":{..},"performance_score"?:x,"group":n}
//   {"type":"recommended","session":..,"recommendation":{..}}
//
// A "group":n field opens a transaction of n events. Replay only applies a
// group once all its events are present, and drops a torn or unparsable
// tail, truncating the file back to the last complete record.
class SessionStore {
 public:
  // Empty path keeps the log in memory only.
  explicit SessionStore(std::filesystem::path log_path = {});

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  // Validates `events` against current state, appends them with a single
  // write, then applies them. Throws without side effects on invalid input.
  void commit(const std::vector<nlohmann::json>& events);

  std::optional<SessionRecord> get(const std::string& session_id) const;
  std::size_t session_count() const;
  std::vector<std::string> session_ids() const;
  // Events applied so far (after replay or commits).
  std::size_t event_count() const;
  // Records discarded from a torn tail during the last replay.
  std::size_t dropped_on_replay() const noexcept { return dropped_; }

  const std::filesystem::path& log_path() const noexcept { return path_; }

 private:
  using Index = std::map<std::string, SessionRecord>;

  static void apply(Index& index, const nlohmann::json& event);
  void replay();

  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  Index index_;
  std::size_t events_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace edurec::service
