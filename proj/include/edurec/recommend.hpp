#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "edurec/dataset.hpp"
#include "edurec/model.hpp"

namespace edurec {

enum class QuestionLevel { basic, medium, high };

std::string_view to_string(QuestionLevel level) noexcept;
std::optional<QuestionLevel> parse_question_level(std::string_view token) noexcept;

struct Question {
  std::string id;
  std::string subject;
  QuestionLevel level = QuestionLevel::basic;
  std::string prompt;
  std::vector<std::string> options;
  std::size_t correct = 0;
};

// Failure in the quiz workflow. `details` carries structured extras such as
// the ids of unanswered questions.
class QuizError : public std::runtime_error {
 public:
  enum class Kind {
    invalid_bank,
    insufficient_bank,
    unknown_subject,
    unknown_question,
    invalid_option,
    duplicate_answer,
    session_closed,
    incomplete,
    wrong_phase,
    invalid_label,
  };

  QuizError(Kind kind, const std::string& message,
            std::vector<std::string> details = {});

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  Kind kind_;
  std::vector<std::string> details_;
};

std::string_view to_string(QuizError::Kind kind) noexcept;

class QuestionBank {
 public:
  QuestionBank() = default;
  // Validates unique ids, at least two options and an in-range correct index.
  explicit QuestionBank(std::vector<Question> questions);

  // {"questions": [{id, subject, level, prompt, options, correct}, ...]}
  static QuestionBank from_json(const nlohmann::json& doc);
  static QuestionBank load(const std::filesystem::path& path);

  const std::vector<Question>& questions() const noexcept { return questions_; }
  const Question* find(std::string_view id) const noexcept;
  const Question& at(std::string_view id) const;
  std::vector<std::string> subjects() const;
  bool has_subject(std::string_view subject) const;

 private:
  std::vector<Question> questions_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Samples per_level questions of each level for `subject` without
// replacement, ordered basic block, medium block, high block.
std::vector<Question> select_questions(const QuestionBank& bank, std::string_view subject,
                                       int per_level, std::uint64_t seed);

// Sampling seed for a session, so retakes (new ids) draw different questions.
std::uint64_t session_seed(std::uint64_t base_seed, std::string_view session_id) noexcept;

enum class Phase { prerequisite, followup };
enum class SessionStatus { open, scored };

std::string_view to_string(Phase phase) noexcept;
std::optional<Phase> parse_phase(std::string_view token) noexcept;
std::string_view to_string(SessionStatus status) noexcept;

struct FeatureVector {
  std::string subject;
  int bla = 0;
  int mla = 0;
  int hla = 0;
  double avg_score = 0.0;

  Row to_row() const;
  nlohmann::json to_json() const;
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct QuizSession {
  std::string id;
  std::string student;
  std::string subject;
  Phase phase = Phase::prerequisite;
  std::vector<std::string> question_ids;
  std::map<std::string, std::size_t> answers;
  SessionStatus status = SessionStatus::open;

  bool is_assigned(std::string_view question_id) const;
  std::vector<std::string> unanswered() const;

  // Rejects answers to unassigned questions, repeats, out-of-range options
  // and answers to a scored session; the session is unchanged on error.
  void record_answer(const QuestionBank& bank, const std::string& question_id,
                     std::size_t option);
};

// Counts correct answers per level and derives avg_score. Moves the session
// from open to scored.
FeatureVector score_session(QuizSession& session, const QuestionBank& bank);

struct Recommendation {
  std::string course;
  Level level = Level::beginner;
  double confidence = 0.0;
  std::string model_id;

  std::string label() const { return CourseLabel{course, level}.str(); }
  nlohmann::json to_json() const;
  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// Confidence is leaf purity (tree), vote fraction (forest) or posterior (naive Bayes).
Recommendation recommend(const TrainedModel& model, const FeatureVector& features,
                         std::string_view model_id = {});

// Follow-up phase: scores the session and returns avg_score only.
double followup_performance(QuizSession& session, const QuestionBank& bank);

}  // namespace edurec
