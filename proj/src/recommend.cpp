#include "edurec/recommend.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "edurec/rng.hpp"

namespace edurec {

using nlohmann::json;

std::string_view to_string(QuestionLevel level) noexcept {
  switch (level) {
    case QuestionLevel::basic:
      return "basic";
    case QuestionLevel::medium:
      return "medium";
    case QuestionLevel::high:
      return "high";
  }
  return "basic";
}

std::optional<QuestionLevel> parse_question_level(std::string_view token) noexcept {
  if (token == "basic") return QuestionLevel::basic;
  if (token == "medium") return QuestionLevel::medium;
  if (token == "high") return QuestionLevel::high;
  return std::nullopt;
}

QuizError::QuizError(Kind kind, const std::string& message,
                     std::vector<std::string> details)
    : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

std::string_view to_string(QuizError::Kind kind) noexcept {
  using K = QuizError::Kind;
  switch (kind) {
    case K::invalid_bank:
      return "invalid_bank";
    case K::insufficient_bank:
      return "insufficient_bank";
    case K::unknown_subject:
      return "unknown_subject";
    case K::unknown_question:
      return "unknown_question";
    case K::invalid_option:
      return "invalid_option";
    case K::duplicate_answer:
      return "duplicate_answer";
    case K::session_closed:
      return "session_closed";
    case K::incomplete:
      return "incomplete";
    case K::wrong_phase:
      return "wrong_phase";
    case K::invalid_label:
      return "invalid_label";
  }
  return "unknown";
}

QuestionBank::QuestionBank(std::vector<Question> questions)
    : questions_(std::move(questions)) {
  using K = QuizError::Kind;
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    const auto& q = questions_[i];
    if (q.id.empty() || q.subject.empty()) {
      throw QuizError(K::invalid_bank, "question " + std::to_string(i) +
                                           " has an empty id or subject");
    }
    if (q.options.size() < 2) {
      throw QuizError(K::invalid_bank, "question '" + q.id + "' needs at least two options");
    }
    if (q.correct >= q.options.size()) {
      throw QuizError(K::invalid_bank, "question '" + q.id + "' has correct index out of range");
    }
    if (!by_id_.emplace(q.id, i).second) {
      throw QuizError(K::invalid_bank, "duplicate question id '" + q.id + "'");
    }
  }
}

QuestionBank QuestionBank::from_json(const json& doc) {
  std::vector<Question> questions;
  try {
    for (const auto& j : doc.at("questions")) {
      Question q;
      q.id = j.at("id").get<std::string>();
      q.subject = j.at("subject").get<std::string>();
      const auto level = parse_question_level(j.at("level").get<std::string>());
      if (!level) {
        throw QuizError(QuizError::Kind::invalid_bank,
                        "question '" + q.id + "' has an unknown level");
      }
      q.level = *level;
      q.prompt = j.at("prompt").get<std::string>();
      q.options = j.at("options").get<std::vector<std::string>>();
      q.correct = j.at("correct").get<std::size_t>();
      questions.push_back(std::move(q));
    }
  } catch (const json::exception& e) {
    throw QuizError(QuizError::Kind::invalid_bank,
                    std::string("malformed question bank: ") + e.what());
  }
  return QuestionBank(std::move(questions));
}

QuestionBank QuestionBank::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw QuizError(QuizError::Kind::invalid_bank,
                    "cannot open question bank '" + path.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw QuizError(QuizError::Kind::invalid_bank,
                    "question bank is not valid JSON: " + std::string(e.what()));
  }
  return from_json(doc);
}

const Question* QuestionBank::find(std::string_view id) const noexcept {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &questions_[it->second];
}

const Question& QuestionBank::at(std::string_view id) const {
  if (const auto* q = find(id)) return *q;
  throw QuizError(QuizError::Kind::unknown_question,
                  "unknown question '" + std::string(id) + "'");
}

std::vector<std::string> QuestionBank::subjects() const {
  std::set<std::string> s;
  for (const auto& q : questions_) s.insert(q.subject);
  return {s.begin(), s.end()};
}

bool QuestionBank::has_subject(std::string_view subject) const {
  return std::any_of(questions_.begin(), questions_.end(),
                     [&](const Question& q) { return q.subject == subject; });
}

std::vector<Question> select_questions(const QuestionBank& bank, std::string_view subject,
                                       int per_level, std::uint64_t seed) {
  if (per_level < 1) throw std::invalid_argument("per_level must be >= 1");
  if (!bank.has_subject(subject)) {
    throw QuizError(QuizError::Kind::unknown_subject,
                    "no questions for subject '" + std::string(subject) + "'");
  }
  std::vector<Question> out;
  out.reserve(3 * static_cast<std::size_t>(per_level));
  constexpr std::array levels{QuestionLevel::basic, QuestionLevel::medium, QuestionLevel::high};
  for (std::size_t li = 0; li < levels.size(); ++li) {
    std::vector<const Question*> pool;
    for (const auto& q : bank.questions()) {
      if (q.subject == subject && q.level == levels[li]) pool.push_back(&q);
    }
    const auto need = static_cast<std::size_t>(per_level);
    if (pool.size() < need) {
      throw QuizError(QuizError::Kind::insufficient_bank,
                      "subject '" + std::string(subject) + "' has " +
                          std::to_string(pool.size()) + " " +
                          std::string(to_string(levels[li])) + "-level questions, " +
                          std::to_string(need) + " required",
                      {std::string(to_string(levels[li]))});
    }
    SplitMix64 rng(derive_seed(seed, li));
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
      out.push_back(*pool[i]);
    }
  }
  return out;
}

std::uint64_t session_seed(std::uint64_t base_seed, std::string_view session_id) noexcept {
  return derive_seed(base_seed, fnv1a64(session_id));
}

std::string_view to_string(Phase phase) noexcept {
  return phase == Phase::followup ? "followup" : "prerequisite";
}

std::optional<Phase> parse_phase(std::string_view token) noexcept {
  if (token == "prerequisite") return Phase::prerequisite;
  if (token == "followup") return Phase::followup;
  return std::nullopt;
}

std::string_view to_string(SessionStatus status) noexcept {
  return status == SessionStatus::scored ? "scored" : "open";
}

Row FeatureVector::to_row() const { return edurec::to_row(subject, bla, mla, hla, avg_score); }

json FeatureVector::to_json() const {
  return {{"subject", subject}, {"bla", bla}, {"mla", mla}, {"hla", hla}, {"avg_score", avg_score}};
}

bool QuizSession::is_assigned(std::string_view question_id) const {
  return std::find(question_ids.begin(), question_ids.end(), question_id) !=
         question_ids.end();
}

std::vector<std::string> QuizSession::unanswered() const {
  std::vector<std::string> out;
  for (const auto& id : question_ids) {
    if (!answers.contains(id)) out.push_back(id);
  }
  return out;
}

void QuizSession::record_answer(const QuestionBank& bank, const std::string& question_id,
                                std::size_t option) {
  using K = QuizError::Kind;
  if (status != SessionStatus::open) {
    throw QuizError(K::session_closed, "session '" + id + "' is already scored");
  }
  if (!is_assigned(question_id)) {
    throw QuizError(K::unknown_question,
                    "question '" + question_id + "' is not part of session '" + id + "'");
  }
  if (answers.contains(question_id)) {
    throw QuizError(K::duplicate_answer,
                    "question '" + question_id + "' was already answered");
  }
  if (option >= bank.at(question_id).options.size()) {
    throw QuizError(K::invalid_option, "option " + std::to_string(option) +
                                           " out of range for question '" + question_id + "'");
  }
  answers.emplace(question_id, option);
}

FeatureVector score_session(QuizSession& session, const QuestionBank& bank) {
  using K = QuizError::Kind;
  if (session.status != SessionStatus::open) {
    throw QuizError(K::session_closed, "session '" + session.id + "' is already scored");
  }
  if (auto missing = session.unanswered(); !missing.empty()) {
    throw QuizError(K::incomplete,
                    std::to_string(missing.size()) + " question(s) unanswered",
                    std::move(missing));
  }
  std::array<int, 3> assigned{};
  std::array<int, 3> correct{};
  for (const auto& qid : session.question_ids) {
    const auto& q = bank.at(qid);
    const auto li = static_cast<std::size_t>(q.level);
    ++assigned[li];
    if (session.answers.at(qid) == q.correct) ++correct[li];
  }
  const int per_level = std::max({assigned[0], assigned[1], assigned[2], 1});
  FeatureVector fv;
  fv.subject = session.subject;
  fv.bla = correct[0];
  fv.mla = correct[1];
  fv.hla = correct[2];
  fv.avg_score = compute_average_score(fv.bla, fv.mla, fv.hla, per_level);
  session.status = SessionStatus::scored;
  return fv;
}

json Recommendation::to_json() const {
  return {{"course", course},
          {"level", std::string(edurec::to_string(level))},
          {"confidence", confidence},
          {"model_id", model_id}};
}

Recommendation recommend(const TrainedModel& model, const FeatureVector& features,
                         std::string_view model_id) {
  if (model_schema(model) != Dataset::schema()) {
    throw SchemaMismatch("model was not trained on the student-record schema");
  }
  const auto prediction = predict(model, features.to_row());
  const auto label = CourseLabel::parse(prediction.label);
  if (!label) {
    throw QuizError(QuizError::Kind::invalid_label,
                    "model produced label '" + prediction.label +
                        "' that is not <course>-<level>; artifact may be corrupt");
  }
  return {label->course, label->level, prediction.confidence, std::string(model_id)};
}

double followup_performance(QuizSession& session, const QuestionBank& bank) {
  if (session.phase != Phase::followup) {
    throw QuizError(QuizError::Kind::wrong_phase,
                    "session '" + session.id + "' is not a follow-up session");
  }
  return score_session(session, bank).avg_score;
}

}  // namespace edurec
