#include "edurec/service/quiz_service.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace edurec::service {

using nlohmann::json;

namespace {

constexpr const char* kLogFile = "sessions.log";
constexpr const char* kActivePointer = "active_model";

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::string model_id_for(const std::filesystem::path& path) {
  return std::filesystem::absolute(path).lexically_normal().string();
}

json questions_payload(const QuestionBank& bank, const std::vector<std::string>& ids) {
  json out = json::array();
  for (const auto& id : ids) {
    const auto& q = bank.at(id);
    out.push_back({{"id", q.id},
                   {"prompt", q.prompt},
                   {"options", q.options},
                   {"level", std::string(to_string(q.level))}});
  }
  return out;
}

json result_payload(const SessionRecord& rec) {
  if (rec.session.status != SessionStatus::scored) return nullptr;
  if (rec.performance_score) return {{"performance_score", *rec.performance_score}};
  json out{{"features", rec.features ? rec.features->to_json() : json(nullptr)}};
  out["recommendation"] = rec.recommendation ? rec.recommendation->to_json() : json(nullptr);
  return out;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& doc, const std::filesystem::path& base) {
  ServiceConfig c;
  try {
    c.host = doc.value("host", c.host);
    c.port = doc.value("port", c.port);
    c.data_dir = resolve(base, doc.value("data_dir", c.data_dir.string()));
    c.model_path = resolve(base, doc.value("model_path", std::string{}));
    c.bank_path = resolve(base, doc.value("bank_path", c.bank_path.string()));
    c.per_level = doc.value("per_level", c.per_level);
    c.session_seed = doc.value("session_seed", c.session_seed);
    c.admin_token = doc.value("admin_token", std::string{});
    c.static_dir = resolve(base, doc.value("static_dir", std::string{}));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid service config: ") + e.what());
  }
  c.validate();
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(doc, path.parent_path());
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  if (per_level < 1) throw std::invalid_argument("per_level must be >= 1");
  if (bank_path.empty()) throw std::invalid_argument("bank_path is required");
}

ApiError::ApiError(int status, std::string code, const std::string& message,
                   json details)
    : std::runtime_error(message),
      status_(status),
      code_(std::move(code)),
      details_(std::move(details)) {}

json ApiError::envelope() const {
  return {{"error", {{"code", code_}, {"message", what()}, {"details", details_}}}};
}

QuizService::QuizService(ServiceConfig config) : config_(std::move(config)) {
  config_.validate();
  bank_ = QuestionBank::load(config_.bank_path);
  if (!config_.data_dir.empty()) {
    std::filesystem::create_directories(config_.data_dir / "models");
    store_ = std::make_unique<SessionStore>(config_.data_dir / kLogFile);
  } else {
    store_ = std::make_unique<SessionStore>();
  }
  next_session_ = store_->session_count() + 1;

  std::filesystem::path initial = config_.model_path;
  if (!config_.data_dir.empty() && std::filesystem::exists(active_pointer_path())) {
    std::ifstream in(active_pointer_path());
    std::string line;
    std::getline(in, line);
    if (!line.empty()) initial = line;
  }
  if (!initial.empty()) set_active(load_into_cache(initial));
}

std::filesystem::path QuizService::active_pointer_path() const {
  return config_.data_dir / kActivePointer;
}

std::shared_ptr<const LoadedModel> QuizService::load_into_cache(
    const std::filesystem::path& path) const {
  const auto id = model_id_for(path);
  {
    std::lock_guard lock(model_mu_);
    if (const auto it = models_.find(id); it != models_.end()) return it->second;
  }
  auto loaded = std::make_shared<const LoadedModel>(LoadedModel{id, load_model(path)});
  std::lock_guard lock(model_mu_);
  return models_.emplace(id, std::move(loaded)).first->second;
}

std::shared_ptr<const LoadedModel> QuizService::model_by_id(const std::string& id) const {
  if (id.empty()) {
    throw ApiError(503, "no_model", "session has no grading model");
  }
  try {
    return load_into_cache(id);
  } catch (const ModelError& e) {
    throw ApiError(500, "model_unavailable", e.what(), {{"model", id}});
  }
}

void QuizService::set_active(std::shared_ptr<const LoadedModel> model) {
  std::lock_guard lock(model_mu_);
  active_ = std::move(model);
}

std::shared_ptr<const LoadedModel> QuizService::active_model() const {
  std::lock_guard lock(model_mu_);
  return active_;
}

bool QuizService::check_admin_token(const std::string& presented) const noexcept {
  if (config_.admin_token.empty() || presented.size() != config_.admin_token.size()) {
    return false;
  }
  unsigned char diff = 0;
  for (std::size_t i = 0; i < presented.size(); ++i) {
    diff |= static_cast<unsigned char>(presented[i] ^ config_.admin_token[i]);
  }
  return diff == 0;
}

json QuizService::subjects() const { return {{"subjects", bank_.subjects()}}; }

std::string QuizService::next_session_id() {
  char buf[32];
  while (true) {
    std::snprintf(buf, sizeof buf, "s%06llu",
                  static_cast<unsigned long long>(next_session_++));
    if (!store_->get(buf)) return buf;
  }
}

SessionRecord QuizService::require_session(const std::string& session_id) const {
  auto rec = store_->get(session_id);
  if (!rec) {
    throw ApiError(404, "unknown_session", "no session '" + session_id + "'");
  }
  return std::move(*rec);
}

CreatedSession QuizService::create_session(const std::string& student,
                                           const std::string& subject, Phase phase) {
  if (student.empty()) throw ApiError(400, "invalid_request", "student must be non-empty");
  if (!bank_.has_subject(subject)) {
    throw ApiError(400, "unknown_subject", "unknown subject '" + subject + "'",
                   {{"subjects", bank_.subjects()}});
  }
  const auto model = active_model();
  if (phase == Phase::prerequisite && !model) {
    throw ApiError(503, "no_model", "no recommendation model is loaded");
  }

  std::lock_guard lock(write_mu_);
  const auto id = next_session_id();
  std::vector<Question> picked;
  try {
    picked = select_questions(bank_, subject, config_.per_level,
                              session_seed(config_.session_seed, id));
  } catch (const QuizError& e) {
    throw ApiError(422, std::string(to_string(e.kind())), e.what(),
                   {{"levels", e.details()}});
  }
  std::vector<std::string> ids;
  for (const auto& q : picked) ids.push_back(q.id);
  store_->commit({json{{"type", "created"},
                       {"session", id},
                       {"student", student},
                       {"subject", subject},
                       {"phase", std::string(to_string(phase))},
                       {"questions", ids},
                       {"model", model ? model->id : std::string{}}}});
  return {id, questions_payload(bank_, ids)};
}

void QuizService::submit_answer(const std::string& session_id,
                                const std::string& question_id, long long option) {
  std::lock_guard lock(write_mu_);
  auto rec = require_session(session_id);
  if (option < 0) {
    throw ApiError(400, "invalid_option", "option must be non-negative");
  }
  try {
    rec.session.record_answer(bank_, question_id, static_cast<std::size_t>(option));
  } catch (const QuizError& e) {
    using K = QuizError::Kind;
    const int status = e.kind() == K::unknown_question  ? 404
                       : e.kind() == K::invalid_option ? 400
                                                       : 409;
    throw ApiError(status, std::string(to_string(e.kind())), e.what(),
                   {{"question_id", question_id}});
  }
  store_->commit({json{{"type", "answer"},
                       {"session", session_id},
                       {"question", question_id},
                       {"option", option}}});
}

json QuizService::finalize(const std::string& session_id) {
  std::lock_guard lock(write_mu_);
  auto rec = require_session(session_id);
  FeatureVector features;
  try {
    features = score_session(rec.session, bank_);
  } catch (const QuizError& e) {
    if (e.kind() == QuizError::Kind::incomplete) {
      throw ApiError(422, "incomplete", e.what(), {{"unanswered", e.details()}});
    }
    throw ApiError(409, std::string(to_string(e.kind())), e.what());
  }

  if (rec.session.phase == Phase::followup) {
    store_->commit({json{{"type", "scored"},
                         {"session", session_id},
                         {"features", features.to_json()},
                         {"performance_score", features.avg_score}}});
    rec.features = features;
    rec.performance_score = features.avg_score;
    return result_payload(rec);
  }

  const auto model = model_by_id(rec.model_id);
  Recommendation recommendation;
  try {
    recommendation = recommend(model->artifact.model, features, model->id);
  } catch (const std::exception& e) {
    throw ApiError(500, "recommendation_failed", e.what());
  }
  store_->commit({json{{"type", "scored"}, {"session", session_id}, {"features", features.to_json()}},
                  json{{"type", "recommended"},
                       {"session", session_id},
                       {"recommendation", recommendation.to_json()}}});
  rec.features = features;
  rec.recommendation = recommendation;
  return result_payload(rec);
}

json QuizService::session_view(const std::string& session_id) const {
  const auto rec = require_session(session_id);
  json answers = json::object();
  for (const auto& [qid, option] : rec.session.answers) answers[qid] = option;
  return {{"session_id", rec.session.id},
          {"student", rec.session.student},
          {"subject", rec.session.subject},
          {"phase", std::string(to_string(rec.session.phase))},
          {"status", std::string(to_string(rec.session.status))},
          {"questions", questions_payload(bank_, rec.session.question_ids)},
          {"answers", std::move(answers)},
          {"result", result_payload(rec)}};
}

std::filesystem::path QuizService::resolve_dataset(const std::string& dataset_path) const {
  if (dataset_path.empty()) throw ApiError(400, "invalid_request", "dataset path is required");
  return dataset_path;
}

json QuizService::admin_train(const std::string& dataset_path, const std::string& algorithm,
                              const json& params, std::uint64_t seed) {
  if (config_.data_dir.empty()) {
    throw ApiError(409, "no_data_dir", "service has no data directory for model artifacts");
  }
  AlgorithmSpec spec;
  try {
    spec = spec_from_json(parse_algorithm(algorithm), params);
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, "invalid_params", e.what());
  }
  Dataset dataset;
  try {
    dataset = load_csv(resolve_dataset(dataset_path));
  } catch (const DataError& e) {
    json details = json::object();
    if (e.line()) details["line"] = *e.line();
    throw ApiError(400, "invalid_dataset", e.what(), details);
  }

  HoldoutResult result;
  try {
    result = evaluate_holdout(dataset, spec, seed, seed);
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, "training_failed", e.what());
  }

  ModelArtifact artifact{spec, seed, std::move(result.model)};
  char name[128];
  std::snprintf(name, sizeof name, "%s-%llu-%016llx.json", spec.name().c_str(),
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(result.report.dataset.content_hash));
  const auto path = config_.data_dir / "models" / name;
  save_model(artifact, path);
  auto loaded = std::make_shared<const LoadedModel>(LoadedModel{model_id_for(path), std::move(artifact)});
  {
    std::lock_guard lock(model_mu_);
    models_[loaded->id] = loaded;
  }
  write_file_atomically(active_pointer_path(), loaded->id + "\n");
  set_active(loaded);
  return {{"model_path", loaded->id}, {"report", result.report.to_json()}};
}

ComparisonReport QuizService::admin_compare(const std::string& dataset_path,
                                            std::uint64_t seed) {
  Dataset dataset;
  try {
    dataset = load_csv(resolve_dataset(dataset_path));
  } catch (const DataError& e) {
    json details = json::object();
    if (e.line()) details["line"] = *e.line();
    throw ApiError(400, "invalid_dataset", e.what(), details);
  }
  return compare_algorithms(dataset, default_algorithms(), seed, seed);
}

}  // namespace edurec::service
