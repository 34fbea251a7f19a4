#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "edurec/evaluation.hpp"
#include "edurec/model.hpp"
#include "edurec/recommend.hpp"
#include "edurec/service/session_store.hpp"

namespace edurec::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "data/service";
  // Initial model; a model trained through the admin API takes precedence.
  std::filesystem::path model_path;
  std::filesystem::path bank_path = "data/question_bank.json";
  int per_level = kDefaultQuestionsPerLevel;
  std::uint64_t session_seed = 0;
  // Bearer token for /api/admin/*; empty disables the admin endpoints.
  std::string admin_token;
  std::filesystem::path static_dir;

  // Relative paths in the file resolve against the file's directory.
  static ServiceConfig load(const std::filesystem::path& path);
  static ServiceConfig from_json(const nlohmann::json& doc,
                                 const std::filesystem::path& base = {});
  void validate() const;
};

// Error surfaced to API clients as {error:{code, message, details}}.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message,
           nlohmann::json details = nlohmann::json::object());

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }
  nlohmann::json envelope() const;

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

struct LoadedModel {
  std::string id;
  ModelArtifact artifact;
};

struct CreatedSession {
  std::string session_id;
  // Prompts, options and level only.
  nlohmann::json questions;
};

// The quiz -> recommendation workflow and the admin surface, independent of
// the transport. Mutations are serialized; reads go straight to the store.
class QuizService {
 public:
  // Empty data_dir keeps sessions in memory (no event log).
  explicit QuizService(ServiceConfig config);

  nlohmann::json subjects() const;
  CreatedSession create_session(const std::string& student, const std::string& subject,
                                Phase phase);
  void submit_answer(const std::string& session_id, const std::string& question_id,
                     long long option);
  nlohmann::json finalize(const std::string& session_id);
  // Client view for resuming: questions, recorded answers, result when scored.
  nlohmann::json session_view(const std::string& session_id) const;

  nlohmann::json admin_train(const std::string& dataset_path, const std::string& algorithm,
                             const nlohmann::json& params, std::uint64_t seed);
  ComparisonReport admin_compare(const std::string& dataset_path, std::uint64_t seed);

  bool check_admin_token(const std::string& presented) const noexcept;
  const ServiceConfig& config() const noexcept { return config_; }
  const QuestionBank& bank() const noexcept { return bank_; }
  std::shared_ptr<const LoadedModel> active_model() const;
  const SessionStore& store() const noexcept { return *store_; }

 private:
  std::shared_ptr<const LoadedModel> model_by_id(const std::string& id) const;
  std::shared_ptr<const LoadedModel> load_into_cache(const std::filesystem::path& path) const;
  void set_active(std::shared_ptr<const LoadedModel> model);
  SessionRecord require_session(const std::string& session_id) const;
  std::string next_session_id();
  std::filesystem::path active_pointer_path() const;
  std::filesystem::path resolve_dataset(const std::string& dataset_path) const;

  ServiceConfig config_;
  QuestionBank bank_;
  std::unique_ptr<SessionStore> store_;

  mutable std::mutex model_mu_;
  std::shared_ptr<const LoadedModel> active_;
  mutable std::map<std::string, std::shared_ptr<const LoadedModel>> models_;

  std::mutex write_mu_;
  std::uint64_t next_session_ = 1;
};

}  // namespace edurec::service
