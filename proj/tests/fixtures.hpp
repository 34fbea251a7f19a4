#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>

#include "edurec/dataset.hpp"
#include "edurec/model.hpp"
#include "edurec/recommend.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path bank_path() { return fs::path(EDUREC_SOURCE_DIR) / "data" / "question_bank.json"; }

// Fresh directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("edurec_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline edurec::Dataset small_dataset(std::size_t n = 800, std::uint64_t seed = 42,
                                     double noise = 0.15) {
  edurec::GeneratorConfig c;
  c.n_records = n;
  c.seed = seed;
  c.noise_rate = noise;
  return edurec::generate_synthetic(c);
}

// Decision tree trained on noise-free data and saved to `path`.
inline edurec::ModelArtifact write_model(const fs::path& path) {
  const auto spec = edurec::AlgorithmSpec::defaults(edurec::Algorithm::decision_tree);
  const auto table = edurec::to_table(small_dataset(1500, 42, 0.0));
  edurec::ModelArtifact art{spec, 0, edurec::train_model(spec, table, 0)};
  edurec::save_model(art, path);
  return art;
}

// Option to submit so that exactly `correct_per_level[level]` answers per
// level are right, counting in the given question order.
inline std::size_t planned_option(const edurec::Question& q, int& remaining_correct) {
  if (remaining_correct > 0) {
    --remaining_correct;
    return q.correct;
  }
  return (q.correct + 1) % q.options.size();
}

}  // namespace fixture
