#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edurec/table.hpp"

namespace edurec {

enum class Level { beginner, intermediate, advanced };

std::string_view to_string(Level level) noexcept;
std::optional<Level> parse_level(std::string_view token) noexcept;

inline constexpr int kDefaultQuestionsPerLevel = 10;
inline constexpr double kIntermediateThreshold = 4.0;
inline constexpr double kAdvancedThreshold = 7.0;

// "<course>-<Level>", split on the last '-'.
struct CourseLabel {
  std::string course;
  Level level = Level::beginner;

  std::string str() const;
  static std::optional<CourseLabel> parse(std::string_view label);
};

struct StudentRecord {
  std::string subject;
  int bla = 0;
  int mla = 0;
  int hla = 0;
  double avg_score = 0.0;
  std::string label;

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

// Failure while reading or validating data; `line` is 1-based when known.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message,
                     std::optional<std::size_t> line = std::nullopt);

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

struct Dataset {
  std::vector<StudentRecord> rows;
  int q_per_level = kDefaultQuestionsPerLevel;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }

  // subject categorical; bla/mla/hla categorical count tokens; avg_score numeric.
  static Schema schema();
};

// Weighted mean of the three tiers, (1*bla + 2*mla + 3*hla) / 6 for ten
// questions per level, rescaled to [0, 10] for other bank sizes.
double compute_average_score(int bla, int mla, int hla,
                             int q_per_level = kDefaultQuestionsPerLevel);

Level level_for_score(double avg_score) noexcept;

// Generator oracle: thresholds 4.0 / 7.0, lower edge inclusive.
std::string ground_truth_label(std::string_view subject, double avg_score,
                               const std::vector<std::string>& subjects);

struct GeneratorConfig {
  std::vector<std::string> subjects{"DSA", "Java", "ML"};
  int q_per_level = kDefaultQuestionsPerLevel;
  std::size_t n_records = 5000;
  double noise_rate = 0.15;
  std::uint64_t seed = 0;

  void validate() const;
};

Dataset generate_synthetic(const GeneratorConfig& config);

// CSV I/O. Header is exactly `subject,bla,mla,hla,avg_score,label`.
Dataset read_csv(std::istream& in,
                 int q_per_level = kDefaultQuestionsPerLevel);
void write_csv(const Dataset& dataset, std::ostream& out);
Dataset load_csv(const std::filesystem::path& path,
                 int q_per_level = kDefaultQuestionsPerLevel);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);
std::string to_csv_string(const Dataset& dataset);

// Up to six fractional digits, trailing zeros trimmed ("2", "8.166667").
std::string format_score(double score);

struct Split {
  Dataset train;
  Dataset test;
};

Split holdout_split(const Dataset& dataset, double train_fraction,
                    std::uint64_t seed);

struct DatasetFingerprint {
  std::size_t rows = 0;
  std::uint64_t content_hash = 0;

  std::string str() const;
  friend bool operator==(const DatasetFingerprint&,
                         const DatasetFingerprint&) = default;
};

DatasetFingerprint fingerprint(const Dataset& dataset);

Row to_row(const StudentRecord& record);
Row to_row(std::string_view subject, int bla, int mla, int hla,
           double avg_score);
Table to_table(const Dataset& dataset);

}  // namespace edurec
