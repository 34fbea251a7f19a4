#include "edurec/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "edurec/rng.hpp"

namespace edurec {

namespace {

constexpr std::string_view kCsvHeader = "subject,bla,mla,hla,avg_score,label";

// Rendered scores carry six decimals, so a parsed value may sit up to
// 5e-7 away from the exact formula result.
constexpr double kScoreParseTolerance = 1e-6;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_count(std::string_view field, const char* name, int q_per_level,
                std::size_t line) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw DataError(std::string("non-numeric ") + name + " value '" +
                        std::string(field) + "'",
                    line);
  }
  if (value < 0 || value > q_per_level) {
    throw DataError(std::string(name) + "=" + std::to_string(value) +
                        " outside [0, " + std::to_string(q_per_level) + "]",
                    line);
  }
  return value;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw DataError("non-numeric avg_score '" + std::string(field) + "'",
                    line);
  }
  return value;
}

Level adjacent_level(Level level, SplitMix64& rng) {
  switch (level) {
    case Level::beginner:
      return Level::intermediate;
    case Level::advanced:
      return Level::intermediate;
    case Level::intermediate:
      return rng.bernoulli(0.5) ? Level::beginner : Level::advanced;
  }
  return level;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::beginner:
      return "Beginner";
    case Level::intermediate:
      return "Intermediate";
    case Level::advanced:
      return "Advanced";
  }
  return "Beginner";
}

std::optional<Level> parse_level(std::string_view token) noexcept {
  if (token == "Beginner") return Level::beginner;
  if (token == "Intermediate") return Level::intermediate;
  if (token == "Advanced") return Level::advanced;
  return std::nullopt;
}

std::string CourseLabel::str() const {
  return course + "-" + std::string(to_string(level));
}

std::optional<CourseLabel> CourseLabel::parse(std::string_view label) {
  const auto dash = label.rfind('-');
  if (dash == std::string_view::npos || dash == 0) return std::nullopt;
  const auto level = parse_level(label.substr(dash + 1));
  if (!level) return std::nullopt;
  return CourseLabel{std::string(label.substr(0, dash)), *level};
}

DataError::DataError(const std::string& message,
                     std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message
                              : message),
      line_(line) {}

Schema Dataset::schema() {
  return {
      {"subject", AttributeKind::categorical},
      {"bla", AttributeKind::categorical},
      {"mla", AttributeKind::categorical},
      {"hla", AttributeKind::categorical},
      {"avg_score", AttributeKind::numeric},
  };
}

double compute_average_score(int bla, int mla, int hla, int q_per_level) {
  if (q_per_level < 1) {
    throw std::invalid_argument("q_per_level must be >= 1");
  }
  for (int count : {bla, mla, hla}) {
    if (count < 0 || count > q_per_level) {
      throw std::invalid_argument("correct-answer count " +
                                  std::to_string(count) + " outside [0, " +
                                  std::to_string(q_per_level) + "]");
    }
  }
  const int weighted = bla + 2 * mla + 3 * hla;
  // Both operands are exact, so for q_per_level == 10 this is the correctly
  // rounded value of weighted / 6.
  return static_cast<double>(weighted) * 10.0 / (6.0 * q_per_level);
}

Level level_for_score(double avg_score) noexcept {
  if (avg_score >= kAdvancedThreshold) return Level::advanced;
  if (avg_score >= kIntermediateThreshold) return Level::intermediate;
  return Level::beginner;
}

std::string ground_truth_label(std::string_view subject, double avg_score,
                               const std::vector<std::string>& subjects) {
  if (std::find(subjects.begin(), subjects.end(), subject) == subjects.end()) {
    throw std::invalid_argument("unknown subject '" + std::string(subject) +
                                "'");
  }
  if (!(avg_score >= 0.0 && avg_score <= 10.0)) {
    throw std::invalid_argument("avg_score outside [0, 10]");
  }
  return CourseLabel{std::string(subject), level_for_score(avg_score)}.str();
}

void GeneratorConfig::validate() const {
  if (subjects.empty()) throw std::invalid_argument("subjects must be non-empty");
  for (const auto& s : subjects) {
    if (s.empty() || s.find_first_of(",\n\r\"") != std::string::npos) {
      throw std::invalid_argument("invalid subject name '" + s + "'");
    }
  }
  if (q_per_level < 1) throw std::invalid_argument("q_per_level must be >= 1");
  if (n_records < 1) throw std::invalid_argument("n_records must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw std::invalid_argument("noise_rate must lie in [0, 1]");
  }
}

Dataset generate_synthetic(const GeneratorConfig& config) {
  config.validate();
  SplitMix64 rng(config.seed);
  Dataset out;
  out.q_per_level = config.q_per_level;
  out.rows.reserve(config.n_records);
  const int q = config.q_per_level;
  for (std::size_t i = 0; i < config.n_records; ++i) {
    StudentRecord r;
    r.subject = config.subjects[rng.uniform_index(config.subjects.size())];
    const double skill = rng.uniform01();
    r.bla = rng.binomial(q, clamp01(skill + 0.25));
    r.mla = rng.binomial(q, skill);
    r.hla = rng.binomial(q, clamp01(skill - 0.25));
    r.avg_score = compute_average_score(r.bla, r.mla, r.hla, q);
    Level level = level_for_score(r.avg_score);
    if (rng.bernoulli(config.noise_rate)) level = adjacent_level(level, rng);
    r.label = CourseLabel{r.subject, level}.str();
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

Dataset read_csv(std::istream& in, int q_per_level) {
  Dataset out;
  out.q_per_level = q_per_level;
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing header line", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw DataError("expected header '" + std::string(kCsvHeader) + "'", 1);
  }

  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 6) {
      throw DataError("expected 6 columns, found " +
                          std::to_string(fields.size()),
                      line_no);
    }
    StudentRecord r;
    r.subject = std::string(fields[0]);
    if (r.subject.empty()) throw DataError("empty subject", line_no);
    r.bla = parse_count(fields[1], "bla", q_per_level, line_no);
    r.mla = parse_count(fields[2], "mla", q_per_level, line_no);
    r.hla = parse_count(fields[3], "hla", q_per_level, line_no);
    const double parsed = parse_real(fields[4], line_no);
    r.avg_score = compute_average_score(r.bla, r.mla, r.hla, q_per_level);
    if (std::fabs(parsed - r.avg_score) > kScoreParseTolerance) {
      throw DataError("avg_score " + std::string(fields[4]) +
                          " does not match bla/mla/hla (expected " +
                          format_score(r.avg_score) + ")",
                      line_no);
    }
    const auto label = CourseLabel::parse(fields[5]);
    if (!label) {
      throw DataError("label '" + std::string(fields[5]) +
                          "' is not <course>-<Beginner|Intermediate|Advanced>",
                      line_no);
    }
    r.label = std::string(fields[5]);
    out.rows.push_back(std::move(r));
    line_numbers.push_back(line_no);
  }

  std::set<std::string> subjects;
  for (const auto& r : out.rows) subjects.insert(r.subject);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto course = CourseLabel::parse(out.rows[i].label)->course;
    if (!subjects.contains(course)) {
      throw DataError("label course '" + course + "' is not a known subject",
                      line_numbers[i]);
    }
  }
  return out;
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : dataset.rows) {
    out << r.subject << ',' << r.bla << ',' << r.mla << ',' << r.hla << ','
        << format_score(r.avg_score) << ',' << r.label << '\n';
  }
}

std::string to_csv_string(const Dataset& dataset) {
  std::ostringstream os;
  write_csv(dataset, os);
  return os.str();
}

Dataset load_csv(const std::filesystem::path& path, int q_per_level) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return read_csv(in, q_per_level);
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write dataset '" + path.string() + "'");
  write_csv(dataset, out);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Split holdout_split(const Dataset& dataset, double train_fraction,
                    std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  if (n_train == 0 || n_train == n) {
    throw std::invalid_argument("split of " + std::to_string(n) +
                                " rows leaves an empty part");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  Split split;
  split.train.q_per_level = split.test.q_per_level = dataset.q_per_level;
  split.train.rows.reserve(n_train);
  split.test.rows.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = i < n_train ? split.train : split.test;
    part.rows.push_back(dataset.rows[order[i]]);
  }
  return split;
}

std::string DatasetFingerprint::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(content_hash));
  return std::to_string(rows) + ":" + buf;
}

DatasetFingerprint fingerprint(const Dataset& dataset) {
  return {dataset.size(), fnv1a64(to_csv_string(dataset))};
}

Row to_row(std::string_view subject, int bla, int mla, int hla,
           double avg_score) {
  return {std::string(subject), std::to_string(bla), std::to_string(mla),
          std::to_string(hla), avg_score};
}

Row to_row(const StudentRecord& r) {
  return to_row(r.subject, r.bla, r.mla, r.hla, r.avg_score);
}

Table to_table(const Dataset& dataset) {
  Table t;
  t.attributes = Dataset::schema();
  t.rows.reserve(dataset.size());
  t.labels.reserve(dataset.size());
  for (const auto& r : dataset.rows) {
    t.rows.push_back(to_row(r));
    t.labels.push_back(r.label);
  }
  return t;
}

}  // namespace edurec
