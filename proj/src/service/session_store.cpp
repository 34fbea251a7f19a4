#include "edurec/service/session_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace edurec::service {

using nlohmann::json;

namespace {

class LogCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FeatureVector features_from_json(const json& j) {
  FeatureVector f;
  f.subject = j.at("subject").get<std::string>();
  f.bla = j.at("bla").get<int>();
  f.mla = j.at("mla").get<int>();
  f.hla = j.at("hla").get<int>();
  f.avg_score = j.at("avg_score").get<double>();
  return f;
}

Recommendation recommendation_from_json(const json& j) {
  Recommendation r;
  r.course = j.at("course").get<std::string>();
  const auto level = parse_level(j.at("level").get<std::string>());
  if (!level) throw LogCorrupt("recommendation has an unknown level");
  r.level = *level;
  r.confidence = j.at("confidence").get<double>();
  r.model_id = j.value("model_id", std::string{});
  return r;
}

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("event log write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

SessionStore::SessionStore(std::filesystem::path log_path) : path_(std::move(log_path)) {
  if (!path_.empty()) replay();
}

void SessionStore::apply(Index& index, const json& event) {
  try {
    const auto type = event.at("type").get<std::string>();
    const auto id = event.at("session").get<std::string>();
    if (type == "created") {
      if (index.contains(id)) throw LogCorrupt("session '" + id + "' created twice");
      SessionRecord rec;
      rec.session.id = id;
      rec.session.student = event.at("student").get<std::string>();
      rec.session.subject = event.at("subject").get<std::string>();
      const auto phase = parse_phase(event.at("phase").get<std::string>());
      if (!phase) throw LogCorrupt("unknown phase");
      rec.session.phase = *phase;
      rec.session.question_ids = event.at("questions").get<std::vector<std::string>>();
      rec.model_id = event.value("model", std::string{});
      index.emplace(id, std::move(rec));
      return;
    }
    const auto it = index.find(id);
    if (it == index.end()) throw LogCorrupt("event for unknown session '" + id + "'");
    auto& rec = it->second;
    if (type == "answer") {
      const auto qid = event.at("question").get<std::string>();
      if (rec.session.status != SessionStatus::open) throw LogCorrupt("answer after scoring");
      if (!rec.session.is_assigned(qid)) throw LogCorrupt("answer to unassigned question");
      if (!rec.session.answers.emplace(qid, event.at("option").get<std::size_t>()).second) {
        throw LogCorrupt("duplicate answer");
      }
    } else if (type == "scored") {
      if (rec.session.status != SessionStatus::open) throw LogCorrupt("session scored twice");
      rec.session.status = SessionStatus::scored;
      rec.features = features_from_json(event.at("features"));
      if (event.contains("performance_score")) {
        rec.performance_score = event["performance_score"].get<double>();
      }
    } else if (type == "recommended") {
      if (rec.session.status != SessionStatus::scored || rec.recommendation) {
        throw LogCorrupt("recommendation out of order");
      }
      rec.recommendation = recommendation_from_json(event.at("recommendation"));
    } else {
      throw LogCorrupt("unknown event type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw LogCorrupt(std::string("malformed event: ") + e.what());
  }
}

void SessionStore::replay() {
  std::string content;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }

  std::size_t committed = 0;  // byte offset after the last applied record
  std::size_t pos = 0;
  std::vector<json> pending;
  std::size_t group_size = 0;
  bool torn = false;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      torn = true;
      break;
    }
    json event;
    try {
      event = json::parse(content.begin() + static_cast<std::ptrdiff_t>(pos),
                          content.begin() + static_cast<std::ptrdiff_t>(nl));
    } catch (const json::parse_error&) {
      torn = true;
      break;
    }
    pos = nl + 1;
    if (pending.empty() && event.contains("group")) {
      group_size = event["group"].get<std::size_t>();
    }
    pending.push_back(std::move(event));
    if (pending.size() < std::max<std::size_t>(group_size, 1)) continue;
    try {
      for (const auto& e : pending) apply(index_, e);
    } catch (const LogCorrupt& e) {
      throw std::runtime_error("event log '" + path_.string() + "' is inconsistent: " +
                               e.what());
    }
    events_ += pending.size();
    pending.clear();
    group_size = 0;
    committed = pos;
  }
  if (torn && pos < content.size()) {
    // Count whatever sits after the last complete record.
    dropped_ = 1 + pending.size();
  } else {
    dropped_ = pending.size();
  }
  if (committed < content.size()) {
    std::filesystem::resize_file(path_, committed);
  }
}

void SessionStore::commit(const std::vector<json>& events) {
  if (events.empty()) return;
  std::unique_lock lock(mu_);

  Index scratch;
  for (const auto& e : events) {
    const auto id = e.value("session", std::string{});
    if (const auto it = index_.find(id); it != index_.end()) scratch.insert(*it);
  }
  try {
    for (const auto& e : events) apply(scratch, e);
  } catch (const LogCorrupt& e) {
    throw std::invalid_argument(std::string("rejected session event: ") + e.what());
  }

  if (!path_.empty()) {
    std::string buffer;
    for (std::size_t i = 0; i < events.size(); ++i) {
      json e = events[i];
      if (i == 0 && events.size() > 1) e["group"] = events.size();
      buffer += e.dump();
      buffer += '\n';
    }
    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) {
      throw std::runtime_error("cannot open event log '" + path_.string() +
                               "': " + std::strerror(errno));
    }
    const off_t before = ::lseek(fd, 0, SEEK_END);
    try {
      write_all(fd, buffer);
      if (::fsync(fd) != 0) {
        throw std::runtime_error(std::string("event log fsync failed: ") +
                                 std::strerror(errno));
      }
    } catch (...) {
      // Leave no partial group behind for later appends to follow.
      if (before >= 0) [[maybe_unused]] const int rc = ::ftruncate(fd, before);
      ::close(fd);
      throw;
    }
    ::close(fd);
  }

  for (auto& [id, rec] : scratch) index_[id] = std::move(rec);
  events_ += events.size();
}

std::optional<SessionRecord> SessionStore::get(const std::string& session_id) const {
  std::shared_lock lock(mu_);
  const auto it = index_.find(session_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SessionStore::session_count() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

std::vector<std::string> SessionStore::session_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : index_) ids.push_back(id);
  return ids;
}

std::size_t SessionStore::event_count() const {
  std::shared_lock lock(mu_);
  return events_;
}

}  // namespace edurec::service
