#include "doctest.h"

#include <fstream>
#include <sstream>

#include "edurec/service/session_store.hpp"
#include "fixtures.hpp"

using namespace edurec;
using namespace edurec::service;
using nlohmann::json;

namespace {

json created(const std::string& id) {
  return {{"type", "created"}, {"session", id},        {"student", "kim"},
          {"subject", "ML"},   {"phase", "prerequisite"}, {"questions", {"q1", "q2"}},
          {"model", "/m.json"}};
}

json answer(const std::string& id, const std::string& q, int option) {
  return {{"type", "answer"}, {"session", id}, {"question", q}, {"option", option}};
}

json scored(const std::string& id) {
  return {{"type", "scored"},
          {"session", id},
          {"features", {{"subject", "ML"}, {"bla", 1}, {"mla", 1}, {"hla", 0}, {"avg_score", 3.0}}}};
}

json recommended(const std::string& id) {
  return {{"type", "recommended"},
          {"session", id},
          {"recommendation",
           {{"course", "ML"}, {"level", "Beginner"}, {"confidence", 0.75}, {"model_id", "/m.json"}}}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("in-memory store applies events") {
  SessionStore store;
  store.commit({created("a")});
  store.commit({answer("a", "q1", 2)});
  const auto rec = store.get("a");
  REQUIRE(rec);
  CHECK(rec->session.answers.at("q1") == 2);
  CHECK(rec->model_id == "/m.json");
  CHECK(store.event_count() == 2);
  CHECK_FALSE(store.get("b"));
}

TEST_CASE("invalid events are rejected and change nothing") {
  const fixture::TempDir dir("store_reject");
  SessionStore store(dir / "log");
  store.commit({created("a"), answer("a", "q1", 0)});
  const auto size = std::filesystem::file_size(dir / "log");
  CHECK_THROWS_AS(store.commit({answer("a", "q1", 1)}), std::invalid_argument);
  CHECK_THROWS_AS(store.commit({answer("a", "zz", 1)}), std::invalid_argument);
  CHECK_THROWS_AS(store.commit({answer("nope", "q1", 1)}), std::invalid_argument);
  CHECK_THROWS_AS(store.commit({created("a")}), std::invalid_argument);
  // second event invalid: the whole group is refused
  CHECK_THROWS_AS(store.commit({answer("a", "q2", 1), answer("a", "q2", 1)}),
                  std::invalid_argument);
  CHECK(std::filesystem::file_size(dir / "log") == size);
  CHECK(store.get("a")->session.answers.size() == 1);
}

TEST_CASE("replay rebuilds the same state") {
  const fixture::TempDir dir("store_replay");
  {
    SessionStore store(dir / "log");
    store.commit({created("a")});
    store.commit({created("b")});
    store.commit({answer("a", "q1", 0)});
    store.commit({answer("a", "q2", 3)});
    store.commit({scored("a"), recommended("a")});
  }
  SessionStore again(dir / "log");
  CHECK(again.session_count() == 2);
  CHECK(again.event_count() == 6);
  CHECK(again.dropped_on_replay() == 0);
  const auto a = again.get("a");
  REQUIRE(a);
  CHECK(a->session.status == SessionStatus::scored);
  REQUIRE(a->recommendation);
  CHECK(a->recommendation->level == Level::beginner);
  CHECK(a->recommendation->confidence == 0.75);
  CHECK(a->features->avg_score == 3.0);
  CHECK(again.get("b")->session.status == SessionStatus::open);
}

TEST_CASE("torn tail is dropped and truncated") {
  const fixture::TempDir dir("store_torn");
  const auto log = dir / "log";
  {
    SessionStore store(log);
    store.commit({created("a")});
    store.commit({answer("a", "q1", 0)});
  }
  const auto good = read_file(log);
  {
    std::ofstream out(log, std::ios::binary | std::ios::app);
    out << R"({"type":"answer","session":"a","quest)";
  }
  {
    SessionStore store(log);
    CHECK(store.dropped_on_replay() == 1);
    CHECK(store.get("a")->session.answers.size() == 1);
    CHECK(read_file(log) == good);
    // appends continue cleanly after truncation
    store.commit({answer("a", "q2", 1)});
  }
  SessionStore after(log);
  CHECK(after.dropped_on_replay() == 0);
  CHECK(after.get("a")->session.answers.size() == 2);
}

TEST_CASE("a half-written group is discarded as a unit") {
  const fixture::TempDir dir("store_group");
  const auto log = dir / "log";
  {
    SessionStore store(log);
    store.commit({created("a"), answer("a", "q1", 0)});
    store.commit({answer("a", "q2", 0)});
    store.commit({scored("a"), recommended("a")});
  }
  auto text = read_file(log);
  // cut inside the final (recommended) line
  const auto last = text.rfind('\n', text.size() - 2);
  text.resize(last + 10);
  {
    std::ofstream out(log, std::ios::binary | std::ios::trunc);
    out << text;
  }
  SessionStore store(log);
  CHECK(store.dropped_on_replay() == 2);
  const auto a = store.get("a");
  CHECK(a->session.status == SessionStatus::open);
  CHECK_FALSE(a->recommendation);
  CHECK(a->session.answers.size() == 2);
}

TEST_CASE("a complete but inconsistent log is an error") {
  const fixture::TempDir dir("store_corrupt");
  const auto log = dir / "log";
  {
    std::ofstream out(log, std::ios::binary);
    out << answer("ghost", "q1", 0).dump() << '\n';
  }
  CHECK_THROWS_AS(SessionStore{log}, std::runtime_error);
}
