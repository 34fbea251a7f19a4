#include "doctest.h"

#include <fstream>
#include <sstream>

#include "edurec/cli.hpp"
#include "edurec/service/session_store.hpp"
#include "fixtures.hpp"

using namespace edurec;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
  args.insert(args.begin(), "edurec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the wall-clock line / column so runs can be compared.
std::string without_timing(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("training_time_ms", 0) == 0) continue;
    const auto cut = line.find_last_of(" ,");
    out += (line.find("time") == std::string::npos && cut != std::string::npos
                ? line.substr(0, cut)
                : line) +
           '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"generate"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--seed", "x"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--seed", "1", "--noise", "2"}).code == cli::kExitUsage);
  CHECK(run({"train", "--data", "d.csv", "--algo", "svm", "--seed", "1", "--out", "m"}).code ==
        cli::kExitUsage);
  CHECK(run({"quiz", "--bank", "b", "--model", "m", "--subject", "ML", "--phase", "x"}).code ==
        cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("data and model errors exit with 2") {
  const fixture::TempDir dir("cli_errors");
  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "subject,bla,mla,hla,avg_score,label\nML,1,1,1,9,ML-Beginner\n";
  }
  auto r = run({"train", "--data", bad.string(), "--algo", "dt", "--seed", "1", "--out",
                (dir / "m.json").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"compare", "--data", (dir / "missing.csv").string(), "--seed", "1"}).code ==
        cli::kExitData);
  {
    std::ofstream out(dir / "junk.json");
    out << "[]";
  }
  save_csv(fixture::small_dataset(100), dir / "ok.csv");
  CHECK(run({"evaluate", "--data", (dir / "ok.csv").string(), "--model",
             (dir / "junk.json").string(), "--seed", "1"})
            .code == cli::kExitData);
}

TEST_CASE("generate is deterministic") {
  const auto a = run({"generate", "--n", "200", "--seed", "42"});
  const auto b = run({"generate", "--n", "200", "--seed", "42"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 201);
  CHECK(run({"generate", "--n", "200", "--seed", "43"}).out != a.out);

  const fixture::TempDir dir("cli_generate");
  CHECK(run({"generate", "--n", "200", "--seed", "42", "--out", (dir / "d.csv").string()}).code ==
        0);
  CHECK(slurp(dir / "d.csv") == a.out);
}

TEST_CASE("train, evaluate and compare are reproducible") {
  const fixture::TempDir dir("cli_pipeline");
  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"generate", "--n", "500", "--seed", "42", "--out", data}).code == 0);
  for (const std::string algo : {"dt", "rf", "nb"}) {
    CAPTURE(algo);
    const auto m1 = (dir / (algo + "1.json")).string();
    const auto m2 = (dir / (algo + "2.json")).string();
    const auto t1 = run({"train", "--data", data, "--algo", algo, "--seed", "7", "--out", m1});
    const auto t2 = run({"train", "--data", data, "--algo", algo, "--seed", "7", "--out", m2});
    REQUIRE(t1.code == 0);
    CHECK(slurp(m1) == slurp(m2));
    CHECK(without_timing(t1.out) == without_timing(t2.out));
    const auto e = run({"evaluate", "--data", data, "--model", m1, "--seed", "7"});
    CHECK(e.code == 0);
    CHECK(without_timing(e.out) == without_timing(t1.out));
  }
  const auto c1 = run({"compare", "--data", data, "--seed", "7", "--out", (dir / "c1").string()});
  const auto c2 = run({"compare", "--data", data, "--seed", "7", "--out", (dir / "c2").string()});
  REQUIRE(c1.code == 0);
  CHECK(without_timing(slurp(dir / "c1" / "comparison.csv")) ==
        without_timing(slurp(dir / "c2" / "comparison.csv")));
  CHECK(c1.out.find("random_forest") != std::string::npos);
}

TEST_CASE("quiz reads answers from standard input") {
  const fixture::TempDir dir("cli_quiz");
  fixture::write_model(dir / "m.json");
  const std::vector<std::string> base{"quiz",    "--bank",  fixture::bank_path().string(),
                                      "--model", (dir / "m.json").string(),
                                      "--subject", "DSA"};
  std::string answers = "junk\n0\n";
  for (int i = 0; i < 30; ++i) answers += "1\n";
  const auto r = run(base, answers);
  CHECK(r.code == 0);
  CHECK(r.out.find("enter a number between 1 and") != std::string::npos);
  CHECK(r.out.find("recommended course: DSA (") != std::string::npos);
  CHECK(run(base, answers).out == r.out);

  CHECK(run(base, "1\n1\n").code == cli::kExitUsage);
  auto with_subject = base;
  with_subject.back() = "Rust";
  CHECK(run(with_subject, answers).code == cli::kExitData);

  auto logged = base;
  logged.insert(logged.end(), {"--data-dir", (dir / "state").string()});
  REQUIRE(run(logged, answers).code == 0);
  service::SessionStore store(dir / "state" / "sessions.log");
  CHECK(store.session_count() == 1);
  CHECK(store.get("s000001")->recommendation.has_value());
}
