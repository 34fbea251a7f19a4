#include "edurec/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "edurec/dataset.hpp"
#include "edurec/evaluation.hpp"
#include "edurec/model.hpp"
#include "edurec/recommend.hpp"
#include "edurec/service/http_server.hpp"
#include "edurec/service/quiz_service.hpp"

namespace edurec::cli {

namespace {

namespace fs = std::filesystem;
using service::ApiError;
using service::QuizService;
using service::ServiceConfig;

struct GenerateArgs {
  std::string out;
  std::size_t n = 5000;
  double noise = 0.15;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  std::string data;
  std::string algo;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvaluateArgs {
  std::string data;
  std::string model;
  std::uint64_t seed = 0;
};

struct CompareArgs {
  std::string data;
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct QuizArgs {
  std::string bank;
  std::string model;
  std::string subject;
  std::string student = "cli";
  std::string phase = "prerequisite";
  std::string data_dir;
};

int do_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  GeneratorConfig config;
  config.n_records = a.n;
  config.noise_rate = a.noise;
  config.seed = a.seed;
  const auto dataset = generate_synthetic(config);
  if (a.out.empty() || a.out == "-") {
    write_csv(dataset, out);
  } else {
    save_csv(dataset, a.out);
    err << "wrote " << dataset.size() << " rows to " << a.out << '\n';
  }
  return kExitOk;
}

int do_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto spec = AlgorithmSpec::defaults(parse_algorithm(a.algo));
  const auto dataset = load_csv(a.data);
  auto result = evaluate_holdout(dataset, spec, a.seed, a.seed);
  save_model(ModelArtifact{spec, a.seed, std::move(result.model)}, a.out);
  out << result.report.to_text();
  err << "model written to " << a.out << '\n';
  return kExitOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto artifact = load_model(a.model);
  const auto dataset = load_csv(a.data);
  const auto result = evaluate_holdout(dataset, artifact.spec, a.seed, a.seed);
  out << result.report.to_text();
  return kExitOk;
}

int do_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const auto dataset = load_csv(a.data);
  const auto report = compare_algorithms(dataset, default_algorithms(), a.seed, a.seed);
  out << report.to_text();
  fs::create_directories(a.out);
  const auto csv_path = fs::path(a.out) / "comparison.csv";
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw DataError("cannot write '" + csv_path.string() + "'");
  csv << report.to_csv();
  err << "plot data written to " << csv_path.string() << '\n';
  return report.failures.empty() ? kExitOk : kExitData;
}

int do_serve(const std::string& config_path, std::ostream& err) {
  const auto config = ServiceConfig::load(config_path);
  QuizService svc(config);
  service::HttpServer server(svc);
  err << "serving on " << config.host << ':' << config.port << '\n';
  server.listen(config.host, config.port);
  return kExitOk;
}

// Reads a 1-based option number; re-prompts on junk. Nullopt on end of input.
std::optional<long long> read_choice(std::istream& in, std::ostream& out,
                                     std::size_t n_options) {
  std::string line;
  while (std::getline(in, line)) {
    long long choice = 0;
    std::istringstream parse(line);
    if (parse >> choice && choice >= 1 && static_cast<std::size_t>(choice) <= n_options) {
      return choice - 1;
    }
    out << "  enter a number between 1 and " << n_options << ": ";
  }
  return std::nullopt;
}

int do_quiz(const QuizArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto phase = parse_phase(a.phase);
  if (!phase) throw std::invalid_argument("--phase must be prerequisite or followup");
  ServiceConfig config;
  config.bank_path = a.bank;
  config.model_path = a.model;
  config.data_dir = a.data_dir;
  QuizService svc(config);

  const auto created = svc.create_session(a.student, a.subject, *phase);
  out << "session " << created.session_id << " (" << a.subject << ", "
      << created.questions.size() << " questions)\n";
  std::size_t n = 0;
  for (const auto& q : created.questions) {
    ++n;
    out << '\n' << n << ". [" << q["level"].get<std::string>() << "] "
        << q["prompt"].get<std::string>() << '\n';
    const auto options = q["options"].get<std::vector<std::string>>();
    for (std::size_t i = 0; i < options.size(); ++i) {
      out << "   " << (i + 1) << ") " << options[i] << '\n';
    }
    out << "answer: ";
    const auto choice = read_choice(in, out, options.size());
    if (!choice) {
      err << "input ended before the quiz was complete\n";
      return kExitUsage;
    }
    svc.submit_answer(created.session_id, q["id"].get<std::string>(), *choice);
  }
  out << '\n';

  const auto result = svc.finalize(created.session_id);
  if (result.contains("performance_score")) {
    out << "performance score: " << format_score(result["performance_score"].get<double>())
        << " / 10\n";
    return kExitOk;
  }
  const auto& f = result["features"];
  const auto& r = result["recommendation"];
  out << "BLA " << f["bla"].get<int>() << "  MLA " << f["mla"].get<int>() << "  HLA "
      << f["hla"].get<int>() << "  average " << format_score(f["avg_score"].get<double>())
      << '\n';
  char conf[32];
  std::snprintf(conf, sizeof conf, "%.3f", r["confidence"].get<double>());
  out << "recommended course: " << r["course"].get<std::string>() << " ("
      << r["level"].get<std::string>() << "), confidence " << conf << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Course-with-level recommendation toolkit", "edurec"};
  app.require_subcommand(1, 1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic student dataset as CSV");
  generate->add_option("--out", gen.out, "Output CSV path (default: standard output)");
  generate->add_option("--n", gen.n, "Number of records")->capture_default_str();
  generate->add_option("--noise", gen.noise, "Label noise rate in [0, 1]")
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train on the 80% split, save the model, report");
  train->add_option("--data", tr.data, "Dataset CSV")->required();
  train->add_option("--algo", tr.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"dt", "rf", "nb"}));
  train->add_option("--seed", tr.seed, "Split and training seed")->required();
  train->add_option("--out", tr.out, "Model artifact path")->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Hold-out evaluation of a saved model's algorithm and parameters");
  evaluate->add_option("--data", ev.data, "Dataset CSV")->required();
  evaluate->add_option("--model", ev.model, "Model artifact")->required();
  evaluate->add_option("--seed", ev.seed, "Split and training seed")->required();

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Compare all three algorithms on one split");
  compare->add_option("--data", cmp.data, "Dataset CSV")->required();
  compare->add_option("--seed", cmp.seed, "Split and training seed")->required();
  compare->add_option("--out", cmp.out, "Directory for comparison.csv")->capture_default_str();

  std::string config_path;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Service config JSON")->required();

  QuizArgs qz;
  auto* quiz = app.add_subcommand("quiz", "Take a quiz in the terminal");
  quiz->add_option("--bank", qz.bank, "Question bank JSON")->required();
  quiz->add_option("--model", qz.model, "Model artifact")->required();
  quiz->add_option("--subject", qz.subject, "Subject to be tested on")->required();
  quiz->add_option("--student", qz.student, "Student name")->capture_default_str();
  quiz->add_option("--phase", qz.phase, "prerequisite or followup")->capture_default_str();
  quiz->add_option("--data-dir", qz.data_dir, "Persist the session event log here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return do_generate(gen, out, err);
    if (*train) return do_train(tr, out, err);
    if (*evaluate) return do_evaluate(ev, out);
    if (*compare) return do_compare(cmp, out, err);
    if (*serve) return do_serve(config_path, err);
    if (*quiz) return do_quiz(qz, in, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const QuizError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ApiError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const SchemaMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace edurec::cli
