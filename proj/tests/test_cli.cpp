#include "doctest.h"

// End-to-end checks of the installed command-line tool, driven through the
// shell. The binary path is injected by the build; without it the suite is
// empty and the ctest entry passes vacuously.
#ifdef HABIT_CLI_PATH

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "habit/model.hpp"
#include "support/corpora.hpp"
#include "support/dot_parser.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "habit_cli_io";
  fs::create_directories(dir);
  fs::path out_file = dir / ("out" + std::to_string(++counter));
  fs::path err_file = dir / ("err" + std::to_string(counter));

  std::string command = std::string(HABIT_CLI_PATH) + " " + args + " >" + out_file.string() +
                        " 2>" + err_file.string();
  int raw = std::system(command.c_str());
  CliResult result;
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

/// Fresh scratch directory for one test case.
fs::path workspace(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "habit_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string corpus_trace() {
  std::string text = "// kiosk-style benchmark corpus\n";
  for (const auto& entry : testsupport::stationary_corpus()) {
    std::string line;
    for (const auto& token : entry.path) {
      if (!line.empty()) line += ' ';
      line += token;
    }
    for (int i = 0; i < entry.copies; ++i) text += line + "\n";
  }
  return text;
}

/// The rows an in-process exact-count model prints for the same queries.
std::vector<std::string> reference_rows(const std::vector<std::string>& prompt) {
  habit::Model model(
      habit::ModelParams{std::numeric_limits<double>::infinity(), {}, 0.0});
  for (const auto& seq : testsupport::stationary_stream()) model.ingest(seq);
  std::vector<std::string> rows;
  for (const auto& prediction : model.predict(prompt, 16, 0.001))
    rows.push_back(habit::format_path_row(prediction));
  return rows;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("running without a subcommand is a usage error") {
  CliResult result = run_cli("");
  CHECK(result.status == 1);
  CHECK_FALSE(result.err.empty());
}

TEST_CASE("--help exits zero and lists the subcommands") {
  CliResult result = run_cli("--help");
  CHECK(result.status == 0);
  for (const char* name : {"learn", "predict", "export-dot", "simulate", "stats"})
    CHECK(result.out.find(name) != std::string::npos);
}

TEST_CASE("an unknown subcommand is a usage error") {
  CHECK(run_cli("frobnicate").status == 1);
}

TEST_CASE("learn ingests a trace and reports the model shape") {
  fs::path dir = workspace("learn");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";

  CliResult result = run_cli("learn --input " + (dir / "trace.txt").string() + " --model " +
                             model.string());
  CHECK(result.status == 0);
  CHECK(result.out == "ingested 13 sequences, L_max=5, model_size=26\n");
  CHECK(fs::exists(model));

  CliResult stats = run_cli("stats --model " + model.string());
  CHECK(stats.status == 0);
  CHECK(stats.out.find("model_size: 26\n") != std::string::npos);
  CHECK(stats.out.find("L_max: 5\n") != std::string::npos);
  CHECK(stats.out.find("clock: 13\n") != std::string::npos);
  CHECK(stats.out.find("vocabulary: 14\n") != std::string::npos);
  CHECK(stats.out.find("window: 200\n") != std::string::npos);
  CHECK(stats.out.find("order: auto\n") != std::string::npos);
}

TEST_CASE("learn accumulates into an existing model") {
  fs::path dir = workspace("relearn");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";
  std::string base = "learn --input " + (dir / "trace.txt").string() + " --model " +
                     model.string();

  CHECK(run_cli(base).status == 0);
  CHECK(run_cli(base).status == 0);
  CliResult stats = run_cli("stats --model " + model.string());
  CHECK(stats.out.find("clock: 26\n") != std::string::npos);
}

TEST_CASE("explicit hyperparameters must match an existing model") {
  fs::path dir = workspace("mismatch");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";
  std::string base = "learn --input " + (dir / "trace.txt").string() + " --model " +
                     model.string();

  CHECK(run_cli(base + " --window inf --reserve 0").status == 0);
  CliResult result = run_cli(base + " --window 50");
  CHECK(result.status == 1);
  CHECK(result.err.find("does not match the existing model") != std::string::npos);
  CHECK(run_cli(base + " --window inf").status == 0);  // agreeing is fine
}

TEST_CASE("predict matches the library row for row") {
  fs::path dir = workspace("predict");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";
  CHECK(run_cli("learn --input " + (dir / "trace.txt").string() + " --model " + model.string() +
                " --window inf --reserve 0")
            .status == 0);

  CliResult result = run_cli("predict --model " + model.string());
  CHECK(result.status == 0);
  CHECK(split_lines(result.out) == reference_rows({}));
  CHECK(split_lines(result.out).size() == 8);

  CliResult prompted = run_cli("predict --model " + model.string() + " --prompt \"1c\"");
  CHECK(prompted.status == 0);
  CHECK(split_lines(prompted.out) == reference_rows({"1c"}));
  CHECK(split_lines(prompted.out).size() == 1);

  CliResult top = run_cli("predict --model " + model.string() + " --top 3");
  CHECK(split_lines(top.out).size() == 3);
}

TEST_CASE("an unseen prompt token is a note, not an error") {
  fs::path dir = workspace("unseen");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";
  CHECK(run_cli("learn --input " + (dir / "trace.txt").string() + " --model " + model.string())
            .status == 0);

  CliResult result = run_cli("predict --model " + model.string() + " --prompt \"1a zz\"");
  CHECK(result.status == 0);
  CHECK(result.out.empty());
  CHECK(result.err.find("'zz' has never been observed") != std::string::npos);
}

TEST_CASE("a malformed trace names its line and exits with the data code") {
  fs::path dir = workspace("badtrace");
  // Line 7 carries a doubled space.
  write_text(dir / "trace.txt", "a b\nc d\n\n// fine\na b\nc d\ne  f\n");
  CliResult result = run_cli("learn --input " + (dir / "trace.txt").string() + " --model " +
                             (dir / "model.json").string());
  CHECK(result.status == 2);
  CHECK(result.err.find("error: trace line 7:") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "model.json"));  // nothing is written on failure
}

TEST_CASE("a missing model file is an I/O error") {
  fs::path dir = workspace("missing");
  CliResult result = run_cli("predict --model " + (dir / "absent.json").string());
  CHECK(result.status == 3);
  CHECK(result.err.find("error:") != std::string::npos);
}

TEST_CASE("a corrupt snapshot is a data error") {
  fs::path dir = workspace("corrupt");
  write_text(dir / "model.json", "{ this is not json");
  CliResult result = run_cli("stats --model " + (dir / "model.json").string());
  CHECK(result.status == 2);
  CHECK(result.err.find("snapshot") != std::string::npos);
}

TEST_CASE("export-dot writes a parseable graph honoring the prompt") {
  fs::path dir = workspace("exportdot");
  write_text(dir / "trace.txt", corpus_trace());
  fs::path model = dir / "model.json";
  CHECK(run_cli("learn --input " + (dir / "trace.txt").string() + " --model " + model.string())
            .status == 0);

  fs::path out = dir / "graph.dot";
  CliResult result = run_cli("export-dot --model " + model.string() + " --out " + out.string() +
                             " --prompt \"1c 2b\"");
  CHECK(result.status == 0);
  testsupport::DotGraph parsed = testsupport::parse_dot(slurp(out));
  CHECK(testsupport::label_lines(parsed.nodes.at("root").at("label"))[0] == "1c 2b");
  CHECK_FALSE(parsed.edges.empty());

  CliResult unwritable = run_cli("export-dot --model " + model.string() +
                                 " --out /nonexistent/graph.dot");
  CHECK(unwritable.status == 3);
}

TEST_CASE("simulate writes the report files and is reproducible") {
  fs::path a = workspace("sim_a");
  fs::path b = workspace("sim_b");

  CliResult first = run_cli("simulate stationary --out " + a.string());
  CHECK(first.status == 0);
  CHECK(first.out == "wrote report.txt, report.tsv and 1 task graph(s) to " + a.string() + "\n");
  for (const char* name : {"report.txt", "report.tsv", "phase1.dot"})
    CHECK(fs::exists(a / name));
  testsupport::parse_dot(slurp(a / "phase1.dot"));

  CHECK(run_cli("simulate stationary --out " + b.string()).status == 0);
  CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
  CHECK(slurp(a / "report.tsv") == slurp(b / "report.tsv"));
  CHECK(slurp(a / "phase1.dot") == slurp(b / "phase1.dot"));

  fs::path c = workspace("sim_c");
  CliResult sequential = run_cli("simulate sequential --out " + c.string() + " --seed 7");
  CHECK(sequential.status == 0);
  for (const char* name : {"phase1.dot", "phase2.dot", "phase3.dot", "phase4.dot"})
    CHECK(fs::exists(c / name));
}

TEST_CASE("simulate rejects unknown scenarios and bad overrides") {
  fs::path dir = workspace("simbad");
  CliResult result = run_cli("simulate bogus --out " + dir.string());
  CHECK(result.status == 1);
  CHECK(result.err.find("scenario must be 'stationary' or 'sequential'") != std::string::npos);

  CHECK(run_cli("simulate stationary --out " + dir.string() + " --window 0.5").status == 1);
  CHECK(run_cli("simulate stationary --out " + dir.string() + " --window abc").status == 1);
  CHECK(run_cli("simulate stationary --out " + dir.string() + " --order 0").status == 1);
}

TEST_SUITE_END();

#endif  // HABIT_CLI_PATH
