// habitmodel — command-line front end for the sequence habit model.
//
// Subcommands: learn, predict, export-dot, simulate, stats.
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 I/O error.

#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "habit/file_io.hpp"
#include "habit/model.hpp"
#include "habit/simulation.hpp"
#include "habit/snapshot.hpp"
#include "habit/task_graph.hpp"
#include "habit/trace.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

double parse_window(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used == text.size() && value >= 1.0) return value;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("--window must be a number >= 1 or 'inf'");
}

habit::MarkovOrder parse_order(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    unsigned long value = std::stoul(text, &used);
    if (used == text.size() && value >= 1 && value <= std::numeric_limits<std::uint32_t>::max())
      return static_cast<std::uint32_t>(value);
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("--order must be an integer >= 1 or 'auto'");
}

std::vector<std::string> parse_prompt(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

struct Options {
  std::string model_path;
  std::string input_path;
  std::string out_path;
  std::string prompt;
  std::string window = "200";
  std::string order = "auto";
  double reserve = 0.5;
  std::uint64_t seed = 42;
  double p_min = 0.001;
  std::size_t top = 16;
  std::string scenario;
};

int cmd_learn(const Options& opt, const CLI::App& sub) {
  habit::ModelParams params{parse_window(opt.window), parse_order(opt.order), opt.reserve};

  std::optional<habit::Model> model;
  if (std::filesystem::exists(opt.model_path)) {
    model = habit::from_snapshot_text(habit::read_file(opt.model_path));
    // Continuing a model: explicit hyperparameters must agree with it.
    const habit::ModelParams& have = model->params();
    if (sub.count("--window") && params.window != have.window)
      throw std::invalid_argument("--window does not match the existing model");
    if (sub.count("--order") && params.order != have.order)
      throw std::invalid_argument("--order does not match the existing model");
    if (sub.count("--reserve") && params.reserve != have.reserve)
      throw std::invalid_argument("--reserve does not match the existing model");
  } else {
    model.emplace(params);
  }

  std::size_t count = 0;
  for (const auto& sequence : habit::parse_trace(habit::read_file(opt.input_path))) {
    model->ingest(sequence);
    ++count;
  }
  habit::atomic_write_file(opt.model_path, habit::to_snapshot_text(*model));
  std::cout << "ingested " << count << " sequences, L_max=" << model->max_rank()
            << ", model_size=" << model->model_size() << "\n";
  return 0;
}

int cmd_predict(const Options& opt) {
  habit::Model model = habit::from_snapshot_text(habit::read_file(opt.model_path));
  std::vector<std::string> prompt = parse_prompt(opt.prompt);
  for (const std::string& token : prompt) {
    if (!model.vocab().find(token)) {
      std::cerr << "note: prompt token '" << token << "' has never been observed\n";
      return 0;
    }
  }
  for (const habit::PathPrediction& prediction : model.predict(prompt, opt.top, opt.p_min))
    std::cout << habit::format_path_row(prediction) << "\n";
  return 0;
}

int cmd_export_dot(const Options& opt) {
  habit::Model model = habit::from_snapshot_text(habit::read_file(opt.model_path));
  habit::TaskGraph graph =
      habit::extract_task_graph(model, parse_prompt(opt.prompt), opt.top, opt.p_min);
  habit::atomic_write_file(opt.out_path, habit::to_dot(graph));
  return 0;
}

int cmd_simulate(const Options& opt, const CLI::App& sub) {
  habit::Scenario scenario;
  habit::RunConfig config;
  if (opt.scenario == "stationary") {
    scenario = habit::stationary_scenario();
    config = habit::stationary_defaults();
  } else if (opt.scenario == "sequential") {
    scenario = habit::sequential_scenario();
    config = habit::sequential_defaults();
  } else {
    throw std::invalid_argument("scenario must be 'stationary' or 'sequential'");
  }
  config.seed = opt.seed;
  if (sub.count("--window")) config.window = parse_window(opt.window);
  if (sub.count("--order")) config.order = parse_order(opt.order);
  if (sub.count("--reserve")) config.reserve = opt.reserve;
  if (sub.count("--p-min")) config.p_min = opt.p_min;
  if (sub.count("--top")) config.max_results = opt.top;

  habit::RunOutcome outcome = opt.scenario == "stationary"
                                  ? habit::run_stationary(scenario, config)
                                  : habit::run_sequential(scenario, config);

  std::filesystem::path dir(opt.out_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw habit::IoError("cannot create output directory: " + dir.string());

  habit::atomic_write_file(dir / "report.txt", habit::render_report_text(outcome.report));
  habit::atomic_write_file(dir / "report.tsv", habit::render_report_tsv(outcome.report));
  for (std::size_t p = 0; p < outcome.report.phases.size(); ++p)
    habit::atomic_write_file(dir / ("phase" + std::to_string(p + 1) + ".dot"),
                             outcome.report.phases[p].dot);
  std::cout << "wrote report.txt, report.tsv and " << outcome.report.phases.size()
            << " task graph(s) to " << dir.string() << "\n";
  return 0;
}

int cmd_stats(const Options& opt) {
  habit::Model model = habit::from_snapshot_text(habit::read_file(opt.model_path));
  const habit::ModelParams& params = model.params();
  std::cout << "model_size: " << model.model_size() << "\n"
            << "L_max: " << model.max_rank() << "\n"
            << "clock: " << model.sequence_count() << "\n"
            << "vocabulary: " << model.vocab().size() << "\n"
            << "window: ";
  if (std::isinf(params.window))
    std::cout << "inf";
  else
    std::cout << params.window;
  std::cout << "\norder: ";
  if (params.order)
    std::cout << *params.order;
  else
    std::cout << "auto";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"online model of habitual action sequences"};
  app.require_subcommand(1);

  CLI::App* learn = app.add_subcommand("learn", "ingest a trace file and save the model");
  learn->add_option("--input", opt.input_path, "trace file, one sequence per line")->required();
  learn->add_option("--model", opt.model_path, "model snapshot to create or extend")->required();
  learn->add_option("--window", opt.window, "analysis window in events, or 'inf'");
  learn->add_option("--order", opt.order, "Markov order, or 'auto' for unbounded");
  learn->add_option("--reserve", opt.reserve, "novelty reserve mass");

  CLI::App* predict = app.add_subcommand("predict", "rank complete continuations of a prompt");
  predict->add_option("--model", opt.model_path, "model snapshot")->required();
  predict->add_option("--prompt", opt.prompt, "space-separated prompt tokens");
  predict->add_option("--top", opt.top, "maximum number of results");
  predict->add_option("--p-min", opt.p_min, "minimum step probability");

  CLI::App* export_dot = app.add_subcommand("export-dot", "write the task graph as GraphViz DOT");
  export_dot->add_option("--model", opt.model_path, "model snapshot")->required();
  export_dot->add_option("--out", opt.out_path, "output .dot file")->required();
  export_dot->add_option("--prompt", opt.prompt, "space-separated prompt tokens");
  export_dot->add_option("--top", opt.top, "maximum number of paths");
  export_dot->add_option("--p-min", opt.p_min, "minimum step probability");

  CLI::App* simulate = app.add_subcommand("simulate", "run a built-in benchmark scenario");
  simulate->add_option("scenario", opt.scenario, "'stationary' or 'sequential'")->required();
  simulate->add_option("--out", opt.out_path, "output directory")->required();
  simulate->add_option("--seed", opt.seed, "random seed");
  simulate->add_option("--window", opt.window, "override the scenario window");
  simulate->add_option("--order", opt.order, "override the Markov order");
  simulate->add_option("--reserve", opt.reserve, "override the novelty reserve");
  simulate->add_option("--p-min", opt.p_min, "override the minimum step probability");
  simulate->add_option("--top", opt.top, "override the maximum number of results");

  CLI::App* stats = app.add_subcommand("stats", "print a model summary");
  stats->add_option("--model", opt.model_path, "model snapshot")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(learn)) return cmd_learn(opt, *learn);
    if (app.got_subcommand(predict)) return cmd_predict(opt);
    if (app.got_subcommand(export_dot)) return cmd_export_dot(opt);
    if (app.got_subcommand(simulate)) return cmd_simulate(opt, *simulate);
    if (app.got_subcommand(stats)) return cmd_stats(opt);
  } catch (const habit::ParseError& e) {
    std::cerr << "error: trace " << e.what() << "\n";
    return kExitData;
  } catch (const habit::SnapshotError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const habit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
