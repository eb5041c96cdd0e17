#include "habit/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "habit/prob.hpp"
#include "habit/rng.hpp"
#include "habit/task_graph.hpp"

namespace habit {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

PhaseSpec make_phase(std::initializer_list<std::pair<const char*, int>> rows) {
  PhaseSpec phase;
  for (const auto& [text, copies] : rows) phase.entries.push_back({split_tokens(text), copies});
  return phase;
}

}  // namespace

std::vector<std::vector<std::string>> PhaseSpec::expanded() const {
  std::vector<std::vector<std::string>> out;
  for (const Entry& entry : entries)
    for (int i = 0; i < entry.copies; ++i) out.push_back(entry.path);
  return out;
}

std::size_t PhaseSpec::total_copies() const {
  std::size_t n = 0;
  for (const Entry& entry : entries) n += static_cast<std::size_t>(entry.copies);
  return n;
}

Scenario stationary_scenario() {
  return {"stationary",
          {make_phase({
              {"1a 2a 3b 4b", 1},
              {"1a 2a 3b 4c", 3},
              {"1a 2b 3b 4b", 1},
              {"1a 2a 3a 4a", 2},
              {"1a 2a 3c 4a", 1},
              {"1b 2b 3b 4b", 1},
              {"1c 2b 3a", 1},
              {"1c 2b 3a 4b", 1},
              {"1c 2b 3a 4b 5c", 1},
              {"1d 2b 3a 4c 5d", 1},
          })}};
}

Scenario sequential_scenario() {
  return {"sequential",
          {make_phase({
               {"#2 #21 #211 #2112", 1},
               {"#1 #11 #111", 1},
               {"#3 #33 #331", 1},
               {"#4 #42 #421 #4211", 1},
               {"#4 #42 #421 #4212 #42121", 1},
           }),
           make_phase({
               {"#2 #21 #211 #2111 #21112", 1},
               {"#3 #34 #3221", 1},
               {"#2 #22 #33 #331", 1},
               {"#2 #23 #233", 1},
               {"#2 #23 #232 #2321 #23211 #232111", 1},
           }),
           make_phase({
               {"#3 #32 #321", 1},
               {"#4 #41 #411 #4111", 1},
               {"#1 #11 #112 #1122 #21112", 1},
               {"#3 #31", 1},
               {"#2 #23 #232 #2322", 1},
           }),
           make_phase({
               {"#1 #11 #112 #1121 #11211 #112111", 1},
               {"#3 #32 #322 #3221", 1},
               {"#2 #23 #231", 1},
               {"#2 #21 #211 #2111 #21111", 1},
               {"#1 #11 #211 #2112", 1},
           })}};
}

RunConfig stationary_defaults() {
  RunConfig config;
  config.draws_per_phase = 3900;  // 300 whole passes of the 13-copy multiset
  config.window = 200.0;
  return config;
}

RunConfig sequential_defaults() {
  RunConfig config;
  config.draws_per_phase = 50;
  config.window = 32.0;
  return config;
}

namespace {

// Copies of multiset sequences with length >= rank whose first prefix.size()
// tokens equal prefix.
std::size_t count_matching(const PhaseSpec& multiset, const std::vector<std::string>& prefix,
                           std::size_t rank) {
  std::size_t n = 0;
  for (const PhaseSpec::Entry& entry : multiset.entries) {
    if (entry.path.size() < rank || entry.path.size() < prefix.size()) continue;
    if (std::equal(prefix.begin(), prefix.end(), entry.path.begin()))
      n += static_cast<std::size_t>(entry.copies);
  }
  return n;
}

bool is_entry(const PhaseSpec& multiset, const std::vector<std::string>& path) {
  for (const PhaseSpec::Entry& entry : multiset.entries)
    if (entry.path == path) return true;
  return false;
}

bool is_strict_prefix_of_entry(const PhaseSpec& multiset, const std::vector<std::string>& path) {
  for (const PhaseSpec::Entry& entry : multiset.entries)
    if (entry.path.size() > path.size() &&
        std::equal(path.begin(), path.end(), entry.path.begin()))
      return true;
  return false;
}

}  // namespace

std::vector<double> oracle_conditionals(const PhaseSpec& multiset,
                                        const std::vector<std::string>& path) {
  if (!is_entry(multiset, path))
    throw std::invalid_argument("oracle: path is not an entry of the multiset");
  std::vector<double> steps;
  steps.reserve(path.size());
  std::vector<std::string> prefix;
  for (std::size_t n = 1; n <= path.size(); ++n) {
    std::size_t below = count_matching(multiset, prefix, n);
    prefix.push_back(path[n - 1]);
    std::size_t at = count_matching(multiset, prefix, n);
    steps.push_back(static_cast<double>(at) / static_cast<double>(below));
  }
  return steps;
}

double oracle_evidence(const PhaseSpec& multiset, const std::vector<std::string>& path) {
  if (!is_entry(multiset, path))
    throw std::invalid_argument("oracle: path is not an entry of the multiset");
  if (is_strict_prefix_of_entry(multiset, path))
    return std::nan("");  // never predicted complete: longer habits subsume it
  double joint = 1.0;
  for (double step : oracle_conditionals(multiset, path)) joint *= step;
  return evidence_db(joint);
}

namespace {

void validate_config(const RunConfig& config) {
  if (config.draws_per_phase < 1)
    throw std::invalid_argument("simulation: draws_per_phase must be >= 1");
  if (config.max_results < 1)
    throw std::invalid_argument("simulation: max_results must be >= 1");
  if (!(config.p_min >= 0.0 && config.p_min <= 1.0))
    throw std::invalid_argument("simulation: p_min must lie in [0, 1]");
}

PhaseReport report_phase(const Model& model, const RunConfig& config,
                         const PhaseSpec* oracle_multiset) {
  PhaseReport phase;
  phase.ranked = model.predict({}, config.max_results, config.p_min);
  if (oracle_multiset) {
    phase.oracle.reserve(phase.ranked.size());
    for (const PathPrediction& prediction : phase.ranked) {
      if (is_entry(*oracle_multiset, prediction.tokens))
        phase.oracle.push_back(oracle_evidence(*oracle_multiset, prediction.tokens));
      else
        phase.oracle.push_back(std::nullopt);  // e.g. a low-order hallucination
    }
  }
  phase.model_size = model.model_size();
  phase.dot = to_dot(extract_task_graph(model, {}, config.max_results, config.p_min));
  return phase;
}

}  // namespace

RunOutcome run_stationary(const Scenario& scenario, const RunConfig& config) {
  validate_config(config);
  if (scenario.phases.empty()) throw std::invalid_argument("simulation: scenario has no phases");
  const PhaseSpec& multiset = scenario.phases.front();

  std::vector<std::vector<std::string>> pool = multiset.expanded();
  if (pool.empty() || config.draws_per_phase % pool.size() != 0)
    throw std::invalid_argument(
        "simulation: draws_per_phase must be a positive multiple of the multiset size");
  std::size_t passes = config.draws_per_phase / pool.size();

  Model model({config.window, config.order, config.reserve});
  SplitMix64 rng(config.seed);
  for (std::size_t pass = 0; pass < passes; ++pass) {
    rng.shuffle(pool);
    for (const auto& sequence : pool) model.ingest(sequence);
  }

  RunReport report{scenario.name, config, {report_phase(model, config, &multiset)}};
  return {std::move(report), std::move(model)};
}

RunOutcome run_sequential(const Scenario& scenario, const RunConfig& config) {
  validate_config(config);
  if (scenario.phases.empty()) throw std::invalid_argument("simulation: scenario has no phases");

  Model model({config.window, config.order, config.reserve});
  SplitMix64 rng(config.seed);
  RunReport report{scenario.name, config, {}};
  for (const PhaseSpec& spec : scenario.phases) {
    std::vector<std::vector<std::string>> pool = spec.expanded();
    if (pool.empty()) throw std::invalid_argument("simulation: empty phase");
    for (std::size_t draw = 0; draw < config.draws_per_phase; ++draw)
      model.ingest(pool[rng.next_below(pool.size())]);
    report.phases.push_back(report_phase(model, config, nullptr));
  }
  return {std::move(report), std::move(model)};
}

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string config_header(const RunReport& report) {
  const RunConfig& config = report.config;
  std::string out;
  out += "scenario: " + report.scenario + "\n";
  out += "seed: " + std::to_string(config.seed) + "\n";
  out += "draws_per_phase: " + std::to_string(config.draws_per_phase) + "\n";
  out += "window: " + (std::isinf(config.window) ? std::string("inf") : fmt_g(config.window)) +
         "\n";
  out += "order: " + (config.order ? std::to_string(*config.order) : std::string("auto")) + "\n";
  out += "reserve: " + fmt_g(config.reserve) + "\n";
  out += "p_min: " + fmt_g(config.p_min) + "\n";
  out += "max_results: " + std::to_string(config.max_results) + "\n";
  return out;
}

std::string fmt_oracle(const std::optional<double>& evidence) {
  if (!evidence) return "-";
  if (std::isnan(*evidence)) return "NaN";
  return std::to_string(display_db(*evidence)) + " dB";
}

}  // namespace

std::string render_report_text(const RunReport& report) {
  std::string out = config_header(report);
  for (std::size_t p = 0; p < report.phases.size(); ++p) {
    const PhaseReport& phase = report.phases[p];
    out += "\nphase " + std::to_string(p + 1) + "\n";

    std::size_t width = 0;
    std::vector<std::string> rows;
    rows.reserve(phase.ranked.size());
    for (const PathPrediction& prediction : phase.ranked) {
      rows.push_back(format_path_row(prediction));
      width = std::max(width, rows.back().size());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      char head[16];
      std::snprintf(head, sizeof head, "%4zu  ", i + 1);
      out += head;
      out += rows[i];
      if (!phase.oracle.empty()) {
        out.append(width - rows[i].size() + 2, ' ');
        out += "oracle: " + fmt_oracle(phase.oracle[i]);
      }
      out += "\n";
    }
    out += "model_size: " + std::to_string(phase.model_size) + "\n";
  }
  return out;
}

std::string render_report_tsv(const RunReport& report) {
  std::string out = "phase\trank\tpath\tjoint_probability\tevidence_db\n";
  char buf[64];
  for (std::size_t p = 0; p < report.phases.size(); ++p) {
    const PhaseReport& phase = report.phases[p];
    for (std::size_t i = 0; i < phase.ranked.size(); ++i) {
      const PathPrediction& prediction = phase.ranked[i];
      out += std::to_string(p + 1) + "\t" + std::to_string(i + 1) + "\t";
      for (std::size_t t = 0; t < prediction.tokens.size(); ++t) {
        if (t) out += ' ';
        out += prediction.tokens[t];
      }
      std::snprintf(buf, sizeof buf, "\t%.12g\t%.4f\n", prediction.joint, prediction.evidence);
      out += buf;
    }
    out += std::to_string(p + 1) + "\tmodel_size\t" + std::to_string(phase.model_size) + "\n";
  }
  return out;
}

}  // namespace habit
