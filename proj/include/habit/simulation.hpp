#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "habit/model.hpp"

namespace habit {

/// One training phase: a multiset of complete paths.
struct PhaseSpec {
  struct Entry {
    std::vector<std::string> path;
    int copies = 1;
  };
  std::vector<Entry> entries;

  /// Paths repeated per copy count, in entry order.
  std::vector<std::vector<std::string>> expanded() const;
  std::size_t total_copies() const;
};

/// A named sequence of phases.
struct Scenario {
  std::string name;
  std::vector<PhaseSpec> phases;
};

/// Built-in single-phase benchmark: 10 fixed kiosk-style paths, three of
/// them duplicated to 13 total copies. Drawn as whole shuffled passes so the
/// empirical mix stays stationary.
Scenario stationary_scenario();

/// Built-in four-phase benchmark: 4 groups of 5 paths over a shared menu
/// vocabulary. Phases are trained one after another to exercise forgetting.
Scenario sequential_scenario();

struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t draws_per_phase = 0;  ///< total sequences ingested per phase
  double window = 200.0;
  MarkovOrder order = {};
  double reserve = 0.5;
  double p_min = 0.001;
  std::size_t max_results = 32;
};

/// Protocol defaults: 300 shuffled passes of the 13-copy multiset (3900
/// draws), window 200.
RunConfig stationary_defaults();

/// Protocol defaults: 50 i.i.d. draws per phase, window 32.
RunConfig sequential_defaults();

/// Model state after one phase: ranked complete predictions from the empty
/// prompt, exact-count reference evidence where defined (stationary runs
/// only), the structural size, and the rendered task graph.
struct PhaseReport {
  std::vector<PathPrediction> ranked;
  std::vector<std::optional<double>> oracle;  ///< aligned with ranked; NaN = prefix entry
  std::size_t model_size = 0;
  std::string dot;
};

struct RunReport {
  std::string scenario;
  RunConfig config;
  std::vector<PhaseReport> phases;
};

/// Report plus the trained model (kept for follow-up queries).
struct RunOutcome {
  RunReport report;
  Model model;
};

/// Exact-count conditional profile of `path` against a multiset: entry n is
/// N(path[0..n]) / N(path[0..n-1]) where N counts multiset sequences of
/// length >= n+1 matching the prefix. Throws std::invalid_argument when the
/// path is not an entry of the multiset.
std::vector<double> oracle_conditionals(const PhaseSpec& multiset,
                                        const std::vector<std::string>& path);

/// Joint evidence (dB) of `path` under exact counting; NaN when the path is
/// an entry that is also a strict prefix of another entry (it can never be
/// predicted as complete). Throws std::invalid_argument when absent.
double oracle_evidence(const PhaseSpec& multiset, const std::vector<std::string>& path);

/// Ingests draws_per_phase sequences as whole shuffled passes over phase 1 of
/// `scenario` (draws_per_phase must be a multiple of the multiset size), then
/// reports ranked predictions with oracle comparison.
RunOutcome run_stationary(const Scenario& scenario, const RunConfig& config);

/// Ingests draws_per_phase i.i.d. uniform draws from each phase in turn,
/// reporting after every phase. The model carries over between phases.
RunOutcome run_sequential(const Scenario& scenario, const RunConfig& config);

/// Human-readable report (one ranked table per phase). Byte-deterministic.
std::string render_report_text(const RunReport& report);

/// Tab-separated report: header `phase rank path joint_probability
/// evidence_db`, one row per prediction, plus a `<phase> model_size <n>` row
/// per phase. Byte-deterministic.
std::string render_report_tsv(const RunReport& report);

}  // namespace habit
