#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "habit/rank_table.hpp"
#include "habit/vocab.hpp"

namespace habit {

/// Number of preceding tokens conditioning each rank. std::nullopt ("auto")
/// means unbounded: the full prefix is the context.
using MarkovOrder = std::optional<std::uint32_t>;

struct ModelParams {
  double window = 200.0;   ///< analysis window W in events; infinity = never forget
  MarkovOrder order = {};  ///< Markov order k; nullopt = unbounded
  double reserve = 0.5;    ///< novelty mass r added to every denominator
};

/// One scored continuation. `tokens` holds only the continuation (the prompt
/// is excluded); step_probs[i] is the conditional probability of tokens[i]
/// given everything before it, and joint is their product.
struct PathPrediction {
  std::vector<std::string> tokens;
  std::vector<double> step_probs;
  double joint = 1.0;
  double evidence = 0.0;  ///< evidence_db(joint); may be +-infinity
  bool complete = false;  ///< no known continuation exists past the last token
};

/// Renders a prediction in the report row format, e.g.
/// "1a(0.62) 2a(0.87) 3b(0.57) 4c(0.75) -> (-5 dB)".
std::string format_path_row(const PathPrediction& prediction);

/// Online model of habitual action sequences.
///
/// One RankTable per rank holds conditional next-token estimators keyed by
/// the (order-truncated) prefix. Learning is one pass, one sequence at a
/// time; each ingested sequence advances a global event clock that drives the
/// exponential forgetting of every estimator. Raw sequences are never
/// retained — only decayed conditional counts.
///
/// Queries are const and apply decay lazily without writing back, so a copy
/// of the model is a consistent read snapshot.
class Model {
public:
  explicit Model(ModelParams params = {});

  /// Deserialization constructor: adopts complete state verbatim.
  Model(ModelParams params, Vocabulary vocab, std::vector<RankTable> ranks, std::uint64_t clock);

  /// Learns one complete sequence. Throws std::invalid_argument for an empty
  /// sequence or an illegal token name.
  void ingest(const std::vector<std::string>& sequence);

  /// Chain-rule score of `continuation` after `prompt`. Ranks beyond the
  /// deepest learned rank, unknown contexts, and (with r = 0) unseen outcomes
  /// contribute probability zero.
  PathPrediction score(const std::vector<std::string>& prompt,
                       const std::vector<std::string>& continuation) const;

  /// Depth-first enumeration of complete continuations of `prompt`: paths are
  /// extended through every seen outcome whose step probability is at least
  /// p_min and end where no context is stored for the next rank. Results are
  /// sorted by joint probability descending (ties: lexicographic token-name
  /// order) and truncated to max_results. A prompt containing an unknown
  /// token yields an empty list.
  std::vector<PathPrediction> predict(const std::vector<std::string>& prompt,
                                      std::size_t max_results = 16,
                                      double p_min = 0.001) const;

  /// Total number of stored (context, outcome) entries across all ranks.
  std::size_t model_size() const;

  /// Deepest learned rank (the longest ingested sequence so far).
  std::size_t max_rank() const { return ranks_.size(); }

  /// Event clock: number of sequences ingested.
  std::uint64_t sequence_count() const { return clock_; }

  const Vocabulary& vocab() const { return vocab_; }
  const ModelParams& params() const { return params_; }
  const std::vector<RankTable>& ranks() const { return ranks_; }

private:
  std::span<const TokenId> context_span(std::span<const TokenId> prefix) const;
  const DecayedCounter* find_counter(std::span<const TokenId> path, std::size_t rank) const;
  void enumerate(std::vector<TokenId>& path, std::size_t prompt_len, std::vector<double>& steps,
                 double joint, double p_min, std::vector<PathPrediction>& out) const;

  ModelParams params_;
  Vocabulary vocab_;
  std::vector<RankTable> ranks_;  // ranks_[n-1] serves rank n
  std::uint64_t clock_ = 0;
};

}  // namespace habit
