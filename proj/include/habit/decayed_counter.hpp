#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "habit/vocab.hpp"

namespace habit {

/// Categorical frequency estimator with exponential forgetting.
///
/// Each outcome carries a decayed count. On every global event (one ingested
/// sequence) all counts shrink by lambda = 1 - 1/W, where W is the analysis
/// window in events; W = infinity disables forgetting. Decay is applied
/// lazily: the counter remembers the event of its last update and queries
/// scale by lambda^(now - last_event) without writing back, so concurrent
/// readers see a plain value type.
///
/// A non-negative reserve r is added to the denominator of every probability:
///
///   p(seen outcome)   = count / (total + r)
///   p(unseen outcome) = r / (total + r)       (the undivided novelty mass)
///
/// With r > 0 an estimator that stops being updated drifts toward ignorance:
/// counts decay while r stays fixed, so probabilities of once-frequent
/// outcomes sink. That drift is what makes stale habits fade.
///
/// The running total is always derived as the sum of counts in ascending
/// token-id order, which keeps query results and serialized state bit-stable
/// across save/load cycles.
class DecayedCounter {
public:
  /// window >= 1 (or infinity), reserve >= 0; throws std::invalid_argument.
  DecayedCounter(double window, double reserve);

  /// Deserialization constructor: adopts pre-decayed counts (strictly
  /// ascending token ids, non-negative weights) as of `last_event`.
  DecayedCounter(double window, double reserve,
                 std::vector<std::pair<TokenId, double>> counts,
                 std::uint64_t last_event);

  /// Decays all counts to `now`, then adds one observation of `outcome`.
  /// `now` must not precede the last update.
  void observe(TokenId outcome, std::uint64_t now);

  /// Probability of `outcome` at event `now` (lazy decay, no mutation).
  /// An empty counter with r > 0 returns the degenerate 1.0; callers detect
  /// that zero-knowledge state via effective_count() == 0.
  double prob(TokenId outcome, std::uint64_t now) const;

  /// Decayed count of `outcome` at `now`; 0 for unseen outcomes.
  double weight(TokenId outcome, std::uint64_t now) const;

  /// Decayed total mass at `now` (the denominator before the reserve).
  double effective_count(std::uint64_t now) const;

  /// Seen outcomes with raw (last_event-time) counts, ascending token id.
  const std::vector<std::pair<TokenId, double>>& entries() const { return counts_; }

  std::uint64_t last_event() const { return last_event_; }
  double window() const { return window_; }
  double reserve() const { return reserve_; }
  std::size_t outcome_count() const { return counts_.size(); }

private:
  double decay_factor(std::uint64_t now) const;
  double raw_total() const;

  double window_;
  double reserve_;
  double lambda_;
  std::vector<std::pair<TokenId, double>> counts_;  // sorted by token id
  std::uint64_t last_event_ = 0;
};

}  // namespace habit
