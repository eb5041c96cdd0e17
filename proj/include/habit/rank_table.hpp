#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "habit/decayed_counter.hpp"
#include "habit/vocab.hpp"

namespace habit {

/// Ordered tuple of token ids conditioning one estimator: the (possibly
/// truncated) prefix that precedes a given rank. The empty key conditions
/// rank 1.
using ContextKey = std::vector<TokenId>;

struct ContextKeyHash {
  std::size_t operator()(const ContextKey& key) const {
    std::size_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the id bytes
    for (TokenId id : key) {
      for (int shift = 0; shift < 32; shift += 8) {
        h ^= (id >> shift) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }
};

/// Conditional outcome distributions for a single sequence rank: one
/// DecayedCounter per distinct context observed at that rank. Estimators are
/// created on first sight and all share the table's window and reserve.
class RankTable {
public:
  RankTable(double window, double reserve) : window_(window), reserve_(reserve) {}

  /// Records `outcome` after `context` at event `now`.
  void observe(std::span<const TokenId> context, TokenId outcome, std::uint64_t now);

  /// Estimator stored for `context`, or nullptr when the context is unknown.
  const DecayedCounter* find(std::span<const TokenId> context) const;

  /// Outcome distribution for `context` at `now`, ascending token id.
  /// Unknown contexts yield an empty vector: total ignorance, which callers
  /// treat as "no continuation known" rather than a uniform guess.
  std::vector<std::pair<TokenId, double>> posterior(std::span<const TokenId> context,
                                                    std::uint64_t now) const;

  /// Number of stored (context, outcome) pairs.
  std::size_t entry_count() const;

  std::size_t context_count() const { return tables_.size(); }

  const std::unordered_map<ContextKey, DecayedCounter, ContextKeyHash>& tables() const {
    return tables_;
  }

  /// Deserialization hook: adopts an estimator for `context` verbatim.
  void adopt(ContextKey context, DecayedCounter counter);

  double window() const { return window_; }
  double reserve() const { return reserve_; }

private:
  double window_;
  double reserve_;
  std::unordered_map<ContextKey, DecayedCounter, ContextKeyHash> tables_;
};

}  // namespace habit
