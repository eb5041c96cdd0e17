#include "habit/rank_table.hpp"

#include <stdexcept>

namespace habit {

void RankTable::observe(std::span<const TokenId> context, TokenId outcome, std::uint64_t now) {
  ContextKey key(context.begin(), context.end());
  auto it = tables_.find(key);
  if (it == tables_.end())
    it = tables_.emplace(std::move(key), DecayedCounter(window_, reserve_)).first;
  it->second.observe(outcome, now);
}

const DecayedCounter* RankTable::find(std::span<const TokenId> context) const {
  ContextKey key(context.begin(), context.end());
  auto it = tables_.find(key);
  return it == tables_.end() ? nullptr : &it->second;
}

std::vector<std::pair<TokenId, double>> RankTable::posterior(std::span<const TokenId> context,
                                                             std::uint64_t now) const {
  std::vector<std::pair<TokenId, double>> result;
  const DecayedCounter* counter = find(context);
  if (!counter) return result;
  result.reserve(counter->outcome_count());
  for (const auto& [id, count] : counter->entries())
    result.emplace_back(id, counter->prob(id, now));
  return result;
}

std::size_t RankTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& [key, counter] : tables_) n += counter.outcome_count();
  return n;
}

void RankTable::adopt(ContextKey context, DecayedCounter counter) {
  if (counter.window() != window_ || counter.reserve() != reserve_)
    throw std::invalid_argument("RankTable: adopted estimator hyperparameters differ");
  if (!tables_.emplace(std::move(context), std::move(counter)).second)
    throw std::invalid_argument("RankTable: duplicate context");
}

}  // namespace habit
