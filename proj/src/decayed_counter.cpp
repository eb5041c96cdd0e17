#include "habit/decayed_counter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace habit {

namespace {

double lambda_for(double window) {
  return std::isinf(window) ? 1.0 : 1.0 - 1.0 / window;
}

}  // namespace

DecayedCounter::DecayedCounter(double window, double reserve)
    : window_(window), reserve_(reserve), lambda_(lambda_for(window)) {
  if (!(window >= 1.0))  // also rejects NaN
    throw std::invalid_argument("DecayedCounter: window must be >= 1 or infinite");
  if (!(reserve >= 0.0))
    throw std::invalid_argument("DecayedCounter: reserve must be non-negative");
}

DecayedCounter::DecayedCounter(double window, double reserve,
                               std::vector<std::pair<TokenId, double>> counts,
                               std::uint64_t last_event)
    : DecayedCounter(window, reserve) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0 && counts[i - 1].first >= counts[i].first)
      throw std::invalid_argument("DecayedCounter: counts must have strictly ascending token ids");
    if (!(counts[i].second >= 0.0))
      throw std::invalid_argument("DecayedCounter: counts must be non-negative");
  }
  counts_ = std::move(counts);
  last_event_ = last_event;
}

double DecayedCounter::decay_factor(std::uint64_t now) const {
  if (now < last_event_)
    throw std::invalid_argument("DecayedCounter: event clock must not run backwards");
  std::uint64_t delta = now - last_event_;
  if (delta == 0 || lambda_ == 1.0) return 1.0;
  return std::pow(lambda_, static_cast<double>(delta));
}

double DecayedCounter::raw_total() const {
  double sum = 0.0;  // ascending-id order: the same additions in the same order every time
  for (const auto& [id, count] : counts_) sum += count;
  return sum;
}

void DecayedCounter::observe(TokenId outcome, std::uint64_t now) {
  double factor = decay_factor(now);
  if (factor != 1.0)
    for (auto& [id, count] : counts_) count *= factor;
  last_event_ = now;

  auto it = std::lower_bound(counts_.begin(), counts_.end(), outcome,
                             [](const auto& entry, TokenId id) { return entry.first < id; });
  if (it != counts_.end() && it->first == outcome)
    it->second += 1.0;
  else
    counts_.insert(it, {outcome, 1.0});
}

double DecayedCounter::weight(TokenId outcome, std::uint64_t now) const {
  auto it = std::lower_bound(counts_.begin(), counts_.end(), outcome,
                             [](const auto& entry, TokenId id) { return entry.first < id; });
  if (it == counts_.end() || it->first != outcome) return 0.0;
  return it->second * decay_factor(now);
}

double DecayedCounter::effective_count(std::uint64_t now) const {
  return raw_total() * decay_factor(now);
}

double DecayedCounter::prob(TokenId outcome, std::uint64_t now) const {
  double factor = decay_factor(now);
  double denominator = raw_total() * factor + reserve_;
  auto it = std::lower_bound(counts_.begin(), counts_.end(), outcome,
                             [](const auto& entry, TokenId id) { return entry.first < id; });
  bool seen = it != counts_.end() && it->first == outcome;
  if (!seen) {
    if (denominator <= 0.0) return 0.0;  // empty counter, r = 0
    return reserve_ / denominator;
  }
  return it->second * factor / denominator;
}

}  // namespace habit
