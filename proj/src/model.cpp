#include "habit/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "habit/prob.hpp"

namespace habit {

std::string format_path_row(const PathPrediction& prediction) {
  std::string row;
  char buf[64];
  for (std::size_t i = 0; i < prediction.tokens.size(); ++i) {
    std::snprintf(buf, sizeof buf, "(%.2f) ", prediction.step_probs[i]);
    row += prediction.tokens[i];
    row += buf;
  }
  std::snprintf(buf, sizeof buf, "-> (%d dB)", display_db(prediction.evidence));
  row += buf;
  return row;
}

namespace {

void validate_params(const ModelParams& params) {
  if (!(params.window >= 1.0))
    throw std::invalid_argument("Model: window must be >= 1 or infinite");
  if (!(params.reserve >= 0.0))
    throw std::invalid_argument("Model: reserve must be non-negative");
  if (params.order && *params.order < 1)
    throw std::invalid_argument("Model: order must be >= 1 or unbounded");
}

}  // namespace

Model::Model(ModelParams params) : params_(params) { validate_params(params_); }

Model::Model(ModelParams params, Vocabulary vocab, std::vector<RankTable> ranks,
             std::uint64_t clock)
    : params_(params), vocab_(std::move(vocab)), ranks_(std::move(ranks)), clock_(clock) {
  validate_params(params_);
  for (const RankTable& table : ranks_)
    if (table.window() != params_.window || table.reserve() != params_.reserve)
      throw std::invalid_argument("Model: rank table hyperparameters differ");
}

std::span<const TokenId> Model::context_span(std::span<const TokenId> prefix) const {
  std::size_t len = prefix.size();
  if (params_.order) len = std::min<std::size_t>(len, *params_.order);
  return prefix.subspan(prefix.size() - len, len);
}

const DecayedCounter* Model::find_counter(std::span<const TokenId> path, std::size_t rank) const {
  if (rank < 1 || rank > ranks_.size()) return nullptr;
  return ranks_[rank - 1].find(context_span(path.subspan(0, rank - 1)));
}

void Model::ingest(const std::vector<std::string>& sequence) {
  if (sequence.empty()) throw std::invalid_argument("Model::ingest: empty sequence");
  for (const std::string& name : sequence)
    if (!valid_token_name(name))
      throw std::invalid_argument(
          "Model::ingest: token name must be non-empty and contain no whitespace: '" + name + "'");

  std::vector<TokenId> ids;
  ids.reserve(sequence.size());
  for (const std::string& name : sequence) ids.push_back(vocab_.intern(name));

  while (ranks_.size() < ids.size()) ranks_.emplace_back(params_.window, params_.reserve);

  ++clock_;
  for (std::size_t n = 1; n <= ids.size(); ++n) {
    std::span<const TokenId> prefix(ids.data(), n - 1);
    ranks_[n - 1].observe(context_span(prefix), ids[n - 1], clock_);
  }
}

PathPrediction Model::score(const std::vector<std::string>& prompt,
                            const std::vector<std::string>& continuation) const {
  // Unknown names never resolve: they make a context unknown or an outcome unseen.
  std::vector<std::optional<TokenId>> resolved;
  resolved.reserve(prompt.size() + continuation.size());
  for (const std::string& name : prompt) resolved.push_back(vocab_.find(name));
  for (const std::string& name : continuation) resolved.push_back(vocab_.find(name));

  auto counter_at = [&](std::size_t rank) -> const DecayedCounter* {
    if (rank < 1 || rank > ranks_.size()) return nullptr;
    std::vector<TokenId> prefix;
    prefix.reserve(rank - 1);
    for (std::size_t i = 0; i + 1 < rank; ++i) {
      if (!resolved[i]) return nullptr;  // context contains a token never seen
      prefix.push_back(*resolved[i]);
    }
    return ranks_[rank - 1].find(context_span(prefix));
  };

  PathPrediction out;
  out.tokens = continuation;
  out.step_probs.reserve(continuation.size());
  double joint = 1.0;
  for (std::size_t i = 0; i < continuation.size(); ++i) {
    std::size_t rank = prompt.size() + i + 1;
    double p = 0.0;
    if (const DecayedCounter* counter = counter_at(rank)) {
      std::optional<TokenId> outcome = resolved[rank - 1];
      // Unseen outcomes take the undivided novelty reserve (zero when r = 0);
      // prob() lands on that branch for any id absent from the counter.
      TokenId probe = outcome ? *outcome : static_cast<TokenId>(vocab_.size());
      p = counter->prob(probe, clock_);
    }
    out.step_probs.push_back(p);
    joint *= p;
  }
  out.joint = joint;
  out.evidence = evidence_db(joint);
  out.complete = counter_at(prompt.size() + continuation.size() + 1) == nullptr;
  return out;
}

void Model::enumerate(std::vector<TokenId>& path, std::size_t prompt_len,
                      std::vector<double>& steps, double joint, double p_min,
                      std::vector<PathPrediction>& out) const {
  std::size_t next_rank = path.size() + 1;
  const DecayedCounter* counter = find_counter(path, next_rank);
  if (counter == nullptr) {
    if (path.size() > prompt_len) {  // complete: nothing is stored past this token
      PathPrediction prediction;
      prediction.tokens.reserve(path.size() - prompt_len);
      for (std::size_t i = prompt_len; i < path.size(); ++i)
        prediction.tokens.push_back(vocab_.name(path[i]));
      prediction.step_probs = steps;
      prediction.joint = joint;
      prediction.evidence = evidence_db(joint);
      prediction.complete = true;
      out.push_back(std::move(prediction));
    }
    return;
  }
  for (const auto& [id, raw] : counter->entries()) {
    double p = counter->prob(id, clock_);
    if (p < p_min) continue;
    path.push_back(id);
    steps.push_back(p);
    enumerate(path, prompt_len, steps, joint * p, p_min, out);
    path.pop_back();
    steps.pop_back();
  }
}

std::vector<PathPrediction> Model::predict(const std::vector<std::string>& prompt,
                                           std::size_t max_results, double p_min) const {
  if (max_results < 1) throw std::invalid_argument("Model::predict: max_results must be >= 1");
  if (!(p_min >= 0.0 && p_min <= 1.0))
    throw std::invalid_argument("Model::predict: p_min must lie in [0, 1]");

  std::vector<TokenId> path;
  path.reserve(prompt.size() + ranks_.size());
  for (const std::string& name : prompt) {
    std::optional<TokenId> id = vocab_.find(name);
    if (!id) return {};  // unknown prompt token: nothing to predict
    path.push_back(*id);
  }

  std::vector<PathPrediction> results;
  std::vector<double> steps;
  enumerate(path, prompt.size(), steps, 1.0, p_min, results);

  std::sort(results.begin(), results.end(), [](const PathPrediction& a, const PathPrediction& b) {
    if (a.joint != b.joint) return a.joint > b.joint;
    return a.tokens < b.tokens;
  });
  if (results.size() > max_results) results.resize(max_results);
  return results;
}

std::size_t Model::model_size() const {
  std::size_t n = 0;
  for (const RankTable& table : ranks_) n += table.entry_count();
  return n;
}

}  // namespace habit
