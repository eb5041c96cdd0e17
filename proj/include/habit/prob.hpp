#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace habit {

/// Probability expressed as log-odds in decibans (dB):
///
///   evidence_db(p) = 10 * log10(p / (1 - p))
///
/// 0 dB is indifference (p = 0.5); each +10 dB multiplies the odds by ten.
/// p = 0 and p = 1 map to -inf / +inf; use display_db for bounded rendering.
/// Throws std::domain_error for p outside [0, 1].
inline double evidence_db(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("evidence_db: probability must lie in [0, 1]");
  return 10.0 * std::log10(p / (1.0 - p));
}

/// Rounds evidence to the nearest integer dB and clamps to [-100, 100]
/// (the infinite sentinels render as the clamp bounds).
inline int display_db(double evidence) {
  if (std::isnan(evidence))
    throw std::domain_error("display_db: evidence is NaN");
  double clamped = std::clamp(evidence, -100.0, 100.0);
  return static_cast<int>(std::lround(clamped));
}

/// Posterior P(A|B) from prior P(A), tpr = P(B|A) and fpr = P(B|not A):
///
///   posterior = prior*tpr / (prior*tpr + (1-prior)*fpr)
///
/// All arguments must lie in [0, 1]. Throws std::domain_error when the
/// denominator is zero (the conditioning event has probability zero, so the
/// posterior is undefined).
inline double bayes_posterior(double prior, double tpr, double fpr) {
  for (double v : {prior, tpr, fpr})
    if (!(v >= 0.0 && v <= 1.0))
      throw std::domain_error("bayes_posterior: arguments must lie in [0, 1]");
  double numerator = prior * tpr;
  double denominator = numerator + (1.0 - prior) * fpr;
  if (denominator <= 0.0)
    throw std::domain_error("bayes_posterior: conditioning event has probability zero");
  return numerator / denominator;
}

}  // namespace habit
