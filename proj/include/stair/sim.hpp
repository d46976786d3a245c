#pragma once

// Failure injection for codec round-trips, and counting-level Monte-Carlo
// estimation of the stripe loss probability.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stair/config.hpp"
#include "stair/reliability.hpp"
#include "stair/stripe.hpp"

namespace stair::sim {

/// Deterministic per seed.  within = true builds a pattern inside the
/// (m, e) coverage; otherwise up to m+1 failed chunks and arbitrary sector
/// losses elsewhere.
FailurePattern sample_pattern(const StairConfig& cfg, std::uint64_t seed, bool within);

/// Zero-fills every cell named by the pattern.
void inject(const StripeView& stripe, const StairConfig& cfg, const FailurePattern& pattern);

struct Estimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double p = 0;          // failures / trials
  double std_error = 0;  // sqrt(p (1 - p) / trials)
  double ci_low = 0;     // 99% normal-approximation interval, clipped to [0, 1]
  double ci_high = 0;

  /// |value - p| <= k * std_error, with std_error floored at the standard
  /// error of a single event so that p = 0 or 1 still tolerate tiny values.
  bool within_sigma(double value, double k) const;
};

/// Counts of one trial: `chunks` i.i.d. draws from dist.
/// Trials run in fixed blocks with their own seeded streams, so the result
/// is the same for any thread count.
Estimate monte_carlo_p_str(const reliability::Recoverable& recoverable, const reliability::ChunkFailureDist& dist,
                           std::size_t chunks, std::uint64_t trials, std::uint64_t seed);

/// Histogram of trials by total failed sectors in the stripe (index 0..chunks*r).
std::vector<std::uint64_t> failure_histogram(const reliability::ChunkFailureDist& dist, std::size_t chunks,
                                             std::uint64_t trials, std::uint64_t seed);

namespace reference {
Estimate monte_carlo_p_str(const reliability::Recoverable& recoverable, const reliability::ChunkFailureDist& dist,
                           std::size_t chunks, std::uint64_t trials, std::uint64_t seed);
}

}  // namespace stair::sim
