#include "stair/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace stair::sim {

namespace {

constexpr std::uint64_t kBlock = 1 << 14;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// Inverse-CDF sampling; cdf.back() is forced to 1.
class CountSampler {
 public:
  explicit CountSampler(const reliability::ChunkFailureDist& dist) : cdf_(dist.size()) {
    if (dist.empty()) throw Error("empty chunk failure distribution");
    for (double p : dist)
      if (!(p >= 0.0)) throw Error("negative probability in chunk failure distribution");
    std::partial_sum(dist.begin(), dist.end(), cdf_.begin());
    const double total = cdf_.back();
    if (std::abs(total - 1.0) > 1e-9) throw Error("chunk failure distribution does not sum to 1");
    cdf_.back() = 1.0;
  }
  std::size_t operator()(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

std::uint64_t run_block(const reliability::Recoverable& recoverable, const CountSampler& sample, std::size_t chunks,
                        std::uint64_t trials, std::mt19937_64 rng) {
  std::uint64_t failures = 0;
  std::vector<std::size_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    counts.clear();
    for (std::size_t c = 0; c < chunks; ++c)
      if (auto k = sample(rng)) counts.push_back(k);
    if (counts.empty()) continue;
    std::sort(counts.begin(), counts.end());
    if (!recoverable(counts)) ++failures;
  }
  return failures;
}

Estimate finish(std::uint64_t trials, std::uint64_t failures) {
  Estimate e;
  e.trials = trials;
  e.failures = failures;
  if (trials == 0) return e;
  e.p = static_cast<double>(failures) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(trials));
  constexpr double z99 = 2.5758293035489004;
  e.ci_low = std::max(0.0, e.p - z99 * e.std_error);
  e.ci_high = std::min(1.0, e.p + z99 * e.std_error);
  return e;
}

std::uint64_t blocks_for(std::uint64_t trials) { return (trials + kBlock - 1) / kBlock; }
std::uint64_t block_trials(std::uint64_t trials, std::uint64_t b) { return std::min(kBlock, trials - b * kBlock); }

}  // namespace

bool Estimate::within_sigma(double value, double k) const {
  const double floor = trials ? 1.0 / static_cast<double>(trials) : 1.0;
  return std::abs(value - p) <= k * std::max(std_error, floor);
}

FailurePattern sample_pattern(const StairConfig& cfg, std::uint64_t seed, bool within) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t n = cfg.n(), r = cfg.r();

  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<std::size_t> rows(r);
  std::iota(rows.begin(), rows.end(), 0);

  FailurePattern p;
  auto lose_sectors = [&](std::size_t col, std::size_t count) {
    std::shuffle(rows.begin(), rows.end(), rng);
    p.sector_failures[col].insert(rows.begin(), rows.begin() + count);
  };

  if (within) {
    const std::size_t failed = uniform(0, cfg.m());
    p.failed_chunks.insert(cols.begin(), cols.begin() + failed);
    // Give a random subset of the e slots to distinct surviving chunks.
    const std::size_t slots = uniform(0, std::min(cfg.m_prime(), n - failed));
    std::vector<std::size_t> e = cfg.e();
    std::shuffle(e.begin(), e.end(), rng);
    for (std::size_t t = 0; t < slots; ++t) lose_sectors(cols[failed + t], uniform(1, e[t]));
  } else {
    const std::size_t failed = uniform(0, std::min(n, cfg.m() + 1));
    p.failed_chunks.insert(cols.begin(), cols.begin() + failed);
    for (std::size_t t = failed; t < n; ++t)
      if (uniform(0, 1)) lose_sectors(cols[t], uniform(1, r));
  }
  return p;
}

void inject(const StripeView& stripe, const StairConfig& cfg, const FailurePattern& pattern) {
  pattern.validate(cfg);
  for (const auto& c : pattern.cells(cfg)) {
    auto cell = stripe.cell(c.row, c.col);
    std::fill(cell.begin(), cell.end(), std::uint8_t{0});
  }
}

Estimate monte_carlo_p_str(const reliability::Recoverable& recoverable, const reliability::ChunkFailureDist& dist,
                           std::size_t chunks, std::uint64_t trials, std::uint64_t seed) {
  const CountSampler sample(dist);
  const auto blocks = static_cast<std::int64_t>(blocks_for(trials));
  std::uint64_t failures = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : failures)
  for (std::int64_t b = 0; b < blocks; ++b)
    failures += run_block(recoverable, sample, chunks, block_trials(trials, b), stream(seed, b));
  return finish(trials, failures);
}

std::vector<std::uint64_t> failure_histogram(const reliability::ChunkFailureDist& dist, std::size_t chunks,
                                             std::uint64_t trials, std::uint64_t seed) {
  const CountSampler sample(dist);
  const std::size_t r = dist.size() - 1;
  std::vector<std::uint64_t> hist(chunks * r + 1, 0);
  for (std::uint64_t b = 0; b < blocks_for(trials); ++b) {
    auto rng = stream(seed, b);
    for (std::uint64_t t = 0; t < block_trials(trials, b); ++t) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < chunks; ++c) total += sample(rng);
      ++hist[total];
    }
  }
  return hist;
}

namespace reference {

Estimate monte_carlo_p_str(const reliability::Recoverable& recoverable, const reliability::ChunkFailureDist& dist,
                           std::size_t chunks, std::uint64_t trials, std::uint64_t seed) {
  const CountSampler sample(dist);
  std::uint64_t failures = 0;
  for (std::uint64_t b = 0; b < blocks_for(trials); ++b)
    failures += run_block(recoverable, sample, chunks, block_trials(trials, b), stream(seed, b));
  return finish(trials, failures);
}

}  // namespace reference

}  // namespace stair::sim
