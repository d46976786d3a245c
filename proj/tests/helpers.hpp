#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "stair/codec.hpp"
#include "stair/stripe.hpp"

namespace testing {

inline stair::Stripe random_data(const stair::StairConfig& cfg, std::size_t symbol, std::uint64_t seed) {
  stair::Stripe s(cfg, symbol);
  std::mt19937_64 rng(seed);
  for (const auto& c : stair::data_cells(cfg))
    for (auto& b : s.cell(c.row, c.col)) b = static_cast<std::uint8_t>(rng());
  return s;
}

inline stair::Stripe encoded(const stair::StairCodec& codec, std::size_t symbol, std::uint64_t seed,
                             stair::EncodeMethod method = stair::EncodeMethod::Standard) {
  auto s = random_data(codec.config(), symbol, seed);
  codec.encode(s.view(), method);
  return s;
}

// Injective assignment of the nonzero counts to e slots with count <= slot.
inline bool matching_oracle(const std::vector<std::size_t>& e, const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> nz;
  for (auto c : counts)
    if (c) nz.push_back(c);
  if (nz.size() > e.size()) return false;
  std::vector<std::size_t> slots(e.size());
  std::iota(slots.begin(), slots.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < nz.size() && ok; ++i) ok = nz[i] <= e[slots[i]];
    if (ok) return true;
  } while (std::next_permutation(slots.begin(), slots.end()));
  return false;
}

// Every pattern inside the (m, e) coverage, including the empty one.
inline void for_each_covered_pattern(const stair::StairConfig& cfg,
                                     const std::function<void(const stair::FailurePattern&)>& visit) {
  const std::size_t n = cfg.n(), r = cfg.r();
  for (std::uint32_t fmask = 0; fmask < (1u << n); ++fmask) {
    if (static_cast<std::size_t>(__builtin_popcount(fmask)) > cfg.m()) continue;
    stair::FailurePattern p;
    for (std::size_t j = 0; j < n; ++j)
      if (fmask >> j & 1) p.failed_chunks.insert(j);
    std::vector<std::size_t> counts;
    std::function<void(std::size_t)> rec = [&](std::size_t col) {
      if (col == n) {
        visit(p);
        return;
      }
      if (p.failed_chunks.count(col)) return rec(col + 1);
      for (std::uint32_t rows = 0; rows < (1u << r); ++rows) {
        const std::size_t c = __builtin_popcount(rows);
        if (c) {
          auto next = counts;
          next.push_back(c);
          std::sort(next.begin(), next.end());
          if (!stair::sector_counts_covered(cfg.e(), next)) continue;
          std::swap(counts, next);
          for (std::size_t i = 0; i < r; ++i)
            if (rows >> i & 1) p.sector_failures[col].insert(i);
        }
        rec(col + 1);
        if (c) {
          p.sector_failures.erase(col);
          counts.erase(std::find(counts.begin(), counts.end(), c));
        }
      }
    };
    rec(0);
  }
}

}  // namespace testing
