#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stair/config.hpp"
#include "stair/reliability.hpp"
#include "stair/stripe.hpp"

namespace stair::cli {

/// "chunks=3,7;sectors=4:2,5:1" (chunk:count) or "cells=4:0,4:3" (chunk:row),
/// clauses separated by ';'.  Empty text is an empty spec.
struct PatternSpec {
  std::vector<std::size_t> chunks;
  std::vector<std::pair<std::size_t, std::size_t>> sector_counts;
  std::vector<Cell> cells;

  bool empty() const { return chunks.empty() && sector_counts.empty() && cells.empty(); }
};

PatternSpec parse_pattern_spec(const std::string& text);

/// Rows for `sector_counts` are drawn from `seed`.
FailurePattern realize(const PatternSpec& spec, const StairConfig& cfg, std::uint64_t seed);

/// One entry per damaged stripe.
nlohmann::json make_manifest(const StairConfig& cfg, std::size_t symbol_size,
                             const std::vector<std::pair<std::size_t, FailurePattern>>& damage);
/// Expands a manifest into one pattern per stripe.
std::vector<FailurePattern> read_manifest(const nlohmann::json& manifest, const StairConfig& cfg, std::size_t stripes);

struct Scenario {
  reliability::ReliabilityParams params;
  std::size_t n = 8, r = 16, m = 1;
  std::vector<double> p_bits{1e-14};
  std::vector<reliability::CodeSpec> codes;
};

/// key = value lines, '#' comments.  Keys: user_pb, capacity_gb,
/// sector_bytes, mttf_hours, mttr_hours, n, r, m, model (independent |
/// correlated), b1, alpha, p_bit (comma list), codes (';' list of rs,
/// sd:S, stair:E).
Scenario parse_scenario(const std::string& text);

/// Every ascending e with entries in [1, r], sum s and length <= max_len.
std::vector<std::vector<std::size_t>> enumerate_e(std::size_t s, std::size_t max_len, std::size_t r);

/// Rows printed as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::string csv() const;
  nlohmann::json json() const;
  std::string render(const std::string& format) const;
};

}  // namespace stair::cli
