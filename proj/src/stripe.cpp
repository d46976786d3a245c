#include "stair/stripe.hpp"

#include <algorithm>
#include <string>

namespace stair {

CellRole cell_role(const StairConfig& cfg, std::size_t row, std::size_t col) {
  if (col >= cfg.data_chunks()) return CellRole::RowParity;
  const std::size_t first = cfg.n() - cfg.m() - cfg.m_prime();
  if (col >= first && row + cfg.e()[col - first] >= cfg.r()) return CellRole::GlobalParity;
  return CellRole::Data;
}

std::vector<Cell> data_cells(const StairConfig& cfg) {
  std::vector<Cell> out;
  out.reserve(cfg.data_symbols());
  for (std::size_t j = 0; j < cfg.data_chunks(); ++j)
    for (std::size_t i = 0; i < cfg.r(); ++i)
      if (cell_role(cfg, i, j) == CellRole::Data) out.push_back({i, j});
  return out;
}

std::vector<Cell> parity_cells(const StairConfig& cfg) {
  std::vector<Cell> out;
  out.reserve(cfg.parity_symbols());
  for (std::size_t j = 0; j < cfg.n(); ++j)
    for (std::size_t i = 0; i < cfg.r(); ++i)
      if (cell_role(cfg, i, j) != CellRole::Data) out.push_back({i, j});
  return out;
}

StripeView::StripeView(std::span<std::uint8_t> bytes, std::size_t rows, std::size_t cols, std::size_t symbol_size)
    : bytes_(bytes), rows_(rows), cols_(cols), symbol_(symbol_size) {
  if (bytes.size() != rows * cols * symbol_size)
    throw Error("stripe buffer has " + std::to_string(bytes.size()) + " bytes, expected " +
                std::to_string(rows * cols * symbol_size));
}

Stripe::Stripe(const StairConfig& cfg, std::size_t symbol_size)
    : rows_(cfg.r()), cols_(cfg.n()), symbol_(symbol_size), bytes_(cfg.r() * cfg.n() * symbol_size, 0) {
  if (symbol_size == 0) throw Error("symbol size must be positive");
}

bool FailurePattern::empty() const {
  if (!failed_chunks.empty()) return false;
  return std::all_of(sector_failures.begin(), sector_failures.end(),
                     [](const auto& kv) { return kv.second.empty(); });
}

bool FailurePattern::erased(std::size_t row, std::size_t col) const {
  if (failed_chunks.count(col)) return true;
  auto it = sector_failures.find(col);
  return it != sector_failures.end() && it->second.count(row);
}

std::vector<std::size_t> FailurePattern::loss_counts(const StairConfig& cfg) const {
  std::vector<std::size_t> counts(cfg.n(), 0);
  for (auto c : failed_chunks)
    if (c < cfg.n()) counts[c] = cfg.r();
  for (const auto& [c, rows] : sector_failures)
    if (c < cfg.n() && !failed_chunks.count(c)) counts[c] = rows.size();
  return counts;
}

std::vector<Cell> FailurePattern::cells(const StairConfig& cfg) const {
  std::vector<Cell> out;
  for (std::size_t j = 0; j < cfg.n(); ++j)
    for (std::size_t i = 0; i < cfg.r(); ++i)
      if (erased(i, j)) out.push_back({i, j});
  return out;
}

void FailurePattern::validate(const StairConfig& cfg) const {
  for (auto c : failed_chunks)
    if (c >= cfg.n()) throw Error("failed chunk " + std::to_string(c) + " out of range");
  for (const auto& [c, rows] : sector_failures) {
    if (c >= cfg.n()) throw Error("sector failure in chunk " + std::to_string(c) + " out of range");
    if (failed_chunks.count(c) && !rows.empty())
      throw Error("chunk " + std::to_string(c) + " is both failed and listed with sector failures");
    for (auto row : rows)
      if (row >= cfg.r()) throw Error("sector " + std::to_string(row) + " out of range");
  }
}

bool sector_counts_covered(const std::vector<std::size_t>& e, std::vector<std::size_t> counts) {
  std::erase(counts, std::size_t{0});
  if (counts.size() > e.size()) return false;
  std::sort(counts.begin(), counts.end());
  const std::size_t k = counts.size(), mp = e.size();
  for (std::size_t t = 0; t < k; ++t)
    if (counts[k - 1 - t] > e[mp - 1 - t]) return false;
  return true;
}

bool pattern_within_coverage(const StairConfig& cfg, const FailurePattern& pattern) {
  if (pattern.failed_chunks.size() > cfg.m()) return false;
  std::vector<std::size_t> counts;
  for (const auto& [c, rows] : pattern.sector_failures)
    if (!pattern.failed_chunks.count(c)) counts.push_back(rows.size());
  return sector_counts_covered(cfg.e(), std::move(counts));
}

}  // namespace stair
