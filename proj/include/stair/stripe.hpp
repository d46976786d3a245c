#pragma once

// Stripe geometry: an r x n grid of equally sized symbols stored
// chunk-major (chunk j occupies bytes [j*r*S, (j+1)*r*S)).  Columns
// 0..n-m-1 are data chunks, n-m..n-1 row-parity chunks; the bottom e_l cells
// of column n-m-m'+l hold inside global parities.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "stair/config.hpp"
#include "stair/gf.hpp"

namespace stair {

enum class CellRole { Data, RowParity, GlobalParity };

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const Cell&) const = default;
};

CellRole cell_role(const StairConfig& cfg, std::size_t row, std::size_t col);

/// Data cells in chunk-major order; this is the order user bytes fill a stripe.
std::vector<Cell> data_cells(const StairConfig& cfg);
/// Row-parity and inside-global-parity cells, chunk-major.
std::vector<Cell> parity_cells(const StairConfig& cfg);

/// Non-owning view of one stripe's bytes.
class StripeView {
 public:
  StripeView(std::span<std::uint8_t> bytes, std::size_t rows, std::size_t cols, std::size_t symbol_size);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t symbol_size() const { return symbol_; }
  std::span<std::uint8_t> bytes() const { return bytes_; }

  gf::Region cell(std::size_t row, std::size_t col) const {
    return bytes_.subspan((col * rows_ + row) * symbol_, symbol_);
  }
  gf::Region chunk(std::size_t col) const { return bytes_.subspan(col * rows_ * symbol_, rows_ * symbol_); }

 private:
  std::span<std::uint8_t> bytes_;
  std::size_t rows_, cols_, symbol_;
};

/// Owning stripe buffer.
class Stripe {
 public:
  Stripe(const StairConfig& cfg, std::size_t symbol_size);

  StripeView view() { return StripeView(bytes_, rows_, cols_, symbol_); }
  gf::Region cell(std::size_t row, std::size_t col) { return view().cell(row, col); }
  std::span<const std::uint8_t> cell(std::size_t row, std::size_t col) const {
    return std::span<const std::uint8_t>(bytes_).subspan((col * rows_ + row) * symbol_, symbol_);
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t symbol_size() const { return symbol_; }

  bool operator==(const Stripe& o) const { return bytes_ == o.bytes_; }

 private:
  std::size_t rows_, cols_, symbol_;
  std::vector<std::uint8_t> bytes_;
};

/// Erased chunks (whole-device failures) plus per-chunk lost sectors.
struct FailurePattern {
  std::set<std::size_t> failed_chunks;
  std::map<std::size_t, std::set<std::size_t>> sector_failures;

  bool empty() const;
  bool erased(std::size_t row, std::size_t col) const;
  /// Lost cells per column; a failed chunk counts r.
  std::vector<std::size_t> loss_counts(const StairConfig& cfg) const;
  /// Every lost cell, chunk-major.
  std::vector<Cell> cells(const StairConfig& cfg) const;
  /// Throws Error if an index is out of range or a failed chunk also lists sectors.
  void validate(const StairConfig& cfg) const;

  bool operator==(const FailurePattern&) const = default;
};

/// Coverage test on sector-failure counts alone: the nonzero counts, sorted
/// ascending, must fit under the tail of e elementwise.
bool sector_counts_covered(const std::vector<std::size_t>& e, std::vector<std::size_t> counts);

/// |failed_chunks| <= m and the sector-failure counts are covered by e.
bool pattern_within_coverage(const StairConfig& cfg, const FailurePattern& pattern);

}  // namespace stair
