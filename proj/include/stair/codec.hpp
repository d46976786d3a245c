#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stair/config.hpp"
#include "stair/gf.hpp"
#include "stair/mds.hpp"
#include "stair/schedule.hpp"
#include "stair/stripe.hpp"

namespace stair {

enum class EncodeMethod { Standard, Upstairs, Downstairs };

std::string to_string(EncodeMethod method);
/// "standard", "upstairs" or "downstairs"; throws Error otherwise.
EncodeMethod parse_method(const std::string& name);

/// Mult_XOR counts per stripe for each encoder and the cheapest one.
struct CostReport {
  std::size_t standard = 0;
  std::size_t upstairs = 0;
  std::size_t downstairs = 0;
  EncodeMethod chosen = EncodeMethod::Downstairs;
};

/// Closed-form counts (the standard count needs the parity relations, see
/// StairCodec::cost).
std::size_t upstairs_mult_xors(const StairConfig& cfg);
std::size_t downstairs_mult_xors(const StairConfig& cfg);
/// Argmin; ties go to downstairs, then upstairs, then standard.
EncodeMethod choose_method(std::size_t standard, std::size_t upstairs, std::size_t downstairs);

/// Fully materialized (r + e_max) x (n + m') canonical stripe.
class CanonicalStripe {
 public:
  CanonicalStripe(std::size_t rows, std::size_t cols, std::size_t symbol_size)
      : rows_(rows), cols_(cols), symbol_(symbol_size), bytes_(rows * cols * symbol_size, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  gf::Region cell(std::size_t row, std::size_t col) {
    return gf::Region(bytes_).subspan((row * cols_ + col) * symbol_, symbol_);
  }
  gf::ConstRegion cell(std::size_t row, std::size_t col) const {
    return gf::ConstRegion(bytes_).subspan((row * cols_ + col) * symbol_, symbol_);
  }

 private:
  std::size_t rows_, cols_, symbol_;
  std::vector<std::uint8_t> bytes_;
};

/// Each parity cell as a linear combination of data cells (indices into
/// data_cells(cfg)); only nonzero terms are kept.
struct ParityRelations {
  struct Term {
    std::size_t data_index;
    gf::Element coefficient;
  };
  std::vector<Cell> parity;                    // parity_cells(cfg)
  std::vector<std::vector<Term>> combination;  // one entry per parity cell
};

/// A STAIR code instance: C_row = (n + m', n - m), C_col = (r + e_max, r).
/// Immutable after construction and safe to share between threads.
class StairCodec {
 public:
  explicit StairCodec(const StairConfig& cfg);
  StairCodec(const StairConfig& cfg, gf::Field field);

  const StairConfig& config() const { return cfg_; }
  const gf::Field& field() const { return field_; }
  /// Absent when the stripe has no parity at all (m = 0 and e empty).
  const mds::MdsCode* row_code() const { return row_code_ ? &*row_code_ : nullptr; }
  /// Absent when e is empty.
  const mds::MdsCode* column_code() const { return col_code_ ? &*col_code_ : nullptr; }

  /// Fills every parity cell from the data cells.  All three methods give
  /// byte-identical stripes.
  void encode(const StripeView& stripe, EncodeMethod method) const;
  void encode(const StripeView& stripe, EncodeMethod method, CanonicalWorkspace& ws) const;
  void encode(const StripeView& stripe) const { encode(stripe, cost().chosen); }

  Schedule plan_decode(const FailurePattern& pattern, DecodeStrategy strategy = DecodeStrategy::Practical) const;
  /// Rebuilds every cell named by `pattern`.  Throws UnrecoverableError
  /// (before touching the stripe) when the pattern cannot be decoded.
  void decode(const StripeView& stripe, const FailurePattern& pattern,
              DecodeStrategy strategy = DecodeStrategy::Practical) const;
  void decode(const StripeView& stripe, const FailurePattern& pattern, DecodeStrategy strategy,
              CanonicalWorkspace& ws) const;

  /// Augments an encoded stripe with intermediate, virtual and outside
  /// global parities by direct row and column encoding.
  CanonicalStripe build_canonical(const StripeView& stripe) const;

  const Schedule& upstairs_schedule() const { return upstairs_.first; }
  const Schedule& downstairs_schedule() const { return downstairs_.first; }
  const ParityRelations& parity_relations() const { return relations_; }

  CostReport cost() const { return cost_; }
  std::size_t xor_count(EncodeMethod method) const;

  /// Parity cells whose value changes when data cell `cell` changes.
  std::vector<Cell> parity_dependents(Cell cell) const;
  /// Mean number of parity cells touched by a single data-cell update.
  double update_penalty() const;

 private:
  StairConfig cfg_;
  gf::Field field_;
  std::optional<mds::MdsCode> row_code_, col_code_;
  std::pair<Schedule, CompiledSchedule> upstairs_, downstairs_;
  ParityRelations relations_;
  std::vector<std::vector<std::size_t>> dependents_;  // per data index: indices into relations_.parity
  std::vector<std::size_t> data_index_;               // r*n -> data index, or npos
  CostReport cost_;
};

}  // namespace stair
