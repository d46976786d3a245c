#pragma once

// Encoding and decoding as schedules of MDS steps over the canonical stripe.
//
// The canonical stripe is (r + e_max) x (n + m').  Its upper-left r x n block
// is the stored stripe, columns n..n+m'-1 of the upper rows hold the
// intermediate parities p', the lower rows hold the virtual parities of
// every chunk, and cell (r+h, n+l) with h < e_l is the outside global parity
// g_{h,l}, which is fixed to zero.  Every row is a codeword of C_row and
// every column a codeword of C_col, so any step that knows kappa positions
// of a line can produce any other positions of it.

#include <cstddef>
#include <string>
#include <vector>

#include "stair/config.hpp"
#include "stair/matrix.hpp"
#include "stair/mds.hpp"
#include "stair/stripe.hpp"

namespace stair {

enum class Direction { Row, Column };

/// One MDS step: rebuild `outputs` of a canonical row (positions are column
/// indices) or column (positions are row indices) from exactly kappa known
/// `inputs`.  Both lists are ascending.
struct CodingStep {
  Direction direction = Direction::Row;
  std::size_t line = 0;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;

  bool operator==(const CodingStep&) const = default;
};

using Schedule = std::vector<CodingStep>;

enum class DecodeStrategy {
  /// Repair rows with at most m losses locally first, then run the
  /// upstairs procedure on what is left.
  Practical,
  /// Worst-case upstairs decoding without the local pass.
  Upstairs,
};

/// Row-major r x n erasure mask: lost[row * n + col].
using LossMask = std::vector<bool>;

LossMask loss_mask(const StairConfig& cfg, const FailurePattern& pattern);

/// Plans the recovery of every lost cell.  Chunks with remaining losses are
/// processed in ascending order of loss count; the m chunks with the most
/// losses (ties: highest column index) are rebuilt row by row at the end.
/// Throws UnrecoverableError when the losses left after the local pass are
/// not covered by (m, e).
Schedule plan_decode(const StairConfig& cfg, const LossMask& lost, DecodeStrategy strategy);

/// Upstairs encoding: the decode plan that treats the row-parity chunks and
/// the inside global parity cells as lost.
Schedule plan_upstairs_encoding(const StairConfig& cfg);

/// Downstairs encoding: rows top to bottom, interleaved with right-to-left
/// column steps over the intermediate parities whenever a row is short of
/// known symbols.
Schedule plan_downstairs_encoding(const StairConfig& cfg);

/// Sum over steps of |inputs| * |outputs|.
std::size_t mult_xor_count(const Schedule& schedule);

/// Symbol name of a canonical cell, e.g. "d_{0,3}", "p'_{2,1}", "d*_{1,4}".
std::string cell_name(const StairConfig& cfg, std::size_t row, std::size_t col);
/// "d_{0,3}, d_{1,3} => d_{3,3} [C_col]"
std::string describe_step(const StairConfig& cfg, const CodingStep& step);

/// A schedule with the coefficient matrix of every step resolved.
class CompiledSchedule {
 public:
  struct Step {
    CodingStep step;
    gf::Matrix coefficients;  // |inputs| x |outputs|
  };

  CompiledSchedule() = default;
  /// `col_code` may be null only if the schedule has no column steps.
  CompiledSchedule(const Schedule& schedule, const mds::MdsCode* row_code, const mds::MdsCode* col_code);

  const std::vector<Step>& steps() const { return steps_; }
  std::size_t mult_xors() const { return mult_xors_; }

 private:
  std::vector<Step> steps_;
  std::size_t mult_xors_ = 0;
};

/// Symbol storage for one canonical stripe.  The stripe block aliases a
/// bound StripeView; everything else lives in owned scratch, where the
/// outside global parity cells stay zero.
class CanonicalWorkspace {
 public:
  CanonicalWorkspace(const StairConfig& cfg, std::size_t symbol_size);

  void bind(const StripeView& stripe);
  gf::Region cell(std::size_t row, std::size_t col) const {
    return gf::Region(cells_[row * cols_ + col], symbol_);
  }
  std::size_t symbol_size() const { return symbol_; }

 private:
  std::size_t rows_, cols_, r_, n_, symbol_;
  std::vector<std::uint8_t> scratch_;
  std::vector<std::uint8_t*> cells_;
};

/// Runs every step; adds the number of region operations to *mult_xors if given.
void execute(const CompiledSchedule& schedule, const gf::Field& field, CanonicalWorkspace& ws,
             std::size_t* mult_xors = nullptr);

}  // namespace stair
