#include "stair/schedule.hpp"

#include <algorithm>
#include <numeric>

namespace stair {

namespace {

// Known/unknown state of the canonical grid during planning.
class Knowledge {
 public:
  explicit Knowledge(const StairConfig& cfg)
      : rows_(cfg.canonical_rows()), cols_(cfg.canonical_cols()), known_(rows_ * cols_, false) {
    for (std::size_t l = 0; l < cfg.m_prime(); ++l)
      for (std::size_t h = 0; h < cfg.e()[l]; ++h) set(cfg.r() + h, cfg.n() + l);
  }

  bool at(std::size_t row, std::size_t col) const { return known_[row * cols_ + col]; }
  void set(std::size_t row, std::size_t col) { known_[row * cols_ + col] = true; }

  void apply(const CodingStep& step) {
    for (auto p : step.outputs) step.direction == Direction::Row ? set(step.line, p) : set(p, step.line);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<bool> known_;
};

// First `count` known positions of canonical row `row` among columns [0, limit).
std::vector<std::size_t> known_in_row(const Knowledge& k, std::size_t row, std::size_t limit, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < limit && out.size() < count; ++c)
    if (k.at(row, c)) out.push_back(c);
  return out;
}

std::vector<std::size_t> known_in_col(const Knowledge& k, std::size_t col, std::size_t limit, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < limit && out.size() < count; ++r)
    if (k.at(r, col)) out.push_back(r);
  return out;
}

std::string subscript(std::size_t a, std::size_t b) { return "_{" + std::to_string(a) + "," + std::to_string(b) + "}"; }

}  // namespace

LossMask loss_mask(const StairConfig& cfg, const FailurePattern& pattern) {
  pattern.validate(cfg);
  LossMask lost(cfg.r() * cfg.n(), false);
  for (const auto& cell : pattern.cells(cfg)) lost[cell.row * cfg.n() + cell.col] = true;
  return lost;
}

Schedule plan_decode(const StairConfig& cfg, const LossMask& lost, DecodeStrategy strategy) {
  const std::size_t n = cfg.n(), r = cfg.r(), k = cfg.data_chunks();
  if (lost.size() != r * n) throw Error("loss mask has the wrong size");

  Knowledge known(cfg);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!lost[i * n + j]) known.set(i, j);

  Schedule plan;
  auto emit = [&](CodingStep step) {
    known.apply(step);
    plan.push_back(std::move(step));
  };
  auto lost_in_row = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if (!known.at(i, j)) out.push_back(j);
    return out;
  };

  // Local pass: a row with at most m losses still has kappa = n - m symbols.
  if (strategy == DecodeStrategy::Practical) {
    for (std::size_t i = 0; i < r; ++i) {
      auto missing = lost_in_row(i);
      if (missing.empty() || missing.size() > cfg.m()) continue;
      emit({Direction::Row, i, known_in_row(known, i, n, k), std::move(missing)});
    }
  }

  std::vector<std::size_t> remaining(n, 0);
  std::vector<std::size_t> damaged;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < r; ++i) remaining[j] += known.at(i, j) ? 0 : 1;
    if (remaining[j]) damaged.push_back(j);
  }

  // The m most damaged chunks are left for the final row pass.
  std::sort(damaged.begin(), damaged.end(), [&](std::size_t a, std::size_t b) {
    return remaining[a] != remaining[b] ? remaining[a] > remaining[b] : a > b;
  });
  const std::size_t deferred = std::min(cfg.m(), damaged.size());
  std::vector<std::size_t> partial(damaged.begin() + static_cast<std::ptrdiff_t>(deferred), damaged.end());
  std::sort(partial.begin(), partial.end(), [&](std::size_t a, std::size_t b) {
    return remaining[a] != remaining[b] ? remaining[a] < remaining[b] : a < b;
  });
  {
    std::vector<std::size_t> counts;
    for (auto j : partial) counts.push_back(remaining[j]);
    if (!sector_counts_covered(cfg.e(), counts))
      throw UnrecoverableError("failure pattern exceeds the coverage of " + cfg.describe());
  }

  const std::size_t depth = partial.empty() ? 0 : remaining[partial.back()];
  std::vector<bool> is_partial(n, false), virtuals_ready(n, false);
  for (auto j : partial) is_partial[j] = true;

  // Column step on a partial chunk: r - c surviving cells plus its first c
  // virtual parities give r symbols of C_col.
  auto decode_chunk = [&](std::size_t j) {
    CodingStep step{Direction::Column, j, known_in_col(known, j, r + depth, r), {}};
    for (std::size_t i = 0; i < r + depth; ++i)
      if (!known.at(i, j)) step.outputs.push_back(i);
    emit(std::move(step));
  };
  // Column step on an intact chunk: its virtual parities for rows r..r+depth-1.
  auto extend_chunk = [&](std::size_t j) {
    CodingStep step{Direction::Column, j, {}, {}};
    step.inputs.resize(r);
    std::iota(step.inputs.begin(), step.inputs.end(), std::size_t{0});
    for (std::size_t h = 0; h < depth; ++h) step.outputs.push_back(r + h);
    emit(std::move(step));
    virtuals_ready[j] = true;
  };

  std::size_t next = 0;
  for (std::size_t h = 0; h < depth; ++h) {
    while (next < partial.size() && remaining[partial[next]] == h) decode_chunk(partial[next++]);

    // Augmented row r+h: free symbols first (outside global parities and
    // chunks already extended), then extend intact chunks left to right.
    const std::size_t row = r + h;
    std::vector<std::size_t> inputs;
    for (std::size_t c = 0; c < cfg.canonical_cols() && inputs.size() < k; ++c)
      if (c >= n && known.at(row, c)) inputs.push_back(c);
    for (std::size_t c = 0; c < n && inputs.size() < k; ++c)
      if (known.at(row, c)) inputs.push_back(c);
    for (std::size_t c = 0; c < n && inputs.size() < k; ++c) {
      if (is_partial[c] || virtuals_ready[c] || known.at(row, c)) continue;
      bool intact = true;
      for (std::size_t i = 0; i < r; ++i) intact = intact && known.at(i, c);
      if (!intact) continue;
      extend_chunk(c);
      inputs.push_back(c);
    }
    if (inputs.size() < k) throw UnrecoverableError("not enough symbols in augmented row " + std::to_string(row));
    std::sort(inputs.begin(), inputs.end());

    std::vector<std::size_t> outputs(partial.begin() + static_cast<std::ptrdiff_t>(next), partial.end());
    std::sort(outputs.begin(), outputs.end());
    emit({Direction::Row, row, std::move(inputs), std::move(outputs)});
  }
  while (next < partial.size()) decode_chunk(partial[next++]);

  for (std::size_t i = 0; i < r; ++i) {
    auto missing = lost_in_row(i);
    if (missing.empty()) continue;
    auto inputs = known_in_row(known, i, n, k);
    if (inputs.size() < k) throw UnrecoverableError("row " + std::to_string(i) + " has too many losses");
    emit({Direction::Row, i, std::move(inputs), std::move(missing)});
  }
  return plan;
}

Schedule plan_upstairs_encoding(const StairConfig& cfg) {
  LossMask lost(cfg.r() * cfg.n(), false);
  for (std::size_t i = 0; i < cfg.r(); ++i)
    for (std::size_t j = 0; j < cfg.n(); ++j) lost[i * cfg.n() + j] = cell_role(cfg, i, j) != CellRole::Data;
  return plan_decode(cfg, lost, DecodeStrategy::Upstairs);
}

Schedule plan_downstairs_encoding(const StairConfig& cfg) {
  const std::size_t r = cfg.r(), n = cfg.n(), k = cfg.data_chunks(), cols = cfg.canonical_cols();
  Knowledge known(cfg);
  for (const auto& c : data_cells(cfg)) known.set(c.row, c.col);

  Schedule plan;
  std::vector<bool> column_done(cfg.m_prime(), false);
  std::size_t i = 0;
  while (i < r) {
    auto inputs = known_in_row(known, i, cols, k);
    if (inputs.size() == k) {
      CodingStep step{Direction::Row, i, std::move(inputs), {}};
      for (std::size_t c = 0; c < cols; ++c)
        if (!known.at(i, c)) step.outputs.push_back(c);
      known.apply(step);
      if (!step.outputs.empty()) plan.push_back(std::move(step));
      ++i;
      continue;
    }
    // Short of symbols: extend the rightmost intermediate-parity column that
    // has r known entries (its computed p' plus zero outside parities).
    bool progressed = false;
    for (std::size_t l = cfg.m_prime(); l-- > 0;) {
      if (column_done[l]) continue;
      const std::size_t col = n + l;
      auto col_inputs = known_in_col(known, col, r + cfg.e()[l], r);
      if (col_inputs.size() < r) continue;
      CodingStep step{Direction::Column, col, std::move(col_inputs), {}};
      for (std::size_t row = 0; row < r; ++row)
        if (!known.at(row, col)) step.outputs.push_back(row);
      known.apply(step);
      plan.push_back(std::move(step));
      column_done[l] = true;
      progressed = true;
      break;
    }
    if (!progressed) throw Error("downstairs encoding stalled at row " + std::to_string(i));
  }
  return plan;
}

std::size_t mult_xor_count(const Schedule& schedule) {
  std::size_t total = 0;
  for (const auto& s : schedule) total += s.inputs.size() * s.outputs.size();
  return total;
}

std::string cell_name(const StairConfig& cfg, std::size_t row, std::size_t col) {
  const std::size_t r = cfg.r(), n = cfg.n(), k = cfg.data_chunks();
  if (col >= n) {
    const std::size_t l = col - n;
    if (row < r) return "p'" + subscript(row, l);
    return row - r < cfg.e()[l] ? "g" + subscript(row - r, l) : "*";
  }
  if (row >= r) return (col < k ? "d*" + subscript(row - r, col) : "p*" + subscript(row - r, col - k));
  switch (cell_role(cfg, row, col)) {
    case CellRole::Data: return "d" + subscript(row, col);
    case CellRole::RowParity: return "p" + subscript(row, col - k);
    case CellRole::GlobalParity: {
      const std::size_t l = col - cfg.global_parity_column(0);
      return "g^" + subscript(row - (r - cfg.e()[l]), l);
    }
  }
  return "?";
}

std::string describe_step(const StairConfig& cfg, const CodingStep& step) {
  auto name = [&](std::size_t p) {
    return step.direction == Direction::Row ? cell_name(cfg, step.line, p) : cell_name(cfg, p, step.line);
  };
  std::string out;
  for (std::size_t i = 0; i < step.inputs.size(); ++i) out += (i ? ", " : "") + name(step.inputs[i]);
  out += " => ";
  for (std::size_t i = 0; i < step.outputs.size(); ++i) out += (i ? ", " : "") + name(step.outputs[i]);
  return out + (step.direction == Direction::Row ? " [C_row]" : " [C_col]");
}

CompiledSchedule::CompiledSchedule(const Schedule& schedule, const mds::MdsCode* row_code,
                                   const mds::MdsCode* col_code) {
  steps_.reserve(schedule.size());
  for (const auto& step : schedule) {
    const mds::MdsCode* code = step.direction == Direction::Row ? row_code : col_code;
    if (!code) throw Error("schedule needs a code that this configuration does not have");
    steps_.push_back({step, code->recovery_matrix(step.inputs, step.outputs)});
    mult_xors_ += step.inputs.size() * step.outputs.size();
  }
}

CanonicalWorkspace::CanonicalWorkspace(const StairConfig& cfg, std::size_t symbol_size)
    : rows_(cfg.canonical_rows()),
      cols_(cfg.canonical_cols()),
      r_(cfg.r()),
      n_(cfg.n()),
      symbol_(symbol_size),
      scratch_((rows_ * cols_ - r_ * n_) * symbol_size, 0),
      cells_(rows_ * cols_, nullptr) {
  std::size_t slot = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i >= r_ || j >= n_) cells_[i * cols_ + j] = scratch_.data() + (slot++) * symbol_;
}

void CanonicalWorkspace::bind(const StripeView& stripe) {
  if (stripe.rows() != r_ || stripe.cols() != n_ || stripe.symbol_size() != symbol_)
    throw Error("stripe does not match the workspace geometry");
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < n_; ++j) cells_[i * cols_ + j] = stripe.cell(i, j).data();
}

void execute(const CompiledSchedule& schedule, const gf::Field& field, CanonicalWorkspace& ws,
             std::size_t* mult_xors) {
  for (const auto& [step, coef] : schedule.steps()) {
    const bool row = step.direction == Direction::Row;
    auto at = [&](std::size_t p) { return row ? ws.cell(step.line, p) : ws.cell(p, step.line); };
    for (std::size_t t = 0; t < step.outputs.size(); ++t) {
      gf::Region dst = at(step.outputs[t]);
      field.mult_region(at(step.inputs[0]), dst, coef.at(0, t));
      for (std::size_t a = 1; a < step.inputs.size(); ++a) field.mult_xor(at(step.inputs[a]), dst, coef.at(a, t));
    }
    if (mult_xors) *mult_xors += step.inputs.size() * step.outputs.size();
  }
}

}  // namespace stair
