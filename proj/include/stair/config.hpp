#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stair/error.hpp"

namespace stair {

/// Validated code parameters: n chunks per stripe, r sectors per chunk,
/// m tolerable chunk failures, and the sector-failure coverage vector e
/// (kept sorted ascending).  Everything about the stripe layout derives
/// from this.
class StairConfig {
 public:
  /// Throws ConfigError naming the violated constraint.  An empty e is
  /// accepted and degenerates to a plain (n, n-m) Reed-Solomon stripe.
  static StairConfig create(std::size_t n, std::size_t r, std::size_t m, std::vector<std::size_t> e,
                            unsigned w = 8);

  std::size_t n() const { return n_; }
  std::size_t r() const { return r_; }
  std::size_t m() const { return m_; }
  unsigned w() const { return w_; }
  const std::vector<std::size_t>& e() const { return e_; }

  /// Number of chunks that may carry sector failures.
  std::size_t m_prime() const { return e_.size(); }
  /// Total tolerable sector failures.
  std::size_t s() const { return s_; }
  /// Largest per-chunk tolerance (the longest tolerable burst); 0 when e is empty.
  std::size_t e_max() const { return e_.empty() ? 0 : e_.back(); }

  std::size_t data_chunks() const { return n_ - m_; }
  std::size_t data_symbols() const { return r_ * (n_ - m_) - s_; }
  std::size_t parity_symbols() const { return m_ * r_ + s_; }

  /// Canonical stripe dimensions.
  std::size_t canonical_rows() const { return r_ + e_max(); }
  std::size_t canonical_cols() const { return n_ + m_prime(); }

  /// Column holding inside global parities for e_l.
  std::size_t global_parity_column(std::size_t l) const { return n_ - m_ - m_prime() + l; }

  std::string describe() const;

  bool operator==(const StairConfig&) const = default;

 private:
  StairConfig() = default;

  std::size_t n_ = 0, r_ = 0, m_ = 0, s_ = 0;
  unsigned w_ = 8;
  std::vector<std::size_t> e_;
};

/// Formats e as "(1,1,2)".
std::string format_e(const std::vector<std::size_t>& e);

/// Parses "1,1,2" or "(1,1,2)"; an empty string or "()" is the empty vector.
std::vector<std::size_t> parse_e(const std::string& text);

}  // namespace stair
