#pragma once

// Systematic (eta, kappa) MDS codes with generator (I | A), A a Cauchy
// matrix.  These are the row and column building blocks of a STAIR stripe.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stair/gf.hpp"
#include "stair/matrix.hpp"

namespace stair::mds {

/// Positioned symbols of one codeword; absent ones are erasures.
struct Codeword {
  std::vector<std::vector<std::uint8_t>> symbols;
  std::vector<bool> present;

  std::size_t present_count() const;
};

class MdsCode {
 public:
  /// Requires 0 < kappa < eta <= 2^w.  The parity block is
  /// A[j][p] = 1 / (x_p + y_j) with x_p = p and y_j = (eta - kappa) + j.
  MdsCode(gf::Field field, std::size_t kappa, std::size_t eta);

  const gf::Field& field() const { return field_; }
  std::size_t kappa() const { return kappa_; }
  std::size_t eta() const { return eta_; }
  std::size_t parity_count() const { return eta_ - kappa_; }

  /// kappa x eta generator in the form (I | A).
  const gf::Matrix& generator() const { return generator_; }
  gf::Element parity_coefficient(std::size_t data_index, std::size_t parity_index) const {
    return generator_.at(data_index, kappa_ + parity_index);
  }

  /// parity[p] = sum_j A[j][p] * data[j].
  void encode(std::span<const gf::ConstRegion> data, std::span<const gf::Region> parity) const;

  /// Coefficients that rebuild the symbols at `targets` from the kappa
  /// symbols at `known`: target t = sum_k M[k][t] * known[k].
  /// Throws SingularMatrixError if `known` is not kappa distinct positions.
  gf::Matrix recovery_matrix(const std::vector<std::size_t>& known,
                             const std::vector<std::size_t>& targets) const;

  /// Fills every erased symbol.  Throws UnrecoverableError when fewer than
  /// kappa symbols are present.
  void decode(Codeword& word) const;

  /// True iff the parity positions equal the re-encoded data positions.
  bool check_codeword(std::span<const gf::ConstRegion> word) const;

 private:
  gf::Field field_;
  std::size_t kappa_, eta_;
  gf::Matrix generator_;
};

}  // namespace stair::mds
