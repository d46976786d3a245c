#pragma once

// Arithmetic over GF(2^w) for w in {8, 16, 32}, plus the region kernels
// (multiply a byte region by a constant and XOR it into another region)
// that every encode and decode step reduces to.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "stair/error.hpp"

namespace stair::gf {

using Element = std::uint32_t;
using Region = std::span<std::uint8_t>;
using ConstRegion = std::span<const std::uint8_t>;

class FieldError : public Error {
 public:
  using Error::Error;
};

/// Polynomial used when the caller does not pick one.  All three are
/// primitive, so x generates the multiplicative group.
std::uint64_t default_polynomial(unsigned w);

/// True iff `poly` has degree exactly `degree` and no nontrivial factor
/// over GF(2) (Ben-Or test).
bool is_irreducible(std::uint64_t poly, unsigned degree);

/// Bitwise shift-and-add multiplication.  Independent of any table; used to
/// build the tables and as the test oracle.
Element reference_mul(Element a, Element b, unsigned w, std::uint64_t poly);

/// dst ^= src, byte by byte.
void xor_region(ConstRegion src, Region dst);

class Field {
 public:
  /// GF(2^8) over 0x11D.
  Field();
  /// poly == 0 selects default_polynomial(w).
  explicit Field(unsigned w, std::uint64_t poly = 0);

  unsigned w() const { return w_; }
  std::uint64_t polynomial() const { return poly_; }
  std::size_t element_bytes() const { return w_ / 8; }
  Element max_element() const {
    return static_cast<Element>((std::uint64_t{1} << w_) - 1);
  }
  /// Number of field elements, 2^w.
  std::uint64_t order() const { return std::uint64_t{1} << w_; }

  Element mul(Element a, Element b) const;
  Element inverse(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inverse(b)); }

  /// dst <- dst XOR a*src.  Lengths must match and be a multiple of
  /// element_bytes().  Multi-byte elements are little-endian.
  void mult_xor(ConstRegion src, Region dst, Element a) const;
  /// dst <- a*src.
  void mult_region(ConstRegion src, Region dst, Element a) const;

  bool operator==(const Field& o) const { return w_ == o.w_ && poly_ == o.poly_; }

 private:
  struct Tables;

  void check_regions(ConstRegion src, Region dst) const;
  template <bool Accumulate>
  void region_op(ConstRegion src, Region dst, Element a) const;

  unsigned w_ = 8;
  std::uint64_t poly_ = 0x11D;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace stair::gf
