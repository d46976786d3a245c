#include "stair/gf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <vector>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace stair::gf {

namespace {

static_assert(std::endian::native == std::endian::little,
              "region kernels assume a little-endian host");

int degree_of(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t f) {
  const int df = degree_of(f);
  for (int da = degree_of(a); da >= df; da = degree_of(a)) a ^= f << (da - df);
  return a;
}

// Carry-less product of two polynomials of degree < 32, reduced mod f.
std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
  std::uint64_t acc = 0;
  a = poly_mod(a, f);
  b = poly_mod(b, f);
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a = poly_mod(a << 1, f);
  }
  return poly_mod(acc, f);
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

Element pow_ref(Element base, std::uint64_t e, unsigned w, std::uint64_t poly) {
  Element result = 1;
  while (e) {
    if (e & 1) result = reference_mul(result, base, w, poly);
    base = reference_mul(base, base, w, poly);
    e >>= 1;
  }
  return result;
}

}  // namespace

std::uint64_t default_polynomial(unsigned w) {
  switch (w) {
    case 8: return 0x11D;
    case 16: return 0x1100B;
    case 32: return 0x100400007ULL;
    default: throw FieldError("unsupported field width " + std::to_string(w) + " (expected 8, 16 or 32)");
  }
}

bool is_irreducible(std::uint64_t poly, unsigned degree) {
  if (degree == 0 || degree > 32 || degree_of(poly) != static_cast<int>(degree)) return false;
  // f is irreducible iff gcd(x^(2^i) - x, f) == 1 for every i <= deg/2.
  std::uint64_t x_pow = 2;  // x^(2^i) mod f, starting at i = 0
  for (unsigned i = 1; i <= degree / 2; ++i) {
    x_pow = poly_mulmod(x_pow, x_pow, poly);
    if (poly_gcd(poly, x_pow ^ 2) != 1) return false;
  }
  return true;
}

Element reference_mul(Element a, Element b, unsigned w, std::uint64_t poly) {
  const std::uint64_t top = std::uint64_t{1} << w;
  std::uint64_t x = a, acc = 0;
  while (b) {
    if (b & 1) acc ^= x;
    b >>= 1;
    x <<= 1;
    if (x & top) x ^= poly;
  }
  return static_cast<Element>(acc);
}

void xor_region(ConstRegion src, Region dst) {
  if (src.size() != dst.size()) throw FieldError("xor_region: length mismatch");
  std::size_t i = 0;
  for (; i + 8 <= src.size(); i += 8) {
    std::uint64_t a, b;
    std::memcpy(&a, src.data() + i, 8);
    std::memcpy(&b, dst.data() + i, 8);
    b ^= a;
    std::memcpy(dst.data() + i, &b, 8);
  }
  for (; i < src.size(); ++i) dst[i] ^= src[i];
}

struct Field::Tables {
  // w = 8: full product and inverse tables.
  std::vector<std::uint8_t> mul8;
  std::array<std::uint8_t, 256> inv8{};
  // w = 16: logarithms relative to a generator.
  std::vector<std::uint32_t> log16;
  std::vector<std::uint16_t> exp16;
};

Field::Field() : Field(8, 0x11D) {}

Field::Field(unsigned w, std::uint64_t poly) : w_(w) {
  const std::uint64_t fallback = default_polynomial(w);  // rejects unsupported widths
  poly_ = poly == 0 ? fallback : poly;
  if (!is_irreducible(poly_, w)) {
    char hex[24];
    std::snprintf(hex, sizeof hex, "0x%llx", static_cast<unsigned long long>(poly_));
    throw FieldError(std::string("polynomial ") + hex + " is not irreducible of degree " + std::to_string(w));
  }

  auto t = std::make_shared<Tables>();
  if (w == 8) {
    t->mul8.resize(256 * 256);
    for (unsigned a = 0; a < 256; ++a)
      for (unsigned b = 0; b < 256; ++b)
        t->mul8[a * 256 + b] = static_cast<std::uint8_t>(reference_mul(a, b, 8, poly_));
    for (unsigned a = 1; a < 256; ++a)
      for (unsigned b = 1; b < 256; ++b)
        if (t->mul8[a * 256 + b] == 1) {
          t->inv8[a] = static_cast<std::uint8_t>(b);
          break;
        }
  } else if (w == 16) {
    // Any irreducible polynomial is accepted, so x need not be primitive:
    // search for a generator of the multiplicative group (order 65535).
    constexpr std::uint64_t q1 = 65535;
    constexpr std::array<std::uint64_t, 4> prime_factors{3, 5, 17, 257};
    Element g = 2;
    for (;; ++g) {
      bool ok = std::all_of(prime_factors.begin(), prime_factors.end(),
                            [&](std::uint64_t p) { return pow_ref(g, q1 / p, 16, poly_) != 1; });
      if (ok) break;
    }
    t->log16.assign(65536, 0);
    t->exp16.assign(2 * q1, 0);
    Element v = 1;
    for (std::uint32_t i = 0; i < q1; ++i) {
      t->exp16[i] = t->exp16[i + q1] = static_cast<std::uint16_t>(v);
      t->log16[v] = i;
      v = reference_mul(v, g, 16, poly_);
    }
  }
  tables_ = std::move(t);
}

Element Field::mul(Element a, Element b) const {
  switch (w_) {
    case 8: return tables_->mul8[(a & 0xFF) * 256 + (b & 0xFF)];
    case 16:
      if (a == 0 || b == 0) return 0;
      return tables_->exp16[tables_->log16[a] + tables_->log16[b]];
    default: return reference_mul(a, b, w_, poly_);
  }
}

Element Field::inverse(Element a) const {
  if (a == 0) throw FieldError("inverse of zero");
  switch (w_) {
    case 8: return tables_->inv8[a];
    case 16: return tables_->exp16[65535 - tables_->log16[a]];
    default: return pow_ref(a, order() - 2, w_, poly_);
  }
}

void Field::check_regions(ConstRegion src, Region dst) const {
  if (src.size() != dst.size())
    throw FieldError("region length mismatch (" + std::to_string(src.size()) + " vs " +
                     std::to_string(dst.size()) + ")");
  if (src.size() % element_bytes() != 0)
    throw FieldError("region length " + std::to_string(src.size()) +
                     " is not a multiple of the element width");
}

namespace {

template <bool Accumulate>
void store_byte(std::uint8_t* d, std::uint8_t v) {
  if constexpr (Accumulate) *d ^= v; else *d = v;
}

template <bool Accumulate>
void region8(const std::uint8_t* row, const std::uint8_t* src, std::uint8_t* dst, std::size_t len) {
  std::size_t i = 0;
#if defined(__AVX2__)
  // Split-nibble lookup: a*x = a*(x & 0xF) ^ a*(x & 0xF0).
  alignas(32) std::uint8_t lo[32], hi[32];
  for (int k = 0; k < 16; ++k) {
    lo[k] = lo[k + 16] = row[k];
    hi[k] = hi[k + 16] = row[k << 4];
  }
  const __m256i tlo = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
  const __m256i thi = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
  const __m256i mask = _mm256_set1_epi8(0x0F);
  for (; i + 32 <= len; i += 32) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i pl = _mm256_shuffle_epi8(tlo, _mm256_and_si256(x, mask));
    __m256i ph = _mm256_shuffle_epi8(thi, _mm256_and_si256(_mm256_srli_epi64(x, 4), mask));
    __m256i p = _mm256_xor_si256(pl, ph);
    if constexpr (Accumulate)
      p = _mm256_xor_si256(p, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), p);
  }
#endif
  for (; i < len; ++i) store_byte<Accumulate>(dst + i, row[src[i]]);
}

// w = 16 and 32: multiplication by a constant is GF(2)-linear, so a*x is the
// XOR of one 256-entry table lookup per input byte.
template <typename Word, bool Accumulate>
void region_wide(const Field& f, const std::uint8_t* src, std::uint8_t* dst, std::size_t len, Element a) {
  constexpr std::size_t kBytes = sizeof(Word);
  std::array<std::array<Word, 256>, kBytes> table{};
  for (std::size_t k = 0; k < kBytes; ++k) {
    std::array<Word, 8> basis;
    for (unsigned bit = 0; bit < 8; ++bit)
      basis[bit] = static_cast<Word>(f.mul(a, Element{1} << (8 * k + bit)));
    for (unsigned v = 1; v < 256; ++v)
      table[k][v] = table[k][v & (v - 1)] ^ basis[std::countr_zero(v)];
  }
  for (std::size_t i = 0; i < len; i += kBytes) {
    Word prod = 0;
    for (std::size_t k = 0; k < kBytes; ++k) prod ^= table[k][src[i + k]];
    if constexpr (Accumulate) {
      Word cur;
      std::memcpy(&cur, dst + i, kBytes);
      prod ^= cur;
    }
    std::memcpy(dst + i, &prod, kBytes);
  }
}

}  // namespace

template <bool Accumulate>
void Field::region_op(ConstRegion src, Region dst, Element a) const {
  check_regions(src, dst);
  if (a == 0) {
    if constexpr (!Accumulate) std::fill(dst.begin(), dst.end(), std::uint8_t{0});
    return;
  }
  if (a == 1) {
    if constexpr (Accumulate) xor_region(src, dst);
    else if (src.data() != dst.data()) std::memmove(dst.data(), src.data(), src.size());
    return;
  }
  switch (w_) {
    case 8: region8<Accumulate>(&tables_->mul8[(a & 0xFF) * 256], src.data(), dst.data(), src.size()); break;
    case 16: region_wide<std::uint16_t, Accumulate>(*this, src.data(), dst.data(), src.size(), a); break;
    default: region_wide<std::uint32_t, Accumulate>(*this, src.data(), dst.data(), src.size(), a); break;
  }
}

void Field::mult_xor(ConstRegion src, Region dst, Element a) const { region_op<true>(src, dst, a); }

void Field::mult_region(ConstRegion src, Region dst, Element a) const { region_op<false>(src, dst, a); }

}  // namespace stair::gf
