#pragma once

// Single-file container: a fixed little-endian header followed by whole
// encoded stripes in chunk-major layout.
//
//   magic "STAIRC1\0" | u16 version | u8 w | u16 n | u16 r | u16 m | u16 m'
//   | u16 e[m'] | u32 symbol_size | u32 poly | u64 data_length | stripes...
//
// For w = 32 the polynomial's x^32 term is implied.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stair/codec.hpp"
#include "stair/gf.hpp"

namespace stair {

class ContainerError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint16_t kContainerVersion = 1;

struct ContainerHeader {
  std::uint16_t version = kContainerVersion;
  std::uint8_t w = 8;
  std::uint16_t n = 0, r = 0, m = 0;
  std::vector<std::uint16_t> e;
  std::uint32_t symbol_size = 512;
  std::uint32_t poly = 0x11D;
  std::uint64_t data_length = 0;

  static ContainerHeader for_config(const StairConfig& cfg, std::size_t symbol_size, const gf::Field& field,
                                    std::uint64_t data_length);

  StairConfig config() const;
  gf::Field field() const;
  std::size_t header_bytes() const;
  /// Data bytes one stripe carries: (r(n-m) - s) * symbol_size.
  std::size_t stripe_data_bytes() const;
  std::size_t stripe_bytes() const;
  std::size_t stripe_count() const;

  bool operator==(const ContainerHeader&) const = default;
};

std::vector<std::uint8_t> serialize_header(const ContainerHeader& header);
/// Rejects bad magic, unknown versions, truncation and invalid parameters.
ContainerHeader parse_header(std::span<const std::uint8_t> bytes);

/// Spreads `data` over the data cells of consecutive stripes (zero padded)
/// and encodes them.  The result is header + stripes.
std::vector<std::uint8_t> build_container(const StairCodec& codec, std::size_t symbol_size,
                                          std::span<const std::uint8_t> data, EncodeMethod method);

/// Checks that the payload length matches the header; returns the header.
ContainerHeader check_container(std::span<const std::uint8_t> container);

/// The payload (stripe bytes) of a container.
std::span<std::uint8_t> container_stripes(std::span<std::uint8_t> container, const ContainerHeader& header);

/// Reads the original data back out of the data cells.
std::vector<std::uint8_t> extract_data(std::span<const std::uint8_t> container);

}  // namespace stair
