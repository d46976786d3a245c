#pragma once

// Whole-buffer drivers: a contiguous run of stripes, each r*n*S bytes in
// chunk-major layout, encoded or repaired one stripe per task.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stair/codec.hpp"

namespace stair {

enum class StripeStatus : std::uint8_t { Ok, Unrecoverable };

std::size_t stripe_bytes(const StairConfig& cfg, std::size_t symbol_size);

/// OpenMP over stripes; the result does not depend on the thread count.
void encode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer, std::size_t symbol_size,
                    EncodeMethod method);

/// patterns[k] applies to stripe k (empty patterns are skipped).  Stripes
/// that cannot be decoded are left untouched and reported.
std::vector<StripeStatus> decode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer,
                                         std::size_t symbol_size, const std::vector<FailurePattern>& patterns);

/// Single-threaded versions, kept as the oracle for the parallel ones.
namespace reference {
void encode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer, std::size_t symbol_size,
                    EncodeMethod method);
std::vector<StripeStatus> decode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer,
                                         std::size_t symbol_size, const std::vector<FailurePattern>& patterns);
}  // namespace reference

/// Worker count: STAIR_THREADS if set and positive, else the OpenMP default.
int configured_threads();
/// Applies configured_threads() to the OpenMP runtime.
void apply_thread_limit();

}  // namespace stair
