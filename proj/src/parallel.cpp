#include "stair/parallel.hpp"

#include <cstdlib>
#include <exception>

#include <omp.h>

namespace stair {

namespace {

std::size_t stripe_count(const StairConfig& cfg, std::span<std::uint8_t> buffer, std::size_t symbol_size) {
  const std::size_t sb = stripe_bytes(cfg, symbol_size);
  if (sb == 0 || buffer.size() % sb != 0) throw Error("buffer is not a whole number of stripes");
  return buffer.size() / sb;
}

StripeView stripe_at(const StairConfig& cfg, std::span<std::uint8_t> buffer, std::size_t symbol_size, std::size_t k) {
  const std::size_t sb = stripe_bytes(cfg, symbol_size);
  return StripeView(buffer.subspan(k * sb, sb), cfg.r(), cfg.n(), symbol_size);
}

}  // namespace

std::size_t stripe_bytes(const StairConfig& cfg, std::size_t symbol_size) { return cfg.r() * cfg.n() * symbol_size; }

void encode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer, std::size_t symbol_size,
                    EncodeMethod method) {
  const auto& cfg = codec.config();
  const auto count = static_cast<std::ptrdiff_t>(stripe_count(cfg, buffer, symbol_size));
  std::exception_ptr failure;
#pragma omp parallel
  {
    CanonicalWorkspace ws(cfg, symbol_size);
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      try {
        codec.encode(stripe_at(cfg, buffer, symbol_size, k), method, ws);
      } catch (...) {
#pragma omp critical(stair_encode_error)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<StripeStatus> decode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer,
                                         std::size_t symbol_size, const std::vector<FailurePattern>& patterns) {
  const auto& cfg = codec.config();
  const std::size_t count = stripe_count(cfg, buffer, symbol_size);
  if (patterns.size() != count) throw Error("need one failure pattern per stripe");
  std::vector<StripeStatus> status(count, StripeStatus::Ok);
  std::exception_ptr failure;
#pragma omp parallel
  {
    CanonicalWorkspace ws(cfg, symbol_size);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
      if (patterns[k].empty()) continue;
      try {
        codec.decode(stripe_at(cfg, buffer, symbol_size, k), patterns[k], DecodeStrategy::Practical, ws);
      } catch (const UnrecoverableError&) {
        status[k] = StripeStatus::Unrecoverable;
      } catch (...) {
#pragma omp critical(stair_decode_error)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return status;
}

namespace reference {

void encode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer, std::size_t symbol_size,
                    EncodeMethod method) {
  const auto& cfg = codec.config();
  const std::size_t count = stripe_count(cfg, buffer, symbol_size);
  for (std::size_t k = 0; k < count; ++k) codec.encode(stripe_at(cfg, buffer, symbol_size, k), method);
}

std::vector<StripeStatus> decode_stripes(const StairCodec& codec, std::span<std::uint8_t> buffer,
                                         std::size_t symbol_size, const std::vector<FailurePattern>& patterns) {
  const auto& cfg = codec.config();
  const std::size_t count = stripe_count(cfg, buffer, symbol_size);
  if (patterns.size() != count) throw Error("need one failure pattern per stripe");
  std::vector<StripeStatus> status(count, StripeStatus::Ok);
  for (std::size_t k = 0; k < count; ++k) {
    if (patterns[k].empty()) continue;
    try {
      codec.decode(stripe_at(cfg, buffer, symbol_size, k), patterns[k]);
    } catch (const UnrecoverableError&) {
      status[k] = StripeStatus::Unrecoverable;
    }
  }
  return status;
}

}  // namespace reference

int configured_threads() {
  if (const char* env = std::getenv("STAIR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

void apply_thread_limit() { omp_set_num_threads(configured_threads()); }

}  // namespace stair
