#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "stair/codec.hpp"
#include "stair/parallel.hpp"
#include "stair/sim.hpp"

using namespace stair;

namespace {

struct Fixture {
  StairConfig cfg;
  StairCodec codec;
  std::size_t symbol;
  std::vector<std::uint8_t> buf;
  std::vector<FailurePattern> patterns;

  Fixture(std::vector<std::size_t> e, std::size_t symbol_size = 4096, std::size_t stripes = 64)
      : cfg(StairConfig::create(16, 16, 2, std::move(e))), codec(cfg), symbol(symbol_size) {
    buf.resize(stripes * stripe_bytes(cfg, symbol));
    std::mt19937_64 rng(1);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
    for (std::size_t k = 0; k < stripes; ++k) patterns.push_back(sim::sample_pattern(cfg, k, true));
  }
  std::int64_t data_bytes() const {
    return static_cast<std::int64_t>(buf.size() / stripe_bytes(cfg, symbol) * cfg.data_symbols() * symbol);
  }
};

const std::vector<std::vector<std::size_t>> kShapes = {{4}, {1, 3}, {2, 2}, {1, 1, 2}, {1, 1, 1, 1}};

void BM_Encode(benchmark::State& state) {
  Fixture f(kShapes[state.range(0)]);
  const auto method = static_cast<EncodeMethod>(state.range(1));
  const bool parallel = state.range(2) != 0;
  for (auto _ : state) {
    if (parallel)
      encode_stripes(f.codec, f.buf, f.symbol, method);
    else
      reference::encode_stripes(f.codec, f.buf, f.symbol, method);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(state.iterations() * f.data_bytes());
  state.SetLabel(format_e(f.cfg.e()) + " " + to_string(method) + (parallel ? " omp" : " serial"));
}

void BM_Decode(benchmark::State& state) {
  Fixture f(kShapes[state.range(0)]);
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    if (parallel)
      decode_stripes(f.codec, f.buf, f.symbol, f.patterns);
    else
      reference::decode_stripes(f.codec, f.buf, f.symbol, f.patterns);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(state.iterations() * f.data_bytes());
  state.SetLabel(format_e(f.cfg.e()) + (parallel ? " omp" : " serial"));
}

void encode_args(benchmark::internal::Benchmark* b) {
  for (int shape = 0; shape < static_cast<int>(kShapes.size()); ++shape)
    for (int method = 0; method < 3; ++method)
      for (int par = 0; par < 2; ++par) b->Args({shape, method, par});
}

void decode_args(benchmark::internal::Benchmark* b) {
  for (int shape = 0; shape < static_cast<int>(kShapes.size()); ++shape)
    for (int par = 0; par < 2; ++par) b->Args({shape, par});
}

}  // namespace

BENCHMARK(BM_Encode)->Apply(encode_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Decode)->Apply(decode_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
