// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "../helpers.hpp"
#include "stair/codec.hpp"
#include "stair/parallel.hpp"
#include "stair/reliability.hpp"
#include "stair/schedule.hpp"
#include "stair/sim.hpp"

using namespace stair;
using namespace stair::reliability;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o = {false, std::string("exception: ") + ex.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %2d %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::vector<std::size_t>> partitions(std::size_t s, std::size_t largest) {
  if (s == 0) return {{}};
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t first = std::min(s, largest); first >= 1; --first)
    for (auto rest : partitions(s - first, first)) {
      rest.push_back(first);
      out.push_back(rest);
    }
  return out;
}

// Sweep shared by the homomorphic and cost checks.
std::vector<StairConfig> sweep() {
  std::vector<StairConfig> out;
  for (auto [n, r, m] : {std::tuple{8, 4, 2}, {6, 3, 1}, {8, 16, 2}, {16, 16, 3}, {10, 6, 1}, {5, 5, 0}})
    for (std::size_t s = 1; s <= 4; ++s)
      for (const auto& e : partitions(s, r))
        if (e.size() <= static_cast<std::size_t>(n - m)) out.push_back(StairConfig::create(n, r, m, e));
  return out;
}

// 1
Outcome encoder_equivalence() {
  std::mt19937_64 rng(2024);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::size_t configs = 0, stripes = 0, mismatches = 0;
  while (configs < 24) {
    const std::size_t n = pick(3, 16), r = pick(1, 16), m = pick(0, std::min<std::size_t>(3, n - 2));
    const std::size_t s = pick(0, std::min<std::size_t>(4, r * (n - m) - 1));
    std::vector<std::size_t> e;
    for (std::size_t left = s; left > 0;) {
      const std::size_t part = pick(1, left);
      e.push_back(part);
      left -= part;
    }
    const unsigned w = configs % 6 == 5 ? 16u : 8u;
    std::optional<StairConfig> cfg;
    try {
      cfg = StairConfig::create(n, r, m, e, w);
    } catch (const ConfigError&) {
      continue;
    }
    const StairCodec codec(*cfg);
    ++configs;
    for (int t = 0; t < 45; ++t, ++stripes) {
      auto a = testing::random_data(*cfg, 64, rng());
      auto b = a, c = a;
      codec.encode(a.view(), EncodeMethod::Standard);
      codec.encode(b.view(), EncodeMethod::Upstairs);
      codec.encode(c.view(), EncodeMethod::Downstairs);
      if (!(a == b) || !(a == c)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%zu configs, %zu stripes, %zu mismatches", configs, stripes, mismatches)};
}

// 2
Outcome exhaustive_round_trip() {
  std::size_t patterns = 0, wrong = 0;
  for (const auto& cfg : {StairConfig::create(6, 3, 1, {1, 2}), StairConfig::create(8, 4, 2, {1, 1, 2})}) {
    const StairCodec codec(cfg);
    const auto original = testing::encoded(codec, 2, 77);
    CanonicalWorkspace ws(cfg, 2);
    auto work = original;
    testing::for_each_covered_pattern(cfg, [&](const FailurePattern& p) {
      ++patterns;
      sim::inject(work.view(), cfg, p);
      try {
        codec.decode(work.view(), p, DecodeStrategy::Practical, ws);
        if (!(work == original)) ++wrong;
      } catch (const Error&) {
        ++wrong;
      }
      work = original;
    });
  }
  return {wrong == 0, fmt("%zu patterns, %zu failures", patterns, wrong)};
}

// 3
Outcome homomorphic() {
  std::size_t rows = 0, bad = 0, configs = 0;
  for (const auto& cfg : sweep()) {
    const StairCodec codec(cfg);
    ++configs;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto s = testing::encoded(codec, 16, seed);
      const auto canon = codec.build_canonical(s.view());
      for (std::size_t i = cfg.r(); i < canon.rows(); ++i) {
        std::vector<gf::ConstRegion> word;
        for (std::size_t j = 0; j < canon.cols(); ++j) word.push_back(canon.cell(i, j));
        ++rows;
        if (!codec.row_code()->check_codeword(word)) ++bad;
      }
    }
  }
  return {bad == 0 && rows > 0, fmt("%zu augmented rows over %zu configs, %zu failed", rows, configs, bad)};
}

// 4
Outcome table_trace() {
  const auto cfg = StairConfig::create(8, 4, 2, {1, 1, 2});
  FailurePattern p;
  p.failed_chunks = {6, 7};
  p.sector_failures[3] = {3};
  p.sector_failures[4] = {3};
  p.sector_failures[5] = {2, 3};
  const auto plan = plan_decode(cfg, loss_mask(cfg, p), DecodeStrategy::Upstairs);
  using D = Direction;
  const Schedule expect = {
      {D::Column, 0, {0, 1, 2, 3}, {4, 5}},      {D::Column, 1, {0, 1, 2, 3}, {4, 5}},
      {D::Column, 2, {0, 1, 2, 3}, {4, 5}},      {D::Row, 4, {0, 1, 2, 8, 9, 10}, {3, 4, 5}},
      {D::Column, 3, {0, 1, 2, 4}, {3, 5}},      {D::Column, 4, {0, 1, 2, 4}, {3, 5}},
      {D::Row, 5, {0, 1, 2, 3, 4, 10}, {5}},     {D::Column, 5, {0, 1, 4, 5}, {2, 3}},
      {D::Row, 0, {0, 1, 2, 3, 4, 5}, {6, 7}},   {D::Row, 1, {0, 1, 2, 3, 4, 5}, {6, 7}},
      {D::Row, 2, {0, 1, 2, 3, 4, 5}, {6, 7}},   {D::Row, 3, {0, 1, 2, 3, 4, 5}, {6, 7}},
  };
  std::size_t matched = 0;
  for (std::size_t i = 0; i < std::min(plan.size(), expect.size()); ++i)
    if (plan[i] == expect[i]) ++matched;
  return {plan.size() == expect.size() && matched == expect.size(),
          fmt("%zu of %zu steps match (plan has %zu)", matched, expect.size(), plan.size())};
}

// 5
Outcome cost_model() {
  const StairCodec tall(StairConfig::create(8, 16, 2, {4}));
  const StairCodec flat(StairConfig::create(8, 16, 2, {1, 1, 1, 1}));
  bool ok = tall.xor_count(EncodeMethod::Upstairs) == 600 && tall.xor_count(EncodeMethod::Downstairs) == 352 &&
            flat.xor_count(EncodeMethod::Upstairs) == 312 && flat.xor_count(EncodeMethod::Downstairs) == 640;
  std::size_t configs = 0, bad = 0;
  for (const auto& cfg : sweep()) {
    const StairCodec codec(cfg);
    ++configs;
    const auto c = codec.cost();
    // Hand evaluation of the closed forms.
    const std::size_t k = cfg.n() - cfg.m(), r = cfg.r(), m = cfg.m(), mp = cfg.e().size(), emax = cfg.e().back();
    std::size_t s = 0;
    for (auto v : cfg.e()) s += v;
    const std::size_t up = k * (m * r + s) + r * k * emax, down = k * (m + mp) * r + r * s;
    std::size_t deps = 0;
    for (const auto& cell : data_cells(cfg)) deps += codec.parity_dependents(cell).size();
    const std::size_t best = std::min({c.standard, c.upstairs, c.downstairs});
    const bool argmin = codec.xor_count(c.chosen) == best;
    if (c.upstairs != up || c.downstairs != down || c.standard != deps || !argmin) ++bad;
  }
  ok = ok && bad == 0;
  return {ok, fmt("e=(4) %zu/%zu, e=(1,1,1,1) %zu/%zu; %zu configs, %zu mismatches", tall.cost().upstairs,
                  tall.cost().downstairs, flat.cost().upstairs, flat.cost().downstairs, configs, bad)};
}

// 6
Outcome update_penalty() {
  std::size_t configs = 0, bad = 0;
  for (auto [n, r, m, e] : {std::tuple{8, 4, 2, std::vector<std::size_t>{1, 1, 2}}, {6, 3, 1, {1, 2}},
                            {8, 16, 2, {4}}, {8, 16, 2, {1, 1, 1, 1}}, {8, 16, 2, {}}, {6, 4, 3, {}}}) {
    const auto cfg = StairConfig::create(n, r, m, e);
    const StairCodec codec(cfg);
    ++configs;
    const auto base = testing::encoded(codec, 4, 5, EncodeMethod::Downstairs);
    const auto parity = parity_cells(cfg);
    const auto data = data_cells(cfg);
    std::size_t touched = 0;
    for (const auto& cell : data) {
      auto s = base;
      for (auto& b : s.cell(cell.row, cell.col)) b ^= 0xA7;
      codec.encode(s.view(), EncodeMethod::Downstairs);
      for (const auto& p : parity)
        if (!std::equal(s.cell(p.row, p.col).begin(), s.cell(p.row, p.col).end(), base.cell(p.row, p.col).begin()))
          ++touched;
    }
    const double oracle = static_cast<double>(touched) / static_cast<double>(data.size());
    if (codec.update_penalty() != oracle) ++bad;
    if (e.empty() && codec.update_penalty() != static_cast<double>(m)) ++bad;
  }
  return {bad == 0, fmt("%zu configs, %zu mismatches", configs, bad)};
}

// 7
Outcome array_counts() {
  const std::vector<std::uint64_t> expect = {4994, 5039, 5085, 5131, 5179, 5227, 5276,
                                             5327, 5378, 5430, 5483, 5538, 5593};
  std::size_t bad = 0;
  for (std::size_t s = 0; s < expect.size(); ++s)
    if (num_arrays(10 * kPB, 300 * kGB, 8, 16, 1, s) != expect[s]) ++bad;
  return {bad == 0, fmt("s=0..12: %llu..%llu, %zu mismatches",
                        static_cast<unsigned long long>(num_arrays(10 * kPB, 300 * kGB, 8, 16, 1, 0)),
                        static_cast<unsigned long long>(num_arrays(10 * kPB, 300 * kGB, 8, 16, 1, 12)), bad)};
}

double binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double v = 1;
  for (std::size_t i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

double tail(const ChunkFailureDist& P, std::size_t lo, std::size_t hi) {
  double v = 0;
  for (std::size_t i = lo; i <= hi; ++i) v += P[i];
  return v;
}

// 8
Outcome appendix_forms() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 8, r = 16, m = 1, k = n - m;
  double worst = 0;
  auto rel = [&](double a, double b) { worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300)); };
  std::size_t checks = 0;
  for (int t = 0; t < 50; ++t) {
    ChunkFailureDist P(r + 1);
    double total = 0;
    for (std::size_t i = 0; i <= r; ++i) total += P[i] = u(rng) * (i == 0 ? 8.0 : 1.0 / (i * i));
    for (auto& v : P) v /= total;
    const double p0 = P[0];
    auto pw = [&](std::size_t j) { return std::pow(p0, static_cast<double>(j)); };
    for (std::size_t s = 1; s <= 8; ++s) {
      rel(p_str(stair_recoverable({s}), P, k), 1 - pw(k) - k * tail(P, 1, s) * pw(k - 1));
      double ones = 0;
      for (std::size_t i = 0; i <= s; ++i) ones += binom(k, i) * std::pow(P[1], i) * pw(k - i);
      rel(p_str(stair_recoverable(std::vector<std::size_t>(s, 1)), P, k), 1 - ones);
      checks += 2;
      if (s >= 2) {
        const double v = 1 - pw(k) - k * tail(P, 1, s - 1) * pw(k - 1) - binom(k, 2) * P[1] * P[1] * pw(k - 2) -
                         k * (k - 1) * tail(P, 2, s - 1) * P[1] * pw(k - 2);
        rel(p_str(stair_recoverable({1, s - 1}), P, k), v);
        ++checks;
      }
      if (s >= 4) {
        const double v = 1 - pw(k) - k * tail(P, 1, s - 2) * pw(k - 1) - binom(k, 2) * P[1] * P[1] * pw(k - 2) -
                         k * (k - 1) * tail(P, 2, s - 2) * P[1] * pw(k - 2) - binom(k, 2) * P[2] * P[2] * pw(k - 2) -
                         k * (k - 1) * tail(P, 3, s - 2) * P[2] * pw(k - 2);
        rel(p_str(stair_recoverable({2, s - 2}), P, k), v);
        ++checks;
      }
      if (s >= 3) {
        const double v = 1 - pw(k) - k * tail(P, 1, s - 2) * pw(k - 1) - binom(k, 2) * P[1] * P[1] * pw(k - 2) -
                         k * (k - 1) * tail(P, 2, s - 2) * P[1] * pw(k - 2) - binom(k, 3) * std::pow(P[1], 3) * pw(k - 3) -
                         binom(k, 2) * (k - 2) * tail(P, 2, s - 2) * P[1] * P[1] * pw(k - 3);
        rel(p_str(stair_recoverable({1, 1, s - 2}), P, k), v);
        ++checks;
      }
    }
  }
  // SD and RS against brute-force enumeration of every count vector.
  const std::size_t chunks = 5, cap = 5;
  ChunkFailureDist P(cap + 1);
  double total = 0;
  for (auto& v : P) total += v = u(rng);
  for (auto& v : P) v /= total;
  double enum_worst = 0;
  auto brute = [&](auto ok) {
    std::vector<std::size_t> counts(chunks, 0);
    double lost = 0;
    while (true) {
      double p = 1;
      std::size_t hit = 0, sum = 0;
      for (auto c : counts) {
        p *= P[c];
        hit += c > 0;
        sum += c;
      }
      if (!ok(hit, sum)) lost += p;
      std::size_t i = 0;
      while (i < chunks && ++counts[i] > cap) counts[i++] = 0;
      if (i == chunks) return lost;
    }
  };
  auto erel = [&](double a, double b) { enum_worst = std::max(enum_worst, std::abs(a - b) / b); };
  erel(p_str_rs(chunks + 1, 1, P), brute([](std::size_t hit, std::size_t) { return hit == 0; }));
  for (std::size_t s = 1; s <= 3; ++s)
    erel(p_str_sd(s, chunks + 1, 1, P), brute([s](std::size_t, std::size_t sum) { return sum <= s; }));
  return {worst <= 1e-10 && enum_worst <= 1e-10,
          fmt("%zu closed-form checks, max rel err %.2e; enumeration max rel err %.2e", checks, worst, enum_worst)};
}

// 9
Outcome monte_carlo() {
  const std::size_t n = 8, r = 16, m = 1;
  const auto d = p_chk_independent(r, 1e-3);
  const std::vector<CodeSpec> codes = {CodeSpec::rs(),          CodeSpec::sd(1),         CodeSpec::sd(2),
                                       CodeSpec::sd(3),         CodeSpec::stair({1}),    CodeSpec::stair({3}),
                                       CodeSpec::stair({1, 2}), CodeSpec::stair({1, 1, 1})};
  std::size_t bad = 0;
  std::string worst;
  double worst_z = 0;
  std::uint64_t seed = 11;
  for (const auto& code : codes) {
    const double analytic = p_str(code.recoverable(), d, n - m);
    const auto est = sim::monte_carlo_p_str(code.recoverable(), d, n - m, 1000000, seed++);
    if (!est.within_sigma(analytic, 3.0)) ++bad;
    const double z = std::abs(est.p - analytic) / std::max(est.std_error, 1e-6);
    if (z >= worst_z) {
      worst_z = z;
      worst = code.name();
    }
  }
  return {bad == 0, fmt("%zu codes, %zu outside 3 sigma, largest |z| %.2f (%s)", codes.size(), bad, worst_z, worst.c_str())};
}

// 10
Outcome orderings() {
  ReliabilityParams p;
  const double ratio = mttdl(p, 8, 16, 1, CodeSpec::stair({1})).mttdl_sys / mttdl(p, 8, 16, 1, CodeSpec::rs()).mttdl_sys;
  p.model = Correlated{0.98, 1.79};
  std::size_t comparisons = 0, violations = 0;
  for (double pb : {1e-14, 1e-13, 1e-12, 1e-11, 1e-10}) {
    p.p_bit = pb;
    for (std::size_t s = 2; s <= 4; ++s) {
      const double tall = mttdl(p, 8, 16, 1, CodeSpec::stair({s})).mttdl_sys;
      for (const auto& e : partitions(s, s)) {
        if (e.size() == 1) continue;
        ++comparisons;
        if (!(tall > mttdl(p, 8, 16, 1, CodeSpec::stair(e)).mttdl_sys)) ++violations;
      }
    }
  }
  return {ratio > 100 && violations == 0,
          fmt("STAIR(1)/RS = %.0f; correlated e=(s) highest in %zu of %zu comparisons", ratio, comparisons - violations,
              comparisons)};
}

// 11
Outcome throughput() {
  const std::size_t symbol = 4096, n = 16, r = 16, m = 2;
  std::size_t slower = 0, shapes = 0;
  std::string detail;
  for (std::size_t s = 1; s <= 4; ++s)
    for (const auto& e : partitions(s, s)) {
      const auto cfg = StairConfig::create(n, r, m, e);
      const StairCodec codec(cfg);
      const std::size_t stripe = stripe_bytes(cfg, symbol);
      const std::size_t count = std::max<std::size_t>(1, (24u << 20) / stripe);
      std::vector<std::uint8_t> buf(stripe * count);
      std::mt19937_64 rng(s);
      for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
      auto time = [&](EncodeMethod method) {
        const auto t0 = Clock::now();
        reference::encode_stripes(codec, buf, symbol, method);
        return std::chrono::duration<double>(Clock::now() - t0).count();
      };
      const auto chosen = codec.cost().chosen;
      double best_std = 1e30, best_chosen = 1e30;
      time(chosen);
      for (int rep = 0; rep < 5; ++rep) {
        best_std = std::min(best_std, time(EncodeMethod::Standard));
        best_chosen = std::min(best_chosen, time(chosen));
      }
      ++shapes;
      if (best_chosen > 1.10 * best_std) ++slower;
      detail += fmt(" %s:%s x%.2f", format_e(e).c_str(), to_string(chosen).c_str(), best_std / best_chosen);
    }
  return {slower == 0, fmt("%zu shapes, %zu slower than standard by >10%%;", shapes, slower) + detail};
}

}  // namespace

int main() {
  report(1, "encoder equivalence", encoder_equivalence);
  report(2, "exhaustive round trip", exhaustive_round_trip);
  report(3, "homomorphic rows", homomorphic);
  report(4, "worst-case decode trace", table_trace);
  report(5, "cost model", cost_model);
  report(6, "update penalty", update_penalty);
  report(7, "array counts", array_counts);
  report(8, "closed forms vs dp", appendix_forms);
  report(9, "monte carlo", monte_carlo);
  report(10, "reliability orderings", orderings);
  report(11, "encoder throughput", throughput);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
