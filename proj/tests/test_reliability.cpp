#include <doctest.h>

#include <cmath>
#include <random>

#include "stair/reliability.hpp"

using namespace stair;
using namespace stair::reliability;

namespace {

double binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double v = 1;
  for (std::size_t i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Closed forms, written out literally.
double closed_stair_s(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  double sum = 0;
  for (std::size_t i = 1; i <= s; ++i) sum += P[i];
  return 1 - std::pow(P[0], k) - binom(k, 1) * sum * std::pow(P[0], k - 1);
}

double closed_stair_1_s1(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  double a = 0, b = 0;
  for (std::size_t i = 1; i <= s - 1; ++i) a += P[i];
  for (std::size_t i = 2; i <= s - 1; ++i) b += P[i];
  return 1 - std::pow(P[0], k) - binom(k, 1) * a * std::pow(P[0], k - 1) - binom(k, 2) * P[1] * P[1] * std::pow(P[0], k - 2) -
         binom(k, 1) * binom(k - 1, 1) * b * P[1] * std::pow(P[0], k - 2);
}

double closed_stair_2_s2(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  double a = 0, b = 0, c = 0;
  for (std::size_t i = 1; i <= s - 2; ++i) a += P[i];
  for (std::size_t i = 2; i <= s - 2; ++i) b += P[i];
  for (std::size_t i = 3; i <= s - 2; ++i) c += P[i];
  const double p0 = P[0];
  return 1 - std::pow(p0, k) - binom(k, 1) * a * std::pow(p0, k - 1) - binom(k, 2) * P[1] * P[1] * std::pow(p0, k - 2) -
         binom(k, 1) * binom(k - 1, 1) * b * P[1] * std::pow(p0, k - 2) - binom(k, 2) * P[2] * P[2] * std::pow(p0, k - 2) -
         binom(k, 1) * binom(k - 1, 1) * c * P[2] * std::pow(p0, k - 2);
}

double closed_stair_11_s2(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  double a = 0, b = 0;
  for (std::size_t i = 1; i <= s - 2; ++i) a += P[i];
  for (std::size_t i = 2; i <= s - 2; ++i) b += P[i];
  const double p0 = P[0];
  return 1 - std::pow(p0, k) - binom(k, 1) * a * std::pow(p0, k - 1) - binom(k, 2) * P[1] * P[1] * std::pow(p0, k - 2) -
         binom(k, 1) * binom(k - 1, 1) * b * P[1] * std::pow(p0, k - 2) - binom(k, 3) * std::pow(P[1], 3) * std::pow(p0, k - 3) -
         binom(k, 2) * binom(k - 2, 1) * b * P[1] * P[1] * std::pow(p0, k - 3);
}

double closed_stair_ones(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  double sum = 0;
  for (std::size_t i = 0; i <= s; ++i) sum += binom(k, i) * std::pow(P[1], i) * std::pow(P[0], k - i);
  return 1 - sum;
}

double closed_sd(std::size_t k, std::size_t s, const ChunkFailureDist& P) {
  const double p0 = P[0];
  double v = 1 - std::pow(p0, k);
  if (s == 1) return v - binom(k, 1) * P[1] * std::pow(p0, k - 1);
  if (s == 2) return v - binom(k, 1) * (P[1] + P[2]) * std::pow(p0, k - 1) - binom(k, 2) * P[1] * P[1] * std::pow(p0, k - 2);
  return v - binom(k, 1) * (P[1] + P[2] + P[3]) * std::pow(p0, k - 1) - binom(k, 2) * P[1] * P[1] * std::pow(p0, k - 2) -
         binom(k, 1) * binom(k - 1, 1) * P[2] * P[1] * std::pow(p0, k - 2) - binom(k, 3) * std::pow(P[1], 3) * std::pow(p0, k - 3);
}

ChunkFailureDist random_dist(std::size_t r, std::mt19937_64& rng) {
  // Mass concentrated on small counts so every term matters.
  ChunkFailureDist d(r + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double total = 0;
  for (std::size_t i = 0; i <= r; ++i) total += d[i] = u(rng) * (i == 0 ? 5.0 : 1.0 / (i * i));
  for (auto& v : d) v /= total;
  return d;
}

// Sum over every count vector of the product of probabilities (oracle).
double enumerate(const Recoverable& ok, const ChunkFailureDist& dist, std::size_t chunks, std::size_t cap) {
  std::vector<std::size_t> counts(chunks, 0);
  double lost = 0;
  while (true) {
    std::vector<std::size_t> nz;
    double p = 1;
    for (auto c : counts) {
      p *= dist[c];
      if (c) nz.push_back(c);
    }
    std::sort(nz.begin(), nz.end());
    if (!ok(nz)) lost += p;
    std::size_t i = 0;
    while (i < chunks && ++counts[i] > cap) counts[i++] = 0;
    if (i == chunks) break;
  }
  return lost;
}

}  // namespace

TEST_CASE("storage efficiency") {
  CHECK(storage_efficiency(8, 16, 1, 0) == 0.875);
  CHECK(storage_efficiency(8, 16, 1, 1) == doctest::Approx(111.0 / 128));
  CHECK(storage_efficiency(8, 16, 1, 16 * 7) == 0.0);
  CHECK(storage_efficiency(StairConfig::create(8, 4, 2, {1, 1, 2})) == doctest::Approx(20.0 / 32));
}

TEST_CASE("array counts") {
  const std::vector<std::uint64_t> expect = {4994, 5039, 5085, 5131, 5179, 5227, 5276,
                                             5327, 5378, 5430, 5483, 5538, 5593};
  for (std::size_t s = 0; s < expect.size(); ++s) CHECK(num_arrays(10 * kPB, 300 * kGB, 8, 16, 1, s) == expect[s]);
  // U exactly fills one array.
  CHECK(num_arrays(7 * 16 * kGB, 16 * kGB, 8, 16, 1, 0) == 1);
  CHECK(num_arrays(7 * 16 * kGB + 1, 16 * kGB, 8, 16, 1, 0) == 2);
}

TEST_CASE("sector and chunk failure probabilities") {
  CHECK(p_sec(0, 512) == 0);
  CHECK(p_sec(1e-14, 512) == doctest::Approx(4.096e-11).epsilon(1e-6));
  CHECK(p_sec(1e-12, 512) > p_sec(1e-13, 512));
  const auto zero = p_chk_independent(16, 0);
  CHECK(zero[0] == 1);
  CHECK(p_chk_independent(1, 0.25) == ChunkFailureDist{0.75, 0.25});
  const auto d = p_chk_independent(16, 1e-3);
  double total = 0;
  for (auto v : d) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(16 * 1e-3 * std::pow(1 - 1e-3, 15)));
}

TEST_CASE("correlated bursts") {
  const auto one = p_chk_correlated(16, 1e-6, 1.0, 1.79);
  CHECK(one.mean_burst == 1.0);
  CHECK(one.dist[1] == doctest::Approx(16e-6));
  const auto c = p_chk_correlated(16, 1e-6, 0.98, 1.79);
  double bsum = 0, dsum = 0;
  for (auto v : c.burst_fraction) bsum += v;
  for (auto v : c.dist) dsum += v;
  CHECK(bsum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dsum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.mean_burst > 1.0);
  CHECK(c.mean_burst < 1.1);
  for (std::size_t i = 2; i < 16; ++i) CHECK(c.burst_fraction[i] >= c.burst_fraction[i + 1]);
  CHECK_THROWS(p_chk_correlated(16, 0.5, 0.98, 1.79));
}

TEST_CASE("dynamic program equals the closed forms") {
  std::mt19937_64 rng(42);
  const std::size_t n = 8, r = 16, m = 1, k = n - m;
  for (int t = 0; t < 20; ++t) {
    const auto P = random_dist(r, rng);
    for (std::size_t s = 1; s <= 6; ++s) {
      CHECK(p_str(stair_recoverable({s}), P, k) == doctest::Approx(closed_stair_s(k, s, P)).epsilon(1e-10));
      CHECK(p_str(stair_recoverable(std::vector<std::size_t>(s, 1)), P, k) ==
            doctest::Approx(closed_stair_ones(k, s, P)).epsilon(1e-10));
      if (s >= 2)
        CHECK(p_str(stair_recoverable({1, s - 1}), P, k) == doctest::Approx(closed_stair_1_s1(k, s, P)).epsilon(1e-10));
      if (s >= 4)
        CHECK(p_str(stair_recoverable({2, s - 2}), P, k) == doctest::Approx(closed_stair_2_s2(k, s, P)).epsilon(1e-10));
      if (s >= 3)
        CHECK(p_str(stair_recoverable({1, 1, s - 2}), P, k) == doctest::Approx(closed_stair_11_s2(k, s, P)).epsilon(1e-10));
      if (s <= 3) CHECK(p_str_sd(s, n, m, P) == doctest::Approx(closed_sd(k, s, P)).epsilon(1e-10));
    }
    CHECK(p_str_rs(n, m, P) == doctest::Approx(1 - std::pow(P[0], k)).epsilon(1e-10));
  }
}

TEST_CASE("dynamic program equals full enumeration") {
  std::mt19937_64 rng(8);
  const auto P = random_dist(4, rng);
  for (const auto& rec : {rs_recoverable(), sd_recoverable(1), sd_recoverable(2), sd_recoverable(3),
                          stair_recoverable({1, 2}), stair_recoverable({1, 1, 2})})
    CHECK(p_str(rec, P, 5) == doctest::Approx(enumerate(rec, P, 5, 4)).epsilon(1e-12));
}

TEST_CASE("stripe loss is stable for tiny sector error rates") {
  const auto P = p_chk_independent(16, p_sec(1e-14, 512));
  const double v = p_str(stair_recoverable({1}), P, 7);
  CHECK(v > 0);
  // Leading term: pairs of single failures in distinct chunks plus doubles in one chunk.
  const double q = 4.096e-11;
  const double lead = binom(7, 2) * (16 * q) * (16 * q) + 7 * binom(16, 2) * q * q;
  CHECK(v == doctest::Approx(lead).epsilon(1e-3));
}

TEST_CASE("loss ordering RS >= STAIR >= SD at equal s") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto P = random_dist(16, rng);
    const double rs = p_str_rs(8, 1, P);
    CHECK(rs >= p_str(stair_recoverable({1}), P, 7));
    for (const auto& e : {std::vector<std::size_t>{3}, {1, 2}, {1, 1, 1}})
      CHECK(p_str(stair_recoverable(e), P, 7) >= p_str_sd(3, 8, 1, P) - 1e-15);
    CHECK(p_str(stair_recoverable({2}), P, 7) >= p_str_sd(2, 8, 1, P) - 1e-15);
  }
  CHECK_THROWS(p_str_sd(4, 8, 1, p_chk_independent(16, 1e-3)));
  CHECK(p_str_rs(8, 1, p_chk_independent(16, 0)) == 0);
}

TEST_CASE("mttdl model") {
  ReliabilityParams p;
  const double lambda = 1 / p.mttf_hours, mu = 1 / p.mttr_hours;
  CHECK(mttdl_array(8, lambda, mu, 0) == doctest::Approx((15 * lambda + mu) / (8 * 7 * lambda * lambda)));
  CHECK_THROWS(mttdl(p, 8, 16, 2, CodeSpec::rs()));

  const auto rs = mttdl(p, 8, 16, 1, CodeSpec::rs());
  const auto st = mttdl(p, 8, 16, 1, CodeSpec::stair({1}));
  CHECK(rs.n_arr == 4994);
  CHECK(st.n_arr == 5039);
  CHECK(st.mttdl_sys / rs.mttdl_sys > 100);
  CHECK(rs.mttdl_sys == doctest::Approx(rs.mttdl_arr / rs.n_arr));
  CHECK(rs.p_arr <= rs.p_arr_approx);
  CHECK(rs.stripes_per_array == 300 * kGB / (512 * 16));

  double prev = INFINITY;
  for (double pb : {1e-15, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10}) {
    p.p_bit = pb;
    const double v = mttdl(p, 8, 16, 1, CodeSpec::stair({1, 2})).mttdl_sys;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("correlated model favors one tall stair") {
  ReliabilityParams p;
  p.model = Correlated{0.98, 1.79};
  for (double pb : {1e-14, 1e-12, 1e-10}) {
    p.p_bit = pb;
    CHECK(mttdl(p, 8, 16, 1, CodeSpec::stair({2})).mttdl_sys > mttdl(p, 8, 16, 1, CodeSpec::stair({1, 1})).mttdl_sys);
    const double tall = mttdl(p, 8, 16, 1, CodeSpec::stair({3})).mttdl_sys;
    CHECK(tall > mttdl(p, 8, 16, 1, CodeSpec::stair({1, 2})).mttdl_sys);
    CHECK(tall > mttdl(p, 8, 16, 1, CodeSpec::stair({1, 1, 1})).mttdl_sys);
  }
}

TEST_CASE("code specs") {
  CHECK(CodeSpec::parse("rs").name() == "RS");
  CHECK(CodeSpec::parse("SD:2").name() == "SD(2)");
  CHECK(CodeSpec::parse("stair:2,1").name() == "STAIR(1,2)");
  CHECK(CodeSpec::parse("stair:(1,2)").s() == 3);
  CHECK_THROWS(CodeSpec::parse("sd:4"));
  CHECK_THROWS(CodeSpec::parse("lrc:2"));
  CHECK_THROWS(CodeSpec::parse("stair:"));
}
