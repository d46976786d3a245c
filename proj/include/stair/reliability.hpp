#pragma once

// Storage efficiency, array sizing, sector-failure models, stripe loss
// probabilities and the m = 1 Markov MTTDL model.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "stair/config.hpp"

namespace stair::reliability {

inline constexpr std::uint64_t kGB = std::uint64_t{1} << 30;
inline constexpr std::uint64_t kPB = std::uint64_t{1} << 50;

/// (r(n-m) - s) / (r n)
double storage_efficiency(std::size_t n, std::size_t r, std::size_t m, std::size_t s);
double storage_efficiency(const StairConfig& cfg);

/// ceil(U / E / (C n)), evaluated in exact integer arithmetic.
std::uint64_t num_arrays(std::uint64_t user_bytes, std::uint64_t capacity_bytes, std::size_t n, std::size_t r,
                         std::size_t m, std::size_t s);

/// 1 - (1 - P_bit)^(8 S)
double p_sec(double p_bit, std::uint64_t sector_bytes);

/// P_chk(0..r): probability that one chunk holds i failed sectors.
using ChunkFailureDist = std::vector<double>;

ChunkFailureDist p_chk_independent(std::size_t r, double p_sec);

struct CorrelatedDist {
  ChunkFailureDist dist;
  std::vector<double> burst_fraction;  // b_1..b_r at indices 1..r
  double mean_burst = 1.0;             // B
};

/// Bursts of length 1 with fraction b1; longer bursts follow a discrete
/// Pareto tail P(L >= i | L >= 2) = (i-1)^-alpha truncated at r.  Throws
/// Error when r P_sec / B > 1.
CorrelatedDist p_chk_correlated(std::size_t r, double p_sec, double b1, double alpha);

/// Takes the ascending nonzero per-chunk failure counts of one stripe.  Must
/// be monotone: adding failures never turns an unrecoverable stripe
/// recoverable.
using Recoverable = std::function<bool(const std::vector<std::size_t>&)>;

Recoverable rs_recoverable();
Recoverable stair_recoverable(std::vector<std::size_t> e);
Recoverable sd_recoverable(std::size_t s);

/// Probability that `chunks` independent chunks drawn from `dist` form an
/// unrecoverable stripe.  Sums the probability of every transition into an
/// unrecoverable state, so no cancellation happens for tiny P_sec.
double p_str(const Recoverable& recoverable, const ChunkFailureDist& dist, std::size_t chunks);

double p_str_rs(std::size_t n, std::size_t m, const ChunkFailureDist& dist);
double p_str_stair(const StairConfig& cfg, const ChunkFailureDist& dist);
/// s in 1..3 only.
double p_str_sd(std::size_t s, std::size_t n, std::size_t m, const ChunkFailureDist& dist);

struct CodeSpec {
  enum class Kind { RS, STAIR, SD } kind = Kind::RS;
  std::vector<std::size_t> e;  // STAIR
  std::size_t s_sd = 0;        // SD

  std::size_t s() const;
  std::string name() const;  // "RS", "STAIR(1,2)", "SD(2)"
  Recoverable recoverable() const;

  static CodeSpec rs() { return {}; }
  static CodeSpec stair(std::vector<std::size_t> e);
  static CodeSpec sd(std::size_t s);
  /// "rs", "sd:2", "stair:1,2" or "stair:(1,2)"
  static CodeSpec parse(const std::string& text);
};

struct Independent {};
struct Correlated {
  double b1 = 0.98;
  double alpha = 1.79;
};
using SectorModel = std::variant<Independent, Correlated>;

struct ReliabilityParams {
  std::uint64_t user_bytes = 10 * kPB;
  std::uint64_t capacity_bytes = 300 * kGB;
  std::uint64_t sector_bytes = 512;
  double mttf_hours = 500000.0;   // 1 / lambda
  double mttr_hours = 17.8;       // 1 / mu
  double p_bit = 1e-14;
  SectorModel model = Independent{};

  void validate() const;
};

struct ReliabilityReport {
  double efficiency = 0;
  std::uint64_t n_arr = 0;
  std::uint64_t stripes_per_array = 0;
  double p_sec = 0;
  double p_str = 0;
  double p_arr = 0;
  double p_arr_approx = 0;  // stripes_per_array * P_str
  double mttdl_arr = 0;     // hours
  double mttdl_sys = 0;     // hours
  double mean_burst = 1.0;  // B, correlated model only
};

ChunkFailureDist chunk_distribution(const ReliabilityParams& params, std::size_t r, double* mean_burst = nullptr);

/// Markov model for m = 1; throws Error for any other m.
ReliabilityReport mttdl(const ReliabilityParams& params, std::size_t n, std::size_t r, std::size_t m,
                        const CodeSpec& code);

/// ((2n-1) lambda + mu) / (n lambda ((n-1) lambda + mu P_arr))
double mttdl_array(std::size_t n, double lambda, double mu, double p_arr);

}  // namespace stair::reliability
