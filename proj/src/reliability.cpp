#include "stair/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stair/stripe.hpp"

namespace stair::reliability {

double storage_efficiency(std::size_t n, std::size_t r, std::size_t m, std::size_t s) {
  if (n == 0 || r == 0 || m >= n || s > r * (n - m)) throw Error("invalid code parameters for storage efficiency");
  return static_cast<double>(r * (n - m) - s) / static_cast<double>(r * n);
}

double storage_efficiency(const StairConfig& cfg) { return storage_efficiency(cfg.n(), cfg.r(), cfg.m(), cfg.s()); }

std::uint64_t num_arrays(std::uint64_t user_bytes, std::uint64_t capacity_bytes, std::size_t n, std::size_t r,
                         std::size_t m, std::size_t s) {
  storage_efficiency(n, r, m, s);
  if (capacity_bytes == 0) throw Error("device capacity must be positive");
  // U / E / (C n) = U r / ((r(n-m) - s) C)
  using u128 = unsigned __int128;
  const u128 num = static_cast<u128>(user_bytes) * r;
  const u128 den = static_cast<u128>(r * (n - m) - s) * capacity_bytes;
  if (den == 0) throw Error("code stores no data");
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

double p_sec(double p_bit, std::uint64_t sector_bytes) {
  if (!(p_bit >= 0.0 && p_bit < 1.0)) throw Error("P_bit must lie in [0, 1)");
  return -std::expm1(8.0 * static_cast<double>(sector_bytes) * std::log1p(-p_bit));
}

ChunkFailureDist p_chk_independent(std::size_t r, double ps) {
  if (!(ps >= 0.0 && ps <= 1.0)) throw Error("P_sec must lie in [0, 1]");
  ChunkFailureDist dist(r + 1, 0.0);
  if (ps == 0.0) {
    dist[0] = 1.0;
    return dist;
  }
  if (ps == 1.0) {
    dist[r] = 1.0;
    return dist;
  }
  const double lp = std::log(ps), lq = std::log1p(-ps);
  for (std::size_t i = 0; i <= r; ++i) {
    const double lc = std::lgamma(r + 1.0) - std::lgamma(i + 1.0) - std::lgamma(r - i + 1.0);
    dist[i] = std::exp(lc + i * lp + (r - i) * lq);
  }
  return dist;
}

CorrelatedDist p_chk_correlated(std::size_t r, double ps, double b1, double alpha) {
  if (r == 0) throw Error("r must be positive");
  if (!(b1 > 0.0 && b1 <= 1.0)) throw Error("b1 must lie in (0, 1]");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  if (!(ps >= 0.0 && ps <= 1.0)) throw Error("P_sec must lie in [0, 1]");
  CorrelatedDist out;
  out.burst_fraction.assign(r + 1, 0.0);
  if (r == 1) {
    out.burst_fraction[1] = 1.0;
  } else {
    out.burst_fraction[1] = b1;
    const double tail = 1.0 - std::pow(static_cast<double>(r), -alpha);
    for (std::size_t i = 2; i <= r; ++i)
      out.burst_fraction[i] =
          (1.0 - b1) * (std::pow(i - 1.0, -alpha) - std::pow(static_cast<double>(i), -alpha)) / tail;
  }
  double mean = 0.0;
  for (std::size_t i = 1; i <= r; ++i) mean += i * out.burst_fraction[i];
  out.mean_burst = mean;

  const double hit = r * ps / mean;  // 1 - P_chk(0)
  if (hit > 1.0) throw Error("correlated model out of range: r * P_sec / B exceeds 1");
  out.dist.assign(r + 1, 0.0);
  out.dist[0] = 1.0 - hit;
  for (std::size_t i = 1; i <= r; ++i) out.dist[i] = out.burst_fraction[i] * hit;
  return out;
}

Recoverable rs_recoverable() {
  return [](const std::vector<std::size_t>& counts) { return counts.empty(); };
}

Recoverable stair_recoverable(std::vector<std::size_t> e) {
  std::sort(e.begin(), e.end());
  return [e = std::move(e)](const std::vector<std::size_t>& counts) { return sector_counts_covered(e, counts); };
}

Recoverable sd_recoverable(std::size_t s) {
  return [s](const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    return total <= s;
  };
}

double p_str(const Recoverable& recoverable, const ChunkFailureDist& dist, std::size_t chunks) {
  if (dist.empty()) throw Error("empty chunk failure distribution");
  // Mass of every still-recoverable multiset of nonzero counts.
  std::map<std::vector<std::size_t>, double> alive{{{}, 1.0}};
  double lost = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::map<std::vector<std::size_t>, double> next;
    for (const auto& [state, mass] : alive) {
      next[state] += mass * dist[0];
      for (std::size_t i = 1; i < dist.size(); ++i) {
        if (dist[i] == 0.0) continue;
        auto grown = state;
        grown.insert(std::upper_bound(grown.begin(), grown.end(), i), i);
        if (recoverable(grown))
          next[std::move(grown)] += mass * dist[i];
        else
          lost += mass * dist[i];
      }
    }
    alive = std::move(next);
  }
  return std::clamp(lost, 0.0, 1.0);
}

double p_str_rs(std::size_t n, std::size_t m, const ChunkFailureDist& dist) {
  if (m >= n) throw Error("m must be less than n");
  return p_str(rs_recoverable(), dist, n - m);
}

double p_str_stair(const StairConfig& cfg, const ChunkFailureDist& dist) {
  return p_str(stair_recoverable(cfg.e()), dist, cfg.n() - cfg.m());
}

double p_str_sd(std::size_t s, std::size_t n, std::size_t m, const ChunkFailureDist& dist) {
  if (s < 1 || s > 3) throw Error("SD stripe loss is only modeled for s = 1, 2, 3");
  if (m >= n) throw Error("m must be less than n");
  return p_str(sd_recoverable(s), dist, n - m);
}

std::size_t CodeSpec::s() const {
  switch (kind) {
    case Kind::RS: return 0;
    case Kind::SD: return s_sd;
    case Kind::STAIR: {
      std::size_t t = 0;
      for (auto v : e) t += v;
      return t;
    }
  }
  return 0;
}

std::string CodeSpec::name() const {
  switch (kind) {
    case Kind::RS: return "RS";
    case Kind::SD: return "SD(" + std::to_string(s_sd) + ")";
    case Kind::STAIR: return "STAIR" + format_e(e);
  }
  return "?";
}

Recoverable CodeSpec::recoverable() const {
  switch (kind) {
    case Kind::RS: return rs_recoverable();
    case Kind::SD: return sd_recoverable(s_sd);
    case Kind::STAIR: return stair_recoverable(e);
  }
  return rs_recoverable();
}

CodeSpec CodeSpec::stair(std::vector<std::size_t> e) {
  if (e.empty()) throw Error("STAIR code needs a nonempty e");
  for (auto v : e)
    if (v == 0) throw Error("entries of e must be positive");
  std::sort(e.begin(), e.end());
  CodeSpec c;
  c.kind = Kind::STAIR;
  c.e = std::move(e);
  return c;
}

CodeSpec CodeSpec::sd(std::size_t s) {
  if (s < 1 || s > 3) throw Error("SD codes are modeled for s = 1, 2, 3 only");
  CodeSpec c;
  c.kind = Kind::SD;
  c.s_sd = s;
  return c;
}

CodeSpec CodeSpec::parse(const std::string& text) {
  std::string t;
  for (char ch : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (t == "rs") return rs();
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw Error("bad code spec \"" + text + "\" (want rs, sd:S or stair:E)");
  const std::string kind = t.substr(0, colon), arg = t.substr(colon + 1);
  if (kind == "sd") {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(arg, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != arg.size()) throw Error("bad SD spec \"" + text + "\"");
    return sd(v);
  }
  if (kind == "stair") return stair(parse_e(arg));
  throw Error("bad code spec \"" + text + "\"");
}

void ReliabilityParams::validate() const {
  if (user_bytes == 0 || capacity_bytes == 0 || sector_bytes == 0) throw Error("U, C and S must be positive");
  if (!(mttf_hours > 0.0) || !(mttr_hours > 0.0)) throw Error("MTTF and MTTR must be positive");
  if (!(p_bit > 0.0 && p_bit < 1.0)) throw Error("P_bit must lie in (0, 1)");
  if (const auto* c = std::get_if<Correlated>(&model)) {
    if (!(c->b1 > 0.0 && c->b1 < 1.0)) throw Error("b1 must lie in (0, 1)");
    if (!(c->alpha > 0.0)) throw Error("alpha must be positive");
  }
}

ChunkFailureDist chunk_distribution(const ReliabilityParams& params, std::size_t r, double* mean_burst) {
  const double ps = p_sec(params.p_bit, params.sector_bytes);
  if (const auto* c = std::get_if<Correlated>(&params.model)) {
    auto cd = p_chk_correlated(r, ps, c->b1, c->alpha);
    if (mean_burst) *mean_burst = cd.mean_burst;
    return cd.dist;
  }
  if (mean_burst) *mean_burst = 1.0;
  return p_chk_independent(r, ps);
}

double mttdl_array(std::size_t n, double lambda, double mu, double p_arr) {
  const double nd = static_cast<double>(n);
  return ((2 * nd - 1) * lambda + mu) / (nd * lambda * ((nd - 1) * lambda + mu * p_arr));
}

ReliabilityReport mttdl(const ReliabilityParams& params, std::size_t n, std::size_t r, std::size_t m,
                        const CodeSpec& code) {
  if (m != 1) throw Error("the MTTDL model covers m = 1 only");
  params.validate();
  if (code.kind == CodeSpec::Kind::STAIR) StairConfig::create(n, r, m, code.e);

  ReliabilityReport rep;
  rep.efficiency = storage_efficiency(n, r, m, code.s());
  rep.n_arr = num_arrays(params.user_bytes, params.capacity_bytes, n, r, m, code.s());
  rep.stripes_per_array = params.capacity_bytes / (params.sector_bytes * r);
  rep.p_sec = p_sec(params.p_bit, params.sector_bytes);
  const auto dist = chunk_distribution(params, r, &rep.mean_burst);
  rep.p_str = p_str(code.recoverable(), dist, n - m);
  const double stripes = static_cast<double>(rep.stripes_per_array);
  rep.p_arr = -std::expm1(stripes * std::log1p(-rep.p_str));
  rep.p_arr_approx = stripes * rep.p_str;
  rep.mttdl_arr = mttdl_array(n, 1.0 / params.mttf_hours, 1.0 / params.mttr_hours, rep.p_arr);
  rep.mttdl_sys = rep.mttdl_arr / static_cast<double>(rep.n_arr);
  return rep;
}

}  // namespace stair::reliability
