#include "stair/config.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace stair {

StairConfig StairConfig::create(std::size_t n, std::size_t r, std::size_t m, std::vector<std::size_t> e,
                                unsigned w) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid STAIR configuration: " + what); };
  if (w != 8 && w != 16 && w != 32) fail("w must be 8, 16 or 32 (got " + std::to_string(w) + ")");
  if (n == 0) fail("n must be positive");
  if (r == 0) fail("r must be positive");
  if (m >= n) fail("m < n required (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  std::sort(e.begin(), e.end());
  if (!e.empty() && e.front() == 0) fail("every entry of e must be positive");
  if (!e.empty() && e.back() > r)
    fail("entries of e must not exceed r (max e=" + std::to_string(e.back()) + ", r=" + std::to_string(r) + ")");
  if (m + e.size() > n)
    fail("m + m' <= n required (m=" + std::to_string(m) + ", m'=" + std::to_string(e.size()) +
         ", n=" + std::to_string(n) + ")");
  const std::uint64_t field_size = std::uint64_t{1} << w;
  const std::size_t e_max = e.empty() ? 0 : e.back();
  if (n + e.size() > field_size) fail("n + m' must not exceed 2^w");
  if (r + e_max > field_size) fail("r + e_max must not exceed 2^w");
  const std::size_t s = std::accumulate(e.begin(), e.end(), std::size_t{0});

  StairConfig cfg;
  cfg.n_ = n;
  cfg.r_ = r;
  cfg.m_ = m;
  cfg.w_ = w;
  cfg.e_ = std::move(e);
  cfg.s_ = s;
  return cfg;
}

std::string StairConfig::describe() const {
  return "n=" + std::to_string(n_) + " r=" + std::to_string(r_) + " m=" + std::to_string(m_) +
         " e=" + format_e(e_) + " w=" + std::to_string(w_);
}

std::string format_e(const std::vector<std::size_t>& e) {
  std::string out = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e[i]);
  }
  return out + ")";
}

std::vector<std::size_t> parse_e(const std::string& text) {
  std::vector<std::size_t> e;
  std::string digits;
  auto flush = [&] {
    if (!digits.empty()) e.push_back(std::stoul(digits));
    digits.clear();
  };
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
    } else if (c == ',' || c == ' ' || c == '(' || c == ')') {
      flush();
    } else {
      throw ConfigError("cannot parse e vector \"" + text + "\"");
    }
  }
  flush();
  return e;
}

}  // namespace stair
