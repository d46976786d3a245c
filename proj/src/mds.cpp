#include "stair/mds.hpp"

#include <algorithm>
#include <string>

namespace stair::mds {

std::size_t Codeword::present_count() const {
  return static_cast<std::size_t>(std::count(present.begin(), present.end(), true));
}

MdsCode::MdsCode(gf::Field field, std::size_t kappa, std::size_t eta)
    : field_(std::move(field)), kappa_(kappa), eta_(eta), generator_(kappa, eta) {
  if (kappa == 0 || kappa >= eta)
    throw ConfigError("MDS code needs 0 < kappa < eta (got kappa=" + std::to_string(kappa) +
                      ", eta=" + std::to_string(eta) + ")");
  if (eta > field_.order())
    throw ConfigError("MDS code length " + std::to_string(eta) + " exceeds the field size " +
                      std::to_string(field_.order()));
  const std::size_t parities = eta - kappa;
  for (std::size_t j = 0; j < kappa; ++j) {
    generator_.at(j, j) = 1;
    const auto y = static_cast<gf::Element>(parities + j);
    for (std::size_t p = 0; p < parities; ++p)
      generator_.at(j, kappa + p) = field_.inverse(static_cast<gf::Element>(p) ^ y);
  }
}

void MdsCode::encode(std::span<const gf::ConstRegion> data, std::span<const gf::Region> parity) const {
  if (data.size() != kappa_ || parity.size() != parity_count())
    throw Error("MDS encode: expected " + std::to_string(kappa_) + " data and " +
                std::to_string(parity_count()) + " parity regions");
  for (std::size_t p = 0; p < parity.size(); ++p) {
    field_.mult_region(data[0], parity[p], parity_coefficient(0, p));
    for (std::size_t j = 1; j < kappa_; ++j) field_.mult_xor(data[j], parity[p], parity_coefficient(j, p));
  }
}

gf::Matrix MdsCode::recovery_matrix(const std::vector<std::size_t>& known,
                                    const std::vector<std::size_t>& targets) const {
  if (known.size() != kappa_)
    throw UnrecoverableError("need exactly " + std::to_string(kappa_) + " known positions, got " +
                             std::to_string(known.size()));
  // data = known * inv(G_K); targets = data * G_T.
  const gf::Matrix inv = gf::invert(field_, generator_.select_columns(known));
  return gf::multiply(field_, inv, generator_.select_columns(targets));
}

void MdsCode::decode(Codeword& word) const {
  if (word.symbols.size() != eta_ || word.present.size() != eta_)
    throw Error("MDS decode: codeword must have " + std::to_string(eta_) + " positions");
  std::vector<std::size_t> known, missing;
  for (std::size_t i = 0; i < eta_; ++i) (word.present[i] ? known : missing).push_back(i);
  if (missing.empty()) return;
  if (known.size() < kappa_)
    throw UnrecoverableError("only " + std::to_string(known.size()) + " of " + std::to_string(eta_) +
                             " symbols present; " + std::to_string(kappa_) + " required");
  known.resize(kappa_);
  const std::size_t len = word.symbols[known.front()].size();
  const gf::Matrix coef = recovery_matrix(known, missing);
  for (std::size_t t = 0; t < missing.size(); ++t) {
    auto& dst = word.symbols[missing[t]];
    dst.assign(len, 0);
    for (std::size_t k = 0; k < kappa_; ++k) field_.mult_xor(word.symbols[known[k]], dst, coef.at(k, t));
    word.present[missing[t]] = true;
  }
}

bool MdsCode::check_codeword(std::span<const gf::ConstRegion> word) const {
  if (word.size() != eta_) return false;
  const std::size_t len = word[0].size();
  std::vector<std::uint8_t> scratch(len);
  for (std::size_t p = 0; p < parity_count(); ++p) {
    std::fill(scratch.begin(), scratch.end(), std::uint8_t{0});
    for (std::size_t j = 0; j < kappa_; ++j) field_.mult_xor(word[j], scratch, parity_coefficient(j, p));
    if (!std::equal(scratch.begin(), scratch.end(), word[kappa_ + p].begin(), word[kappa_ + p].end()))
      return false;
  }
  return true;
}

}  // namespace stair::mds
