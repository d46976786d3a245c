#include "stair/codec.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace stair {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

gf::Element read_element(const std::uint8_t* p, std::size_t bytes) {
  gf::Element v = 0;
  std::memcpy(&v, p, bytes);
  return v;
}

}  // namespace

std::string to_string(EncodeMethod method) {
  switch (method) {
    case EncodeMethod::Standard: return "standard";
    case EncodeMethod::Upstairs: return "upstairs";
    case EncodeMethod::Downstairs: return "downstairs";
  }
  return "?";
}

EncodeMethod parse_method(const std::string& name) {
  if (name == "standard") return EncodeMethod::Standard;
  if (name == "upstairs") return EncodeMethod::Upstairs;
  if (name == "downstairs") return EncodeMethod::Downstairs;
  throw Error("unknown encoding method \"" + name + "\"");
}

std::size_t upstairs_mult_xors(const StairConfig& cfg) {
  const std::size_t k = cfg.data_chunks();
  return k * (cfg.m() * cfg.r() + cfg.s()) + cfg.r() * (k * cfg.e_max());
}

std::size_t downstairs_mult_xors(const StairConfig& cfg) {
  const std::size_t k = cfg.data_chunks();
  return k * ((cfg.m() + cfg.m_prime()) * cfg.r()) + cfg.r() * cfg.s();
}

EncodeMethod choose_method(std::size_t standard, std::size_t upstairs, std::size_t downstairs) {
  if (downstairs <= upstairs && downstairs <= standard) return EncodeMethod::Downstairs;
  if (upstairs <= standard) return EncodeMethod::Upstairs;
  return EncodeMethod::Standard;
}

StairCodec::StairCodec(const StairConfig& cfg) : StairCodec(cfg, gf::Field(cfg.w())) {}

StairCodec::StairCodec(const StairConfig& cfg, gf::Field field) : cfg_(cfg), field_(std::move(field)) {
  if (field_.w() != cfg_.w()) throw ConfigError("field width does not match the configuration");
  if (cfg_.m() + cfg_.m_prime() > 0)
    row_code_.emplace(field_, cfg_.data_chunks(), cfg_.canonical_cols());
  if (cfg_.e_max() > 0) col_code_.emplace(field_, cfg_.r(), cfg_.canonical_rows());

  upstairs_.first = plan_upstairs_encoding(cfg_);
  upstairs_.second = CompiledSchedule(upstairs_.first, row_code(), column_code());
  downstairs_.first = plan_downstairs_encoding(cfg_);
  downstairs_.second = CompiledSchedule(downstairs_.first, row_code(), column_code());

  // Parity relations by encoding the identity: data cell d holds the unit
  // vector e_d, so every parity cell ends up holding its coefficient row.
  const auto data = data_cells(cfg_);
  const std::size_t eb = field_.element_bytes();
  const std::size_t width = std::max<std::size_t>(data.size(), 1) * eb;
  Stripe unit(cfg_, width);
  for (std::size_t d = 0; d < data.size(); ++d) unit.cell(data[d].row, data[d].col)[d * eb] = 1;
  CanonicalWorkspace ws(cfg_, width);
  ws.bind(unit.view());
  execute(upstairs_.second, field_, ws);

  relations_.parity = parity_cells(cfg_);
  relations_.combination.resize(relations_.parity.size());
  dependents_.assign(data.size(), {});
  for (std::size_t p = 0; p < relations_.parity.size(); ++p) {
    auto bytes = unit.cell(relations_.parity[p].row, relations_.parity[p].col);
    for (std::size_t d = 0; d < data.size(); ++d) {
      const gf::Element c = read_element(bytes.data() + d * eb, eb);
      if (c == 0) continue;
      relations_.combination[p].push_back({d, c});
      dependents_[d].push_back(p);
    }
  }
  data_index_.assign(cfg_.r() * cfg_.n(), kNone);
  for (std::size_t d = 0; d < data.size(); ++d) data_index_[data[d].row * cfg_.n() + data[d].col] = d;

  cost_.upstairs = upstairs_mult_xors(cfg_);
  cost_.downstairs = downstairs_mult_xors(cfg_);
  for (const auto& terms : relations_.combination) cost_.standard += terms.size();
  cost_.chosen = choose_method(cost_.standard, cost_.upstairs, cost_.downstairs);
}

void StairCodec::encode(const StripeView& stripe, EncodeMethod method) const {
  CanonicalWorkspace ws(cfg_, stripe.symbol_size());
  encode(stripe, method, ws);
}

void StairCodec::encode(const StripeView& stripe, EncodeMethod method, CanonicalWorkspace& ws) const {
  if (stripe.rows() != cfg_.r() || stripe.cols() != cfg_.n()) throw Error("stripe does not match " + cfg_.describe());
  switch (method) {
    case EncodeMethod::Standard: {
      const auto data = data_cells(cfg_);
      for (std::size_t p = 0; p < relations_.parity.size(); ++p) {
        gf::Region dst = stripe.cell(relations_.parity[p].row, relations_.parity[p].col);
        const auto& terms = relations_.combination[p];
        if (terms.empty()) {
          std::fill(dst.begin(), dst.end(), std::uint8_t{0});
          continue;
        }
        auto src = [&](std::size_t d) { return stripe.cell(data[d].row, data[d].col); };
        field_.mult_region(src(terms[0].data_index), dst, terms[0].coefficient);
        for (std::size_t t = 1; t < terms.size(); ++t)
          field_.mult_xor(src(terms[t].data_index), dst, terms[t].coefficient);
      }
      break;
    }
    case EncodeMethod::Upstairs:
      ws.bind(stripe);
      execute(upstairs_.second, field_, ws);
      break;
    case EncodeMethod::Downstairs:
      ws.bind(stripe);
      execute(downstairs_.second, field_, ws);
      break;
  }
}

Schedule StairCodec::plan_decode(const FailurePattern& pattern, DecodeStrategy strategy) const {
  return stair::plan_decode(cfg_, loss_mask(cfg_, pattern), strategy);
}

void StairCodec::decode(const StripeView& stripe, const FailurePattern& pattern, DecodeStrategy strategy) const {
  CanonicalWorkspace ws(cfg_, stripe.symbol_size());
  decode(stripe, pattern, strategy, ws);
}

void StairCodec::decode(const StripeView& stripe, const FailurePattern& pattern, DecodeStrategy strategy,
                        CanonicalWorkspace& ws) const {
  if (stripe.rows() != cfg_.r() || stripe.cols() != cfg_.n()) throw Error("stripe does not match " + cfg_.describe());
  const Schedule plan = plan_decode(pattern, strategy);
  if (plan.empty()) return;
  const CompiledSchedule compiled(plan, row_code(), column_code());
  ws.bind(stripe);
  execute(compiled, field_, ws);
}

CanonicalStripe StairCodec::build_canonical(const StripeView& stripe) const {
  const std::size_t r = cfg_.r(), n = cfg_.n(), k = cfg_.data_chunks();
  CanonicalStripe canon(cfg_.canonical_rows(), cfg_.canonical_cols(), stripe.symbol_size());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) std::copy_n(stripe.cell(i, j).begin(), stripe.symbol_size(), canon.cell(i, j).begin());

  // Intermediate parities: C_row outputs m..m+m'-1 of each stripe row.
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < cfg_.m_prime(); ++l) {
      gf::Region dst = canon.cell(i, n + l);
      for (std::size_t j = 0; j < k; ++j) field_.mult_xor(canon.cell(i, j), dst, row_code_->parity_coefficient(j, cfg_.m() + l));
    }
  // Every column extended by C_col.
  if (col_code_) {
    for (std::size_t c = 0; c < canon.cols(); ++c)
      for (std::size_t h = 0; h < cfg_.e_max(); ++h) {
        gf::Region dst = canon.cell(r + h, c);
        for (std::size_t i = 0; i < r; ++i) field_.mult_xor(canon.cell(i, c), dst, col_code_->parity_coefficient(i, h));
      }
  }
  return canon;
}

std::size_t StairCodec::xor_count(EncodeMethod method) const {
  switch (method) {
    case EncodeMethod::Standard: return cost_.standard;
    case EncodeMethod::Upstairs: return cost_.upstairs;
    case EncodeMethod::Downstairs: return cost_.downstairs;
  }
  return 0;
}

std::vector<Cell> StairCodec::parity_dependents(Cell cell) const {
  if (cell.row >= cfg_.r() || cell.col >= cfg_.n() || data_index_[cell.row * cfg_.n() + cell.col] == kNone)
    throw Error("cell (" + std::to_string(cell.row) + "," + std::to_string(cell.col) + ") is not a data cell");
  std::vector<Cell> out;
  for (auto p : dependents_[data_index_[cell.row * cfg_.n() + cell.col]]) out.push_back(relations_.parity[p]);
  return out;
}

double StairCodec::update_penalty() const {
  if (dependents_.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& d : dependents_) total += d.size();
  return static_cast<double>(total) / static_cast<double>(dependents_.size());
}

}  // namespace stair
