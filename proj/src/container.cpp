#include "stair/container.hpp"

#include <algorithm>
#include <cstring>

#include "stair/parallel.hpp"

namespace stair {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'A', 'I', 'R', 'C', '1', '\0'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes(b) {}
  template <typename T>
  T get() {
    if (pos + sizeof(T) > bytes.size()) throw ContainerError("container header is truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{bytes[pos + i]} << (8 * i);
    pos += sizeof(T);
    return static_cast<T>(v);
  }
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

template <typename F>
void for_each_data_cell(const ContainerHeader& h, std::size_t stripes, F&& f) {
  const auto cfg = h.config();
  const auto cells = data_cells(cfg);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < stripes; ++k)
    for (const auto& c : cells) {
      if (offset >= h.data_length) return;
      const std::size_t len = std::min<std::size_t>(h.symbol_size, h.data_length - offset);
      f(k, c, offset, len);
      offset += len;
    }
}

}  // namespace

ContainerHeader ContainerHeader::for_config(const StairConfig& cfg, std::size_t symbol_size, const gf::Field& field,
                                            std::uint64_t data_length) {
  if (symbol_size == 0 || symbol_size > 0xFFFFFFFFu) throw ContainerError("symbol size out of range");
  if (symbol_size % field.element_bytes() != 0) throw ContainerError("symbol size must be a multiple of w/8 bytes");
  if (cfg.n() > 0xFFFF || cfg.r() > 0xFFFF) throw ContainerError("n and r must fit in 16 bits");
  ContainerHeader h;
  h.w = static_cast<std::uint8_t>(cfg.w());
  h.n = static_cast<std::uint16_t>(cfg.n());
  h.r = static_cast<std::uint16_t>(cfg.r());
  h.m = static_cast<std::uint16_t>(cfg.m());
  for (auto v : cfg.e()) h.e.push_back(static_cast<std::uint16_t>(v));
  h.symbol_size = static_cast<std::uint32_t>(symbol_size);
  h.poly = static_cast<std::uint32_t>(field.polynomial());
  h.data_length = data_length;
  return h;
}

StairConfig ContainerHeader::config() const {
  return StairConfig::create(n, r, m, std::vector<std::size_t>(e.begin(), e.end()), w);
}

gf::Field ContainerHeader::field() const {
  std::uint64_t full = poly;
  if (w == 32) full |= std::uint64_t{1} << 32;
  return gf::Field(w, full);
}

std::size_t ContainerHeader::header_bytes() const { return 8 + 2 + 1 + 4 * 2 + 2 * e.size() + 4 + 4 + 8; }

std::size_t ContainerHeader::stripe_data_bytes() const { return config().data_symbols() * std::size_t{symbol_size}; }

std::size_t ContainerHeader::stripe_bytes() const { return std::size_t{n} * r * symbol_size; }

std::size_t ContainerHeader::stripe_count() const {
  const std::size_t per = stripe_data_bytes();
  if (per == 0) return 0;
  return static_cast<std::size_t>((data_length + per - 1) / per);
}

std::vector<std::uint8_t> serialize_header(const ContainerHeader& h) {
  Writer w;
  w.out.assign(std::begin(kMagic), std::end(kMagic));
  w.put<std::uint16_t>(h.version);
  w.put<std::uint8_t>(h.w);
  w.put<std::uint16_t>(h.n);
  w.put<std::uint16_t>(h.r);
  w.put<std::uint16_t>(h.m);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(h.e.size()));
  for (auto v : h.e) w.put<std::uint16_t>(v);
  w.put<std::uint32_t>(h.symbol_size);
  w.put<std::uint32_t>(h.poly);
  w.put<std::uint64_t>(h.data_length);
  return std::move(w.out);
}

ContainerHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw ContainerError("not a STAIR container (bad magic)");
  Reader rd(bytes);
  rd.pos = 8;
  ContainerHeader h;
  h.version = rd.get<std::uint16_t>();
  if (h.version != kContainerVersion)
    throw ContainerError("unsupported container version " + std::to_string(h.version));
  h.w = rd.get<std::uint8_t>();
  h.n = rd.get<std::uint16_t>();
  h.r = rd.get<std::uint16_t>();
  h.m = rd.get<std::uint16_t>();
  const auto mp = rd.get<std::uint16_t>();
  for (std::uint16_t i = 0; i < mp; ++i) h.e.push_back(rd.get<std::uint16_t>());
  h.symbol_size = rd.get<std::uint32_t>();
  h.poly = rd.get<std::uint32_t>();
  h.data_length = rd.get<std::uint64_t>();
  if (!std::is_sorted(h.e.begin(), h.e.end())) throw ContainerError("container e vector is not sorted");
  try {
    const auto f = h.field();
    h.config();
    if (h.symbol_size == 0 || h.symbol_size % f.element_bytes() != 0) throw ContainerError("bad symbol size");
  } catch (const ContainerError&) {
    throw;
  } catch (const Error& err) {
    throw ContainerError(std::string("invalid container parameters: ") + err.what());
  }
  return h;
}

std::vector<std::uint8_t> build_container(const StairCodec& codec, std::size_t symbol_size,
                                          std::span<const std::uint8_t> data, EncodeMethod method) {
  const auto h = ContainerHeader::for_config(codec.config(), symbol_size, codec.field(), data.size());
  auto out = serialize_header(h);
  const std::size_t head = out.size();
  out.resize(head + h.stripe_count() * h.stripe_bytes(), 0);
  auto stripes = container_stripes(out, h);
  const auto cfg = h.config();
  for_each_data_cell(h, h.stripe_count(), [&](std::size_t k, const Cell& c, std::size_t off, std::size_t len) {
    StripeView v(stripes.subspan(k * h.stripe_bytes(), h.stripe_bytes()), cfg.r(), cfg.n(), symbol_size);
    std::copy_n(data.begin() + off, len, v.cell(c.row, c.col).begin());
  });
  encode_stripes(codec, stripes, symbol_size, method);
  return out;
}

ContainerHeader check_container(std::span<const std::uint8_t> container) {
  auto h = parse_header(container);
  const std::size_t expect = h.header_bytes() + h.stripe_count() * h.stripe_bytes();
  if (container.size() != expect)
    throw ContainerError("container size " + std::to_string(container.size()) + " does not match header (expected " +
                         std::to_string(expect) + ")");
  return h;
}

std::span<std::uint8_t> container_stripes(std::span<std::uint8_t> container, const ContainerHeader& h) {
  return container.subspan(h.header_bytes(), h.stripe_count() * h.stripe_bytes());
}

std::vector<std::uint8_t> extract_data(std::span<const std::uint8_t> container) {
  const auto h = check_container(container);
  const auto cfg = h.config();
  const auto stripes = container.subspan(h.header_bytes());
  std::vector<std::uint8_t> data(h.data_length);
  for_each_data_cell(h, h.stripe_count(), [&](std::size_t k, const Cell& c, std::size_t off, std::size_t len) {
    const std::size_t at = k * h.stripe_bytes() + (c.col * cfg.r() + c.row) * h.symbol_size;
    std::copy_n(stripes.begin() + at, len, data.begin() + off);
  });
  return data;
}

}  // namespace stair
