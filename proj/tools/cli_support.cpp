#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>
#include <sstream>

namespace stair::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::size_t to_size(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) throw Error("bad " + what + " \"" + s + "\"");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("bad " + what + " \"" + s + "\"");
}

std::pair<std::size_t, std::size_t> pair_of(const std::string& s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error("expected a:b in " + what + ", got \"" + s + "\"");
  return {to_size(trim(s.substr(0, colon)), what), to_size(trim(s.substr(colon + 1)), what)};
}

}  // namespace

PatternSpec parse_pattern_spec(const std::string& text) {
  PatternSpec spec;
  for (const auto& clause : split(text, ';')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw Error("pattern clause \"" + clause + "\" lacks '='");
    const std::string key = trim(clause.substr(0, eq)), value = trim(clause.substr(eq + 1));
    for (const auto& item : split(value, ',')) {
      if (item.empty()) continue;
      if (key == "chunks") {
        spec.chunks.push_back(to_size(item, "chunk index"));
      } else if (key == "sectors") {
        spec.sector_counts.push_back(pair_of(item, "sectors"));
      } else if (key == "cells") {
        auto [c, r] = pair_of(item, "cells");
        spec.cells.push_back({r, c});
      } else {
        throw Error("unknown pattern clause \"" + key + "\" (want chunks, sectors or cells)");
      }
    }
  }
  return spec;
}

FailurePattern realize(const PatternSpec& spec, const StairConfig& cfg, std::uint64_t seed) {
  FailurePattern p;
  for (auto c : spec.chunks) {
    if (c >= cfg.n()) throw Error("chunk " + std::to_string(c) + " out of range");
    p.failed_chunks.insert(c);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> rows(cfg.r());
  for (auto [col, count] : spec.sector_counts) {
    if (col >= cfg.n()) throw Error("chunk " + std::to_string(col) + " out of range");
    if (count > cfg.r()) throw Error("chunk " + std::to_string(col) + " has only " + std::to_string(cfg.r()) + " sectors");
    if (p.failed_chunks.count(col)) continue;
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    p.sector_failures[col].insert(rows.begin(), rows.begin() + count);
  }
  for (const auto& cell : spec.cells) {
    if (cell.col >= cfg.n() || cell.row >= cfg.r()) throw Error("cell out of range");
    if (!p.failed_chunks.count(cell.col)) p.sector_failures[cell.col].insert(cell.row);
  }
  std::erase_if(p.sector_failures, [](const auto& kv) { return kv.second.empty(); });
  p.validate(cfg);
  return p;
}

nlohmann::json make_manifest(const StairConfig& cfg, std::size_t symbol_size,
                             const std::vector<std::pair<std::size_t, FailurePattern>>& damage) {
  nlohmann::json j;
  j["n"] = cfg.n();
  j["r"] = cfg.r();
  j["m"] = cfg.m();
  j["e"] = cfg.e();
  j["symbol_size"] = symbol_size;
  bool all_within = true;
  auto stripes = nlohmann::json::array();
  for (const auto& [k, p] : damage) {
    nlohmann::json s;
    s["stripe"] = k;
    s["failed_chunks"] = std::vector<std::size_t>(p.failed_chunks.begin(), p.failed_chunks.end());
    auto sectors = nlohmann::json::array();
    for (const auto& [col, rows] : p.sector_failures)
      sectors.push_back({{"chunk", col}, {"rows", std::vector<std::size_t>(rows.begin(), rows.end())}});
    s["sectors"] = sectors;
    auto cells = nlohmann::json::array();
    for (const auto& c : p.cells(cfg)) cells.push_back({c.col, c.row});
    s["cells"] = cells;
    const bool within = pattern_within_coverage(cfg, p);
    s["within_coverage"] = within;
    all_within = all_within && within;
    stripes.push_back(s);
  }
  j["stripes"] = stripes;
  j["within_coverage"] = all_within;
  return j;
}

std::vector<FailurePattern> read_manifest(const nlohmann::json& manifest, const StairConfig& cfg, std::size_t stripes) {
  std::vector<FailurePattern> out(stripes);
  try {
    if (manifest.at("n").get<std::size_t>() != cfg.n() || manifest.at("r").get<std::size_t>() != cfg.r() ||
        manifest.at("m").get<std::size_t>() != cfg.m() || manifest.at("e").get<std::vector<std::size_t>>() != cfg.e())
      throw Error("manifest was written for a different code configuration");
    for (const auto& s : manifest.at("stripes")) {
      const auto k = s.at("stripe").get<std::size_t>();
      if (k >= stripes) throw Error("manifest names stripe " + std::to_string(k) + " beyond the container");
      FailurePattern p;
      for (auto c : s.at("failed_chunks")) p.failed_chunks.insert(c.get<std::size_t>());
      for (const auto& sec : s.at("sectors"))
        for (auto row : sec.at("rows")) p.sector_failures[sec.at("chunk").get<std::size_t>()].insert(row.get<std::size_t>());
      p.validate(cfg);
      out[k] = std::move(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  return out;
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool correlated = false;
  reliability::Correlated corr;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("scenario line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto& p = sc.params;
    if (key == "user_pb") {
      p.user_bytes = static_cast<std::uint64_t>(to_double(value, key) * reliability::kPB);
    } else if (key == "capacity_gb") {
      p.capacity_bytes = static_cast<std::uint64_t>(to_double(value, key) * reliability::kGB);
    } else if (key == "sector_bytes") {
      p.sector_bytes = to_size(value, key);
    } else if (key == "mttf_hours") {
      p.mttf_hours = to_double(value, key);
    } else if (key == "mttr_hours") {
      p.mttr_hours = to_double(value, key);
    } else if (key == "n") {
      sc.n = to_size(value, key);
    } else if (key == "r") {
      sc.r = to_size(value, key);
    } else if (key == "m") {
      sc.m = to_size(value, key);
    } else if (key == "model") {
      if (value == "independent")
        correlated = false;
      else if (value == "correlated")
        correlated = true;
      else
        throw Error("scenario model must be independent or correlated");
    } else if (key == "b1") {
      corr.b1 = to_double(value, key);
    } else if (key == "alpha") {
      corr.alpha = to_double(value, key);
    } else if (key == "p_bit") {
      sc.p_bits.clear();
      for (const auto& v : split(value, ',')) sc.p_bits.push_back(to_double(v, key));
    } else if (key == "codes") {
      sc.codes.clear();
      for (const auto& v : split(value, ';'))
        if (!v.empty()) sc.codes.push_back(reliability::CodeSpec::parse(v));
    } else {
      throw Error("scenario line " + std::to_string(lineno) + ": unknown key \"" + key + "\"");
    }
  }
  if (correlated) sc.params.model = corr;
  if (sc.codes.empty()) sc.codes = {reliability::CodeSpec::rs(), reliability::CodeSpec::stair({1})};
  return sc;
}

std::vector<std::vector<std::size_t>> enumerate_e(std::size_t s, std::size_t max_len, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t left, std::size_t min_part) -> void {
    if (left == 0) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    if (cur.size() == max_len) return;
    for (std::size_t v = min_part; v <= std::min(left, r); ++v) {
      cur.push_back(v);
      self(self, left - v, v);
      cur.pop_back();
    }
  };
  rec(rec, s, 1);
  return out;
}

std::string Table::csv() const {
  auto quote = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + quote(columns[i]);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + quote(row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
    out += "\n";
  }
  return out;
}

nlohmann::json Table::json() const {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) obj[columns[i]] = row[i];
    arr.push_back(obj);
  }
  return arr;
}

std::string Table::render(const std::string& format) const {
  if (format == "json") return json().dump(2) + "\n";
  return csv();
}

}  // namespace stair::cli
