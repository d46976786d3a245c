#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "cli_support.hpp"
#include "stair/codec.hpp"
#include "stair/container.hpp"
#include "stair/parallel.hpp"
#include "stair/reliability.hpp"
#include "stair/sim.hpp"

namespace fs = std::filesystem;
using namespace stair;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnrecoverable = 2;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// One file per device: header.bin plus chunk_NN.bin holding that device's
// chunk of every stripe in order.
void write_devices(const fs::path& dir, std::span<const std::uint8_t> container) {
  const auto h = check_container(container);
  fs::create_directories(dir);
  write_file(dir / "header.bin", container.first(h.header_bytes()));
  const std::size_t chunk = std::size_t{h.r} * h.symbol_size;
  for (std::size_t j = 0; j < h.n; ++j) {
    std::vector<std::uint8_t> dev;
    for (std::size_t k = 0; k < h.stripe_count(); ++k) {
      const auto at = container.begin() + h.header_bytes() + k * h.stripe_bytes() + j * chunk;
      dev.insert(dev.end(), at, at + chunk);
    }
    char name[32];
    std::snprintf(name, sizeof name, "chunk_%02zu.bin", j);
    write_file(dir / name, dev);
  }
}

std::vector<std::uint8_t> read_devices(const fs::path& dir) {
  auto out = read_file(dir / "header.bin");
  const auto h = parse_header(out);
  const std::size_t chunk = std::size_t{h.r} * h.symbol_size;
  out.resize(h.header_bytes() + h.stripe_count() * h.stripe_bytes(), 0);
  for (std::size_t j = 0; j < h.n; ++j) {
    char name[32];
    std::snprintf(name, sizeof name, "chunk_%02zu.bin", j);
    const auto path = dir / name;
    if (!fs::exists(path)) continue;  // a missing device reads as zeros; repair needs it in the manifest
    const auto dev = read_file(path);
    if (dev.size() != h.stripe_count() * chunk) throw Error(path.string() + " has the wrong size");
    for (std::size_t k = 0; k < h.stripe_count(); ++k)
      std::copy_n(dev.begin() + k * chunk, chunk, out.begin() + h.header_bytes() + k * h.stripe_bytes() + j * chunk);
  }
  return out;
}

std::vector<std::uint8_t> load_container(const std::string& path, const std::string& devices) {
  return devices.empty() ? read_file(path) : read_devices(devices);
}

struct CodeFlags {
  std::size_t n = 8, r = 16, m = 1;
  std::string e = "1";
  unsigned w = 8;

  void add(CLI::App* app) {
    app->add_option("-n,--n", n, "devices per stripe")->capture_default_str();
    app->add_option("-r,--r", r, "sectors per chunk")->capture_default_str();
    app->add_option("-m,--m", m, "tolerable device failures")->capture_default_str();
    app->add_option("-e,--e", e, "sector-failure coverage, e.g. 1,1,2 (empty for plain RS)")->capture_default_str();
    app->add_option("-w,--w", w, "field width")->check(CLI::IsMember({8u, 16u, 32u}))->capture_default_str();
  }
  StairConfig config() const { return StairConfig::create(n, r, m, parse_e(e), w); }
};

EncodeMethod method_from(const std::string& name, const StairCodec& codec) {
  return name == "auto" ? codec.cost().chosen : parse_method(name);
}

std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t count) {
  std::vector<std::size_t> out;
  if (text == "all") {
    for (std::size_t k = 0; k < count; ++k) out.push_back(k);
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto k = std::stoull(item);
    if (k >= count) throw Error("stripe " + item + " out of range (container has " + std::to_string(count) + ")");
    out.push_back(k);
  }
  return out;
}

int repair_in_place(std::vector<std::uint8_t>& container, const nlohmann::json& manifest) {
  const auto h = check_container(container);
  const auto cfg = h.config();
  const StairCodec codec(cfg, h.field());
  const auto patterns = cli::read_manifest(manifest, cfg, h.stripe_count());
  const auto status = decode_stripes(codec, container_stripes(container, h), h.symbol_size, patterns);
  int bad = 0;
  for (std::size_t k = 0; k < status.size(); ++k)
    if (status[k] == StripeStatus::Unrecoverable) {
      std::cerr << "stripe " << k << ": unrecoverable\n";
      ++bad;
    }
  return bad;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Best of `iters` runs, in MB/s of data per stripe buffer.
template <typename F>
double throughput(std::size_t data_bytes, int iters, F&& f) {
  double best = 0;
  for (int i = 0; i < iters; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::max(best, data_bytes / 1e6 / seconds_since(t0));
  }
  return best;
}

int run_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    failures += !ok;
  };
  std::mt19937_64 rng(7);
  for (auto [n, r, m, e] : {std::tuple{8, 4, 2, std::vector<std::size_t>{1, 1, 2}}, {6, 3, 1, {1, 2}}, {8, 16, 1, {4}},
                            {5, 4, 2, {}}}) {
    const auto cfg = StairConfig::create(n, r, m, e);
    const StairCodec codec(cfg);
    Stripe base(cfg, 64);
    for (const auto& c : data_cells(cfg))
      for (auto& b : base.cell(c.row, c.col)) b = static_cast<std::uint8_t>(rng());
    Stripe a = base, b = base, c = base;
    codec.encode(a.view(), EncodeMethod::Standard);
    codec.encode(b.view(), EncodeMethod::Upstairs);
    codec.encode(c.view(), EncodeMethod::Downstairs);
    check(a == b && b == c, cfg.describe() + " encoders agree");
    bool round = true;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto p = sim::sample_pattern(cfg, seed, true);
      Stripe d = a;
      sim::inject(d.view(), cfg, p);
      codec.decode(d.view(), p);
      round = round && d == a;
    }
    check(round, cfg.describe() + " decode round trip");
  }
  return failures ? kExitError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_limit();
  CLI::App app{"STAIR erasure codes: encode, damage, repair, cost and reliability tools"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  // encode
  auto* enc = app.add_subcommand("encode", "encode a file into a container");
  CodeFlags enc_code;
  enc_code.add(enc);
  std::string enc_in, enc_out, enc_method = "auto", enc_devices, enc_poly = "0";
  std::size_t enc_symbol = 512;
  enc->add_option("input", enc_in, "input file")->required()->check(CLI::ExistingFile);
  enc->add_option("-o,--output", enc_out, "container path");
  enc->add_option("--devices", enc_devices, "write one file per device into this directory instead");
  enc->add_option("--symbol", enc_symbol, "symbol (sector) size in bytes")->capture_default_str();
  enc->add_option("--poly", enc_poly, "field polynomial, 0 for the default")->capture_default_str();
  enc->add_option("--method", enc_method, "encoder")
      ->check(CLI::IsMember({"auto", "standard", "upstairs", "downstairs"}))
      ->capture_default_str();

  // decode
  auto* dec = app.add_subcommand("decode", "extract the original file from a container");
  std::string dec_in, dec_out, dec_devices, dec_manifest;
  dec->add_option("input", dec_in, "container path");
  dec->add_option("--devices", dec_devices, "read per-device files from this directory");
  dec->add_option("-o,--output", dec_out, "output file")->required();
  dec->add_option("--manifest", dec_manifest, "repair the damage listed here first");

  // inject
  auto* inj = app.add_subcommand("inject", "erase chunks and sectors in a container");
  std::string inj_in, inj_out, inj_spec, inj_stripes = "all", inj_manifest;
  std::uint64_t inj_seed = 1;
  inj->add_option("input", inj_in, "container path")->required()->check(CLI::ExistingFile);
  inj->add_option("-o,--output", inj_out, "damaged container")->required();
  inj->add_option("--spec", inj_spec, "e.g. \"chunks=3,7;sectors=4:2,5:1\" or \"cells=4:0,4:3\"");
  inj->add_option("--stripes", inj_stripes, "\"all\" or a comma list of stripe indices")->capture_default_str();
  inj->add_option("--seed", inj_seed, "seed for sector row choice")->capture_default_str();
  inj->add_option("--manifest", inj_manifest, "where to write the damage manifest")->required();

  // repair
  auto* rep = app.add_subcommand("repair", "rebuild the cells listed in a manifest");
  std::string rep_in, rep_out, rep_manifest;
  rep->add_option("input", rep_in, "damaged container")->required()->check(CLI::ExistingFile);
  rep->add_option("--manifest", rep_manifest, "damage manifest")->required()->check(CLI::ExistingFile);
  rep->add_option("-o,--output", rep_out, "restored container")->required();

  // cost
  auto* cost = app.add_subcommand("cost", "Mult_XOR counts of the three encoders");
  CodeFlags cost_code;
  cost_code.add(cost);
  long cost_sweep = -1;
  cost->add_option("--sweep-s", cost_sweep, "list every e with this sum instead of a single e");

  // reliability
  auto* rel = app.add_subcommand("reliability", "MTTDL report for a scenario file");
  std::string rel_file;
  bool rel_validate = false;
  std::uint64_t rel_trials = 1000000, rel_seed = 1;
  double rel_psec = 1e-3;
  rel->add_option("scenario", rel_file, "key = value scenario file")->required()->check(CLI::ExistingFile);
  rel->add_flag("--validate", rel_validate, "cross-check P_str against Monte-Carlo at an inflated P_sec");
  rel->add_option("--trials", rel_trials, "Monte-Carlo trials")->capture_default_str();
  rel->add_option("--p-sec", rel_psec, "P_sec used by --validate")->capture_default_str();
  rel->add_option("--seed", rel_seed, "Monte-Carlo seed")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "encode/decode throughput");
  CodeFlags bench_code;
  bench_code.n = 16;
  bench_code.r = 16;
  bench_code.m = 2;
  bench_code.e = "1,1,2";
  bench_code.add(bench);
  double bench_mib = 32;
  int bench_iters = 3;
  long bench_sweep = -1;
  bench->add_option("--size", bench_mib, "buffer size in MiB")->capture_default_str();
  bench->add_option("--iters", bench_iters, "runs per measurement (best is kept)")->capture_default_str();
  bench->add_option("--sweep-s", bench_sweep, "measure every e with this sum");

  auto* self = app.add_subcommand("selftest", "quick encode/decode self check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (enc->parsed()) {
      if (enc_out.empty() == enc_devices.empty()) throw Error("give exactly one of --output and --devices");
      const auto cfg = enc_code.config();
      const StairCodec codec(cfg, gf::Field(cfg.w(), std::stoull(enc_poly, nullptr, 0)));
      const auto data = read_file(enc_in);
      const auto method = method_from(enc_method, codec);
      const auto container = build_container(codec, enc_symbol, data, method);
      if (enc_devices.empty())
        write_file(enc_out, container);
      else
        write_devices(enc_devices, container);
      std::cerr << "encoded " << data.size() << " bytes into " << check_container(container).stripe_count()
                << " stripes of " << cfg.describe() << " with " << to_string(method) << " encoding\n";
      return 0;
    }
    if (dec->parsed()) {
      if (dec_in.empty() == dec_devices.empty()) throw Error("give exactly one of a container path and --devices");
      auto container = load_container(dec_in, dec_devices);
      int bad = 0;
      if (!dec_manifest.empty()) bad = repair_in_place(container, nlohmann::json::parse(read_file(dec_manifest)));
      write_file(dec_out, extract_data(container));
      return bad ? kExitUnrecoverable : 0;
    }
    if (inj->parsed()) {
      auto container = read_file(inj_in);
      const auto h = check_container(container);
      const auto cfg = h.config();
      const auto spec = cli::parse_pattern_spec(inj_spec);
      std::vector<std::pair<std::size_t, FailurePattern>> damage;
      if (!spec.empty()) {
        auto stripes = container_stripes(container, h);
        for (auto k : parse_index_list(inj_stripes, h.stripe_count())) {
          auto p = cli::realize(spec, cfg, inj_seed + k);
          sim::inject(StripeView(stripes.subspan(k * h.stripe_bytes(), h.stripe_bytes()), cfg.r(), cfg.n(), h.symbol_size),
                      cfg, p);
          damage.emplace_back(k, std::move(p));
        }
      }
      const auto manifest = cli::make_manifest(cfg, h.symbol_size, damage);
      write_file(inj_out, container);
      write_text(inj_manifest, manifest.dump(2) + "\n");
      if (!manifest["within_coverage"].get<bool>()) std::cerr << "warning: damage exceeds the code's coverage\n";
      return 0;
    }
    if (rep->parsed()) {
      auto container = read_file(rep_in);
      const int bad = repair_in_place(container, nlohmann::json::parse(read_file(rep_manifest)));
      write_file(rep_out, container);
      return bad ? kExitUnrecoverable : 0;
    }
    if (cost->parsed()) {
      cli::Table t{{"n", "r", "m", "e", "s", "x_standard", "x_up", "x_down", "chosen"}, {}};
      std::vector<std::vector<std::size_t>> es;
      if (cost_sweep >= 0)
        es = cost_sweep == 0 ? std::vector<std::vector<std::size_t>>{{}}
                             : cli::enumerate_e(cost_sweep, cost_code.n - cost_code.m, cost_code.r);
      else
        es.push_back(parse_e(cost_code.e));
      for (const auto& e : es) {
        const auto cfg = StairConfig::create(cost_code.n, cost_code.r, cost_code.m, e, cost_code.w);
        const auto c = StairCodec(cfg).cost();
        t.rows.push_back({cfg.n(), cfg.r(), cfg.m(), format_e(cfg.e()), cfg.s(), c.standard, c.upstairs, c.downstairs,
                          to_string(c.chosen)});
      }
      std::cout << t.render(format);
      return 0;
    }
    if (rel->parsed()) {
      const auto text = read_file(rel_file);
      const auto sc = cli::parse_scenario(std::string(text.begin(), text.end()));
      const bool corr = std::holds_alternative<reliability::Correlated>(sc.params.model);
      cli::Table t{{"P_bit", "model", "code", "e", "s", "E", "N_arr", "P_sec", "P_str", "P_arr", "P_arr_approx",
                    "MTTDL_arr", "MTTDL_sys", "B"},
                   {}};
      for (double pb : sc.p_bits)
        for (const auto& code : sc.codes) {
          auto params = sc.params;
          params.p_bit = pb;
          const auto r = reliability::mttdl(params, sc.n, sc.r, sc.m, code);
          t.rows.push_back({pb, corr ? "correlated" : "independent", code.name(),
                            code.kind == reliability::CodeSpec::Kind::STAIR ? format_e(code.e) : "", code.s(),
                            r.efficiency, r.n_arr, r.p_sec, r.p_str, r.p_arr, r.p_arr_approx, r.mttdl_arr, r.mttdl_sys,
                            r.mean_burst});
        }
      std::cout << t.render(format);
      if (!rel_validate) return 0;

      cli::Table v{{"code", "p_sec", "analytic", "simulated", "std_error", "ci99_low", "ci99_high", "within_3sigma"}, {}};
      reliability::ChunkFailureDist dist;
      if (const auto* c = std::get_if<reliability::Correlated>(&sc.params.model))
        dist = reliability::p_chk_correlated(sc.r, rel_psec, c->b1, c->alpha).dist;
      else
        dist = reliability::p_chk_independent(sc.r, rel_psec);
      bool all = true;
      for (const auto& code : sc.codes) {
        const double analytic = reliability::p_str(code.recoverable(), dist, sc.n - sc.m);
        const auto est = sim::monte_carlo_p_str(code.recoverable(), dist, sc.n - sc.m, rel_trials, rel_seed);
        const bool ok = est.within_sigma(analytic, 3.0);
        all = all && ok;
        v.rows.push_back({code.name(), rel_psec, analytic, est.p, est.std_error, est.ci_low, est.ci_high, ok});
      }
      std::cout << (format == "csv" ? "\n" : "") << v.render(format);
      return all ? 0 : kExitError;
    }
    if (bench->parsed()) {
      std::vector<std::vector<std::size_t>> es;
      if (bench_sweep > 0)
        es = cli::enumerate_e(bench_sweep, bench_code.n - bench_code.m, bench_code.r);
      else
        es.push_back(parse_e(bench_code.e));
      cli::Table t{{"e", "method", "mult_xors", "threads", "encode_MBps", "serial_encode_MBps", "decode_MBps"}, {}};
      const std::size_t symbol = 4096;
      for (const auto& e : es) {
        const auto cfg = StairConfig::create(bench_code.n, bench_code.r, bench_code.m, e, bench_code.w);
        const StairCodec codec(cfg);
        const std::size_t sb = stripe_bytes(cfg, symbol);
        const std::size_t stripes = std::max<std::size_t>(1, static_cast<std::size_t>(bench_mib * (1 << 20)) / sb);
        std::vector<std::uint8_t> buf(stripes * sb);
        std::mt19937_64 rng(3);
        for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
        const std::size_t data_bytes = stripes * cfg.data_symbols() * symbol;
        std::vector<FailurePattern> patterns(stripes);
        for (std::size_t k = 0; k < stripes; ++k) patterns[k] = sim::sample_pattern(cfg, k, true);
        for (auto method : {EncodeMethod::Standard, EncodeMethod::Upstairs, EncodeMethod::Downstairs}) {
          const double par = throughput(data_bytes, bench_iters, [&] { encode_stripes(codec, buf, symbol, method); });
          const double ser =
              throughput(data_bytes, bench_iters, [&] { reference::encode_stripes(codec, buf, symbol, method); });
          const double decode = throughput(data_bytes, bench_iters, [&] { decode_stripes(codec, buf, symbol, patterns); });
          t.rows.push_back({format_e(cfg.e()), to_string(method) + (method == codec.cost().chosen ? "*" : ""),
                            codec.xor_count(method), omp_get_max_threads(), par, ser, decode});
        }
      }
      std::cout << t.render(format);
      return 0;
    }
    if (self->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
