#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "oblivisel/baseline.hpp"
#include "oblivisel/generate.hpp"
#include "oblivisel/int_collect.hpp"
#include "oblivisel/inversion_counting.hpp"
#include "oblivisel/oblivious_primitives.hpp"
#include "oblivisel/oracle.hpp"
#include "oblivisel/selection.hpp"

namespace oblivisel::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("OBLIVISEL_SEED");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 0);
  if (*end != '\0') throw UsageError("OBLIVISEL_SEED is not an integer");
  return v;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

nlohmann::json big_number(i128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<std::int64_t>(v);
  return to_string(v);
}

std::vector<Point> read_points(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<Point> pairs = parse_pairs(in);
  if (format == "lines") {
    std::vector<Line> lines;
    for (const Point& p : pairs) lines.push_back(Line{p.x, p.y, 0, 1});
    return to_points(lines);
  }
  return pairs;
}

// ---- audit ------------------------------------------------------------------

struct AuditConfig {
  std::string target;
  std::size_t n = 0;
  std::size_t cases = 0;
  std::uint64_t seed = 0;
  std::string kind;
  std::string dump;
  std::vector<std::string> inputs;
  std::string format = "points";
};

const auto int_less = [](std::uint32_t a, std::uint32_t b) { return a < b; };

std::vector<std::uint32_t> random_words(SplitMix64& rng, std::size_t n) {
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng());
  return v;
}

std::vector<std::uint32_t> sorted_words(SplitMix64& rng, std::size_t n) {
  auto v = random_words(rng, n);
  std::sort(v.begin(), v.end());
  return v;
}

Boundary random_boundary(SplitMix64& rng, const std::vector<Line>& lines) {
  const std::size_t i = rng.below(lines.size());
  std::size_t j = rng.below(lines.size() - 1);
  j += j >= i ? 1 : 0;
  return Boundary::at(make_intersection(lines[i], lines[j]));
}

std::vector<Line> labelled_lines(InputKind kind, std::size_t n, std::uint64_t seed) {
  TraceLog scratch(TraceLog::Mode::Count);
  auto raw = alloc_from(scratch, generate_lines(kind, n, seed));
  return read_all(preprocess(raw).lines);
}

InputKind case_kind(const AuditConfig& cfg, std::size_t c) {
  if (!cfg.kind.empty()) return parse_kind(cfg.kind);
  return c % 2 == 0 ? InputKind::Spread : InputKind::Pencil;
}

// Sets up case c's inputs against `log` and returns the audited action.
std::function<void()> audit_case(const AuditConfig& cfg, std::size_t c, TraceLog& log,
                                 std::vector<std::function<void()>>& keep) {
  SplitMix64 data = SplitMix64(cfg.seed).split(c + 1);
  const std::size_t n = cfg.n;
  const std::string& t = cfg.target;
  auto hold = [&keep](auto ptr) { keep.push_back([ptr] {}); };

  if (t == "sort" || t == "select" || t == "filter") {
    auto a = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, random_words(data, n)));
    hold(a);
    if (t == "sort") return [a] { sort(*a, int_less); };
    if (t == "select") return [a, n] { (void)select(*a, n / 2, int_less); };
    return [a] { (void)filter(*a, [](std::uint32_t x) { return x % 3 == 0; }); };
  }
  if (t == "merge") {
    auto a = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, sorted_words(data, n / 2)));
    auto b = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, sorted_words(data, n - n / 2)));
    hold(a);
    hold(b);
    return [a, b] { (void)merge(*a, *b, int_less); };
  }
  if (t == "append") {
    auto a = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, random_words(data, n)));
    auto b = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, random_words(data, n / 2)));
    hold(a);
    hold(b);
    const std::size_t i = data.below(n + 1);
    const std::size_t k = data.below(std::min(n / 2, n - i) + 1);
    return [a, b, i, k] { append(*a, *b, i, k); };
  }
  if (t == "inversions") {
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[data.below(i)]);
    auto a = std::make_shared<TracedArray<std::uint32_t>>(alloc_from(log, v));
    hold(a);
    return [a] { (void)inversions(*a, int_less); };
  }
  if (t == "int_count" || t == "int_collect" || t == "int_sample") {
    const auto lines = labelled_lines(case_kind(cfg, c), n, data());
    Boundary a = random_boundary(data, lines), b = random_boundary(data, lines);
    if (compare_boundary(a, b) > 0) std::swap(a, b);
    if (compare_boundary(a, b) == 0 || t == "int_sample") {
      a = Boundary::neg_inf();
      b = Boundary::pos_inf();
    }
    auto p = std::make_shared<TracedArray<Line>>(alloc_from(log, lines));
    hold(p);
    if (t == "int_count") return [p, a, b] { (void)int_count(*p, a, b); };
    if (t == "int_sample") {
      const std::uint64_t seed = cfg.seed;
      return [p, a, b, n, seed] {
        SplitMix64 rng(seed);
        (void)int_sample(*p, a, b, n, rng);
      };
    }
    const std::uint64_t total = [&] {
      log.set_enabled(false);
      const std::uint64_t v = int_count(*p, a, b);
      log.set_enabled(true);
      return v;
    }();
    if (total == 0) {
      a = Boundary::neg_inf();
      b = Boundary::pos_inf();
    }
    const std::uint64_t range = total == 0 ? n * (n - 1) / 2 : total;
    std::vector<std::uint64_t> k(n);
    for (auto& i : k) i = data.below(range);
    std::sort(k.begin(), k.end());
    return [p, a, b, k] { (void)int_collect(*p, a, b, k); };
  }
  if (t == "median") {
    std::vector<Point> pts;
    if (!cfg.inputs.empty()) {
      pts = read_points(cfg.inputs[c], cfg.format);
    } else {
      pts = to_points(generate_lines(case_kind(cfg, c), n, data()));
    }
    const std::uint64_t seed = cfg.seed;
    return [&log, pts, seed] {
      SplitMix64 rng(seed);
      (void)median_slope(log, pts, rng);
    };
  }
  throw UsageError("unknown audit target: " + t);
}

int audit(AuditConfig cfg, std::ostream& out) {
  if (!cfg.inputs.empty()) {
    if (cfg.target != "median") throw UsageError("--inputs is only supported for --target median");
    cfg.cases = cfg.inputs.size();
    std::optional<std::size_t> n;
    for (const auto& path : cfg.inputs) {
      const std::size_t m = read_points(path, cfg.format).size();
      if (n && *n != m) throw UsageError("mismatched leakage: inputs have different sizes");
      n = m;
    }
    cfg.n = *n;
  }
  if (cfg.n < 2) throw UsageError("--n must be at least 2");
  if (cfg.cases < 1) throw UsageError("--cases must be positive");
  out << "target=" << cfg.target << " n=" << cfg.n << " cases=" << cfg.cases << " seed=" << cfg.seed << '\n';
  std::vector<TraceFingerprint> fps;
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const bool record = c == 0 && !cfg.dump.empty();
    TraceLog log(record ? TraceLog::Mode::Record : TraceLog::Mode::Digest);
    std::vector<std::function<void()>> keep;
    const auto action = audit_case(cfg, c, log, keep);
    const TraceFingerprint fp = scoped_trace(log, [&] {
      action();
      if (record) {
        std::ofstream dump(cfg.dump);
        write_trace(dump, log.probes());
      }
    }).fingerprint;
    out << "case " << c << " digest=" << hex(fp.digest) << " probes=" << fp.probe_count << '\n';
    fps.push_back(fp);
  }
  const bool pass = std::all_of(fps.begin(), fps.end(), [&](const TraceFingerprint& f) { return f == fps[0]; });
  out << (pass ? "PASS" : "FAIL") << " digest=" << hex(fps[0].digest) << " probes=" << fps[0].probe_count << '\n';
  return pass ? kOk : kFail;
}

// ---- median / bench / gen ------------------------------------------------------

int median(const std::string& input, const std::string& format, const std::string& emit, const std::string& algo,
           std::uint64_t seed, bool digest, std::ostream& out) {
  const std::vector<Point> pts = read_points(input, format);
  TraceLog log(digest ? TraceLog::Mode::Digest : TraceLog::Mode::Count);
  SplitMix64 rng(seed);
  SelectionStats st;
  // The oracle runs on plain memory and records no probes.
  const SlopeResult r = algo == "oracle"     ? oracle::theil_sen_median(pts)
                        : algo == "baseline" ? baseline::median_slope(log, pts, rng, &st)
                                             : median_slope(log, pts, rng, {}, &st);
  if (emit == "json") {
    nlohmann::json j{{"num", big_number(r.value.num)},
                     {"den", big_number(r.value.den)},
                     {"approx", r.approx()},
                     {"n", pts.size()},
                     {"probes", log.probe_count()},
                     {"seed", seed},
                     {"iterations", st.iterations}};
    if (digest) j["digest"] = hex(log.fingerprint().digest);
    out << j.dump() << '\n';
  } else {
    out << to_string(r.value) << " (" << std::setprecision(17) << r.approx() << ")\n";
    out << "n=" << pts.size() << " probes=" << log.probe_count() << " seed=" << seed << '\n';
  }
  return kOk;
}

int bench(const std::vector<std::size_t>& sizes, InputKind kind, const std::string& algo, std::uint64_t seed,
          std::ostream& out) {
  out << "n,probes,millis,iterations\n";
  for (std::size_t n : sizes) {
    const std::vector<Point> pts = to_points(generate_lines(kind, n, seed));
    TraceLog log(TraceLog::Mode::Count);
    SplitMix64 rng(seed);
    SelectionStats st;
    const auto start = std::chrono::steady_clock::now();
    if (algo == "baseline") {
      baseline::median_slope(log, pts, rng, &st);
    } else {
      median_slope(log, pts, rng, {}, &st);
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    out << n << ',' << log.probe_count() << ',' << ms << ',' << st.iterations << '\n';
    out.flush();
  }
  return kOk;
}

int gen(InputKind kind, std::size_t n, std::uint64_t seed, const std::string& format, const SpreadRange& range,
        const std::string& output, std::ostream& out) {
  const std::vector<Line> lines = generate_lines(kind, n, seed, range);
  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw std::invalid_argument("cannot write " + output);
  }
  std::ostream& dst = output.empty() ? out : file;
  dst << "# " << to_string(kind) << " n=" << n << " seed=" << seed << " format=" << format << '\n';
  if (format == "lines") {
    for (const Line& l : lines) dst << l.m << ',' << l.b << '\n';
  } else {
    for (const Point& p : to_points(lines)) dst << p.x << ',' << p.y << '\n';
  }
  return kOk;
}

}  // namespace

std::vector<Point> parse_pairs(std::istream& in) {
  std::vector<Point> out;
  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string text = raw.substr(0, raw.find('#'));
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream s(text);
    std::int64_t x = 0, y = 0;
    char comma = 0;
    std::string rest;
    if (!(s >> x >> comma >> y) || comma != ',' || (s >> rest)) {
      throw std::invalid_argument("malformed input at line " + std::to_string(line_no) + ": " + raw);
    }
    out.push_back({x, y});
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  const auto dots = list.find("..");
  try {
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoull(list.substr(0, dots)), hi = std::stoull(list.substr(dots + 2));
      if (lo == 0 || lo > hi) throw std::invalid_argument("bad range");
      for (std::size_t n = lo; n <= hi; n *= 2) out.push_back(n);
    } else {
      std::istringstream s(list);
      for (std::string item; std::getline(s, item, ',');) out.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw UsageError("bad size list: " + list);
  }
  if (out.empty()) throw UsageError("empty size list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-oblivious Theil-Sen median slope", "oblivisel"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed = v, seed_given = true; }, "Random seed (default $OBLIVISEL_SEED or 1)");
  };

  std::string input, format = "points", emit = "json", algo = "oblivious";
  bool digest = false;
  auto* med = app.add_subcommand("median", "Median slope of an input file");
  med->add_option("--input", input, "CSV input")->required();
  med->add_option("--format", format, "points (x,y) or lines (m,b)")->check(CLI::IsMember({"points", "lines"}));
  med->add_option("--emit", emit)->check(CLI::IsMember({"json", "text"}));
  med->add_option("--algo", algo)->check(CLI::IsMember({"oblivious", "baseline", "oracle"}));
  med->add_flag("--digest", digest, "Also fingerprint the trace");
  add_seed(med);

  AuditConfig acfg;
  acfg.n = 33;
  acfg.cases = 10;
  auto* aud = app.add_subcommand("audit", "Compare fingerprints over same-leakage inputs");
  aud->add_option("--target", acfg.target)
      ->required()
      ->check(CLI::IsMember({"sort", "merge", "select", "filter", "append", "inversions", "int_count", "int_collect",
                             "int_sample", "median"}));
  aud->add_option("--n", acfg.n);
  aud->add_option("--cases", acfg.cases);
  aud->add_option("--kind", acfg.kind)->check(CLI::IsMember({"spread", "pencil"}));
  aud->add_option("--dump", acfg.dump, "Write the first case's trace here");
  aud->add_option("--inputs", acfg.inputs, "Input files (median only)");
  aud->add_option("--format", acfg.format)->check(CLI::IsMember({"points", "lines"}));
  add_seed(aud);

  std::string sizes = "1000..16000", kind = "spread", bench_algo = "oblivious";
  auto* ben = app.add_subcommand("bench", "Probe counts and wall time against n (CSV)");
  ben->add_option("--n", sizes, "a..b (doubling) or a comma list");
  ben->add_option("--kind", kind)->check(CLI::IsMember({"spread", "pencil"}));
  ben->add_option("--algo", bench_algo)->check(CLI::IsMember({"oblivious", "baseline"}));
  add_seed(ben);

  std::size_t gen_n = 0;
  std::string gen_kind = "spread", gen_format = "points", output;
  SpreadRange range;
  auto* gn = app.add_subcommand("gen", "Generate an input set");
  gn->add_option("--kind", gen_kind)->check(CLI::IsMember({"spread", "pencil"}));
  gn->add_option("--n", gen_n)->required();
  gn->add_option("--format", gen_format)->check(CLI::IsMember({"points", "lines"}));
  gn->add_option("--output", output);
  gn->add_option("--m-min", range.m_min);
  gn->add_option("--m-max", range.m_max);
  gn->add_option("--b-min", range.b_min);
  gn->add_option("--b-max", range.b_max);
  add_seed(gn);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (*med) return median(input, format, emit, algo, seed, digest, out);
    if (*aud) {
      acfg.seed = seed;
      return audit(acfg, out);
    }
    if (*ben) return bench(parse_sizes(sizes), parse_kind(kind), bench_algo, seed, out);
    if (*gn) return gen(parse_kind(gen_kind), gen_n, seed, gen_format, range, output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}

}  // namespace oblivisel::cli
