// Acceptance checks; one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oblivisel/baseline.hpp"
#include "oblivisel/generate.hpp"
#include "oblivisel/int_collect.hpp"
#include "oblivisel/inversion_counting.hpp"
#include "oblivisel/oblivious_primitives.hpp"
#include "oblivisel/oracle.hpp"
#include "oblivisel/selection.hpp"
#include "test_support.hpp"

using namespace oblivisel;

namespace {

struct Check {
  std::ostringstream detail;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (cond || !ok) {
      ok = ok && cond;
      return;
    }
    ok = false;
    detail << " first failure: " << what;
  }
};

std::string pairs_key(const Intersection& p) {
  return std::to_string(std::min(p.up.idx, p.down.idx)) + "/" + std::to_string(std::max(p.up.idx, p.down.idx));
}

// 1
void median_vs_oracle(Check& c) {
  std::mt19937_64 rng(101);
  const test::PointClass kinds[] = {test::PointClass::Generic, test::PointClass::DuplicateX,
                                    test::PointClass::ParallelDual, test::PointClass::Duplicated,
                                    test::PointClass::Pencil};
  SelectionOptions forced;
  forced.direct_below = 0;
  forced.iterations = 3;
  std::size_t runs = 0;
  for (auto kind : kinds) {
    for (int rep = 0; rep < 500; ++rep) {
      std::size_t n = 2 + rep % 39;
      auto pts = test::class_points(rng, kind, n);
      // Small parallel-dual sets can put every point on one vertical line.
      for (int tries = 1; !test::has_finite_slope(pts); ++tries) pts = test::class_points(rng, kind, tries > 20 ? ++n : n);
      const Rational want = oracle::theil_sen_median(pts).value;
      TraceLog log(TraceLog::Mode::Count);
      SplitMix64 r(rep);
      c.expect(median_slope(log, pts, r).value == want, "median n=" + std::to_string(n));
      c.expect(median_slope(log, pts, r, forced).value == want, "median (search loop) n=" + std::to_string(n));
      runs += 2;
    }
  }
  c.detail << runs << " runs over 5 input classes, n in [2, 40]";
}

// 2
void selection_every_rank(Check& c) {
  std::mt19937_64 rng(202);
  SelectionOptions forced;
  forced.direct_below = 0;
  forced.iterations = 2;
  std::size_t runs = 0;
  for (std::size_t n = 4; n <= 20; ++n) {
    const auto lines = test::random_lines(rng, n, 5);
    const auto sorted = oracle::all_intersections(lines);
    TraceLog log(TraceLog::Mode::Count);
    auto traced = alloc_from(log, lines);
    for (std::uint64_t k = 0; k < sorted.size(); ++k) {
      SplitMix64 r(k);
      c.expect(int_selection(traced, k, r) == sorted[k], "n=" + std::to_string(n) + " k=" + std::to_string(k));
      c.expect(int_selection(traced, k, r, forced) == sorted[k],
               "search loop n=" + std::to_string(n) + " k=" + std::to_string(k));
      runs += 2;
    }
  }
  c.detail << runs << " selections, every rank for n in [4, 20]";
}

// 3
void counting_vs_brute(Check& c) {
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng() % 11;
    const auto lines = test::random_lines(rng, n, 4);
    const auto bs = test::boundaries(lines);
    Boundary a = bs[rng() % bs.size()], b = bs[rng() % bs.size()];
    if (compare_boundary(a, b) > 0) std::swap(a, b);
    TraceLog log(TraceLog::Mode::Count);
    auto traced = alloc_from(log, lines);
    c.expect(int_count(traced, a, b) == oracle::count_range(lines, a, b), "int_count n=" + std::to_string(n));
  }
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + rng() % 64;
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(rng() % 10);
    const auto less = [](int x, int y) { return x < y; };
    TraceLog log(TraceLog::Mode::Count);
    auto traced = alloc_from(log, v);
    c.expect(inversions(traced, less) == oracle::brute_inversions(std::span<const int>(v), less),
             "inversions n=" + std::to_string(n));
  }
  c.detail << "1000 int_count cases (n <= 12), 500 inversion counts (n <= 64)";
}

// 4
void worked_example(Check& c) {
  TraceLog log;
  const auto lines = test::table_lines();
  const Boundary a = test::table_a(lines), b = Boundary::pos_inf();
  TracedArray<LabeledLine> p(log, lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) p.put(i, LabeledLine{lines[i]});
  const LineOrder at_a{a};
  sort(p, [&](const LabeledLine& x, const LabeledLine& y) { return at_a(x.line, y.line); });
  std::vector<std::int64_t> start;
  for (const auto& ll : p.peek()) start.push_back(ll.line.m);
  c.expect(start == std::vector<std::int64_t>{6, 0, 5, 1, 7, 4, 2, 3}, "initial order");

  std::uint64_t inv = 0;
  determine_line_indices(p, inv, 0, b);
  c.expect(inv == 3, "layer 0 count");
  determine_line_indices(p, inv, 1, b);
  c.expect(inv == 9, "layer 1 count");
  std::vector<std::int64_t> order, halves, idx1;
  std::map<std::int64_t, std::uint64_t> idx0;
  for (const auto& ll : p.peek()) {
    order.push_back(ll.line.m);
    halves.push_back(ll.half);
    idx1.push_back(static_cast<std::int64_t>(ll.idx1));
    if (ll.half == 0) idx0[ll.line.m] = ll.idx0;
  }
  c.expect(order == std::vector<std::int64_t>{0, 1, 5, 6, 2, 3, 4, 7}, "layer 1 order");
  c.expect(halves == std::vector<std::int64_t>{0, 1, 1, 0, 1, 1, 0, 0}, "layer 1 halves");
  c.expect(idx1 == std::vector<std::int64_t>{0, 0, 1, 2, 2, 3, 2, 2}, "layer 1 line counters");
  c.expect(idx0 == std::map<std::int64_t, std::uint64_t>{{0, 3}, {6, 3}, {4, 5}, {7, 7}}, "layer 1 0-indices");

  std::vector<std::uint64_t> k{3, 4, 5, 6, 7, 8};
  auto tokens = make_tokens(log, k);
  auto x = match_against_lines(p, tokens, 1);
  std::map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> matched;
  for (const auto& e : x.peek())
    if (e.is_token && e.has0 && e.has1) matched[(e.key0 - 1) / 2] = {e.line0.m, e.line1.m};
  c.expect(matched == std::map<std::uint64_t, std::pair<std::int64_t, std::int64_t>>{
                          {3, {6, 1}}, {4, {6, 5}}, {5, {4, 2}}, {6, {4, 3}}, {7, {7, 2}}, {8, {7, 3}}},
           "layer 1 token matches");
  c.detail << "8-line example: orders, labels and matched pairs of indices 3..8";
}

// 5
void fingerprints(Check& c) {
  const char* targets[] = {"sort", "merge", "select", "filter", "append", "inversions",
                           "int_count", "int_collect", "int_sample", "median"};
  std::size_t audits = 0;
  for (std::size_t n : {8, 16, 33, 100}) {
    for (const char* t : targets) {
      std::ostringstream out, err;
      const int code = cli::run({"audit", "--target", t, "--n", std::to_string(n), "--cases", "10", "--seed", "5"},
                                out, err);
      c.expect(code == 0, std::string("audit ") + t + " n=" + std::to_string(n));
      ++audits;
    }
  }
  const std::size_t n = 100;
  auto run = [&](InputKind kind, bool oblivious) {
    TraceLog log(TraceLog::Mode::Digest);
    SplitMix64 rng(9);
    const auto pts = to_points(generate_lines(kind, n, 9));
    if (oblivious) {
      median_slope(log, pts, rng);
    } else {
      baseline::median_slope(log, pts, rng);
    }
    return log.fingerprint();
  };
  c.expect(run(InputKind::Spread, true) == run(InputKind::Pencil, true), "oblivious spread vs pencil");
  c.expect(!(run(InputKind::Spread, false) == run(InputKind::Pencil, false)), "baseline spread vs pencil");
  c.detail << audits << " audits of 10 cases; spread vs pencil: oblivious equal, baseline differ";
}

// 6
void complexity(Check& c) {
  std::vector<double> n_vals, probes;
  for (std::size_t n : {1000, 2000, 4000, 8000}) {
    TraceLog log(TraceLog::Mode::Count);
    SplitMix64 rng(n);
    const auto pts = to_points(generate_lines(InputKind::Spread, n, n));
    median_slope(log, pts, rng);
    n_vals.push_back(static_cast<double>(n));
    probes.push_back(static_cast<double>(log.probe_count()));
  }
  // Least squares c in probes = c n log^3 n.
  double num = 0, den = 0;
  std::vector<double> model;
  for (std::size_t i = 0; i < n_vals.size(); ++i) {
    const double f = n_vals[i] * std::pow(std::log2(n_vals[i]), 3);
    model.push_back(f);
    num += f * probes[i];
    den += f * f;
  }
  const double coef = num / den;
  double worst = 0;
  for (std::size_t i = 0; i < model.size(); ++i) worst = std::max(worst, std::abs(probes[i] / (coef * model[i]) - 1));
  c.expect(worst <= 0.25, "probe fit deviation " + std::to_string(worst));

  const std::size_t big = 30000;
  const auto pts = to_points(generate_lines(InputKind::Spread, big, 1));
  TraceLog log(TraceLog::Mode::Count);
  SplitMix64 rng(1);
  const auto start = std::chrono::steady_clock::now();
  median_slope(log, pts, rng);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 120, "n=30000 took " + std::to_string(secs) + " s");
  c.detail << "c=" << coef << " max deviation " << std::round(worst * 1000) / 10 << "%; n=30000 in "
           << std::round(secs * 10) / 10 << " s";
}

// 7
void order_theory(Check& c) {
  std::mt19937_64 rng(707);
  std::size_t sets = 0;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 6; ++rep, ++sets) {
      const auto lines = test::random_lines(rng, n, rep % 2 ? 1 : 3);
      const auto bs = test::boundaries(lines);
      for (const auto& p : bs) {
        for (const auto& q : bs) {
          const auto pq = compare_boundary(p, q);
          c.expect((pq < 0) == (compare_boundary(q, p) > 0), "antisymmetry");
          for (const auto& r : bs)
            if (pq <= 0 && compare_boundary(q, r) <= 0) c.expect(compare_boundary(p, r) <= 0, "transitivity");
        }
        for (const auto& x : lines)
          for (const auto& y : lines) {
            c.expect(line_le(p, x, y) || line_le(p, y, x), "line order totality");
            if (!same_line(x, y)) c.expect(line_le(p, x, y) != line_le(p, y, x), "line order antisymmetry");
            for (const auto& z : lines)
              if (line_le(p, x, y) && line_le(p, y, z)) c.expect(line_le(p, x, z), "line order transitivity");
          }
      }
      for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = i + 1; j < bs.size(); ++j) c.expect(compare_boundary(bs[i], bs[j]) != 0, "distinctness");
      for (const auto& a : bs)
        for (const auto& b : bs) {
          if (compare_boundary(a, b) > 0) continue;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
              const bool flipped = line_le(a, lines[i], lines[j]) != line_le(b, lines[i], lines[j]);
              const auto p = Boundary::at(make_intersection(lines[i], lines[j]));
              c.expect(flipped == (compare_boundary(a, p) <= 0 && compare_boundary(p, b) < 0), "flip range");
            }
        }
    }
  }
  // Three lines: the steepest/shallowest pair is the middle intersection.
  for (int rep = 0; rep < 10000; ++rep) {
    auto l = test::random_lines(rng, 3, rep % 3 == 0 ? 1 : 4);
    if (rep % 5 == 0) l[1].b = l[0].b, l[2].b = l[0].b;
    std::sort(l.begin(), l.end(), [](const Line& x, const Line& y) { return compare_slope(x, y) < 0; });
    std::vector<Intersection> ps{make_intersection(l[0], l[1]), make_intersection(l[0], l[2]),
                                 make_intersection(l[1], l[2])};
    std::sort(ps.begin(), ps.end(), IntersectionLess{});
    c.expect(ps[1] == make_intersection(l[0], l[2]), "three-line middle " + pairs_key(ps[1]));
  }
  c.detail << sets << " line sets with n <= 8 checked exhaustively; 10000 line triples";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"median equals the oracle", median_vs_oracle},
      {"selection of every rank", selection_every_rank},
      {"inversion and intersection counts", counting_vs_brute},
      {"worked index-assignment example", worked_example},
      {"trace fingerprints depend on sizes only", fingerprints},
      {"probe growth and wall time", complexity},
      {"order relations", order_theory},
  };
  int failed = 0;
  int id = 1;
  for (const auto& [name, fn] : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok ? "PASS " : "FAIL ") << id++ << ". " << name << ": " << c.detail.str() << " ["
              << std::round(secs * 10) / 10 << " s]" << std::endl;
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
