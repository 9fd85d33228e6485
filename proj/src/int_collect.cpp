#include "oblivisel/int_collect.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oblivisel/inversion_counting.hpp"
#include "oblivisel/oblivious_primitives.hpp"

namespace oblivisel {

namespace {

constexpr std::uint64_t kUnmatched = std::numeric_limits<std::uint64_t>::max();

struct ByLine {
  LineOrder order;
  bool operator()(const LabeledLine& x, const LabeledLine& y) const { return order(x.line, y.line); }
};

struct ByKey0 {
  bool operator()(const CollectItem& x, const CollectItem& y) const { return x.key0 < y.key0; }
};

struct ByKey1 {
  bool operator()(const CollectItem& x, const CollectItem& y) const { return x.key1 < y.key1; }
};

}  // namespace

void determine_line_indices(TracedArray<LabeledLine>& lines, std::uint64_t& inversions, unsigned l,
                            const Boundary& b) {
  TracedRange<LabeledLine> all(lines);
  std::uint64_t ones = 0;
  for_each_layer_pair(lines.size(), l, [&](const LayerPair& p) {
    TracedRange<LabeledLine> r = all.sub(p.begin, p.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
      LabeledLine x = r.get(t);
      x.blk = static_cast<std::uint32_t>(p.index);
      x.half = t < p.lo ? 0 : 1;
      r.put(t, x);
    }
    merge_in_place(r, p.lo, ByLine{LineOrder{b}});
    std::uint64_t c = 0;
    for (std::size_t t = 0; t < r.size(); ++t) {
      LabeledLine x = r.get(t);
      const bool hi = x.half != 0;
      x.idx0 = inversions;
      x.idx1 = hi ? ones : c;
      inversions += hi ? 0 : c;
      c += hi ? 1 : 0;
      ones += hi ? 1 : 0;
      r.put(t, x);
    }
  });
}

TracedArray<CollectItem> make_tokens(TraceLog& log, std::span<const std::uint64_t> k) {
  TracedArray<CollectItem> tokens(log, k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    CollectItem e;
    e.is_token = 1;
    e.key0 = 2 * k[i] + 1;
    e.key1 = kUnmatched;
    tokens.put(i, e);
  }
  return tokens;
}

TracedArray<CollectItem> match_against_lines(TracedArray<LabeledLine>& lines, TracedArray<CollectItem>& tokens,
                                             unsigned l) {
  const std::size_t n = lines.size();
  TracedArray<CollectItem> x(lines.log(), n + tokens.size());
  for (std::size_t t = 0; t < n; ++t) {
    const LabeledLine ll = lines.get(t);
    CollectItem e;
    e.line0 = ll.line;
    e.key0 = 2 * ll.idx0;
    e.key1 = 2 * ll.idx1;
    e.blk = ll.blk;
    e.half = ll.half;
    x.put(t, e);
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    CollectItem e = tokens.get(t);
    e.has0 = e.has1 = 0;
    e.key1 = kUnmatched;
    x.put(n + t, e);
  }
  merge_in_place(x, n, ByKey0{});

  const std::uint64_t w = std::uint64_t{1} << l;
  // Last 0-line inducing intersections in this layer; starts as the sentinel.
  CollectItem zero;
  for (std::size_t t = 0; t < x.size(); ++t) {
    CollectItem e = x.get(t);
    if (!e.is_token) {
      if (e.half == 0 && e.key1 > 0) zero = e;
    } else if (e.key0 < zero.key0 + zero.key1) {
      e.line0 = zero.line0;
      e.blk = zero.blk;
      e.has0 = 1;
      e.key1 = 2 * (zero.blk * w + (e.key0 - zero.key0) / 2) + 1;
    }
    x.put(t, e);
  }

  sort(x, ByKey1{});
  CollectItem one;
  for (std::size_t t = 0; t < x.size(); ++t) {
    CollectItem e = x.get(t);
    if (!e.is_token) {
      if (e.half == 1) {
        one = e;
        one.has1 = 1;
      }
    } else if (e.has0 && one.has1 && e.key1 == one.key1 + 1) {
      e.line1 = one.line0;
      e.has1 = 1;
    }
    x.put(t, e);
  }
  return x;
}

void store_intersections(TracedArray<CollectItem>& x, TracedArray<Intersection>& out, std::size_t& stored) {
  const std::size_t delta = filter(x, [](const CollectItem& e) { return e.is_token && e.has0; });
  if (stored + delta > out.size()) throw std::logic_error("more intersections matched than requested");
  append(TracedRange<Intersection>(out), TracedRange<CollectItem>(x), stored, delta, [](const CollectItem& e) {
    if (!(e.is_token && e.has0 && e.has1)) return Intersection{};
    return make_intersection(e.line0, e.line1);
  });
  stored += delta;
}

TracedArray<Intersection> int_collect(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                      std::span<const std::uint64_t> k) {
  if (k.empty()) throw std::invalid_argument("int_collect needs at least one index");
  if (compare_boundary(a, b) >= 0) throw std::invalid_argument("int_collect needs a < b");
  if (!std::is_sorted(k.begin(), k.end())) throw std::invalid_argument("int_collect indices must be ascending");

  TraceLog& log = lines.log();
  TracedArray<LabeledLine> p(log, lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    LabeledLine ll;
    ll.line = lines.get(i);
    p.put(i, ll);
  }
  sort(p, ByLine{LineOrder{a}});

  TracedArray<CollectItem> tokens = make_tokens(log, k);
  TracedArray<Intersection> out(log, k.size());
  std::size_t stored = 0;
  std::uint64_t total = 0;
  for (unsigned l = 0; l < layer_count(lines.size()); ++l) {
    determine_line_indices(p, total, l, b);
    TracedArray<CollectItem> x = match_against_lines(p, tokens, l);
    store_intersections(x, out, stored);
  }
  if (k.back() >= total) throw std::out_of_range("int_collect index beyond range count");
  if (stored != k.size()) throw std::logic_error("int_collect matched the wrong number of indices");
  return out;
}

TracedArray<Intersection> int_sample(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                     std::size_t count, SplitMix64& rng) {
  const std::uint64_t total = int_count(lines, a, b);
  if (total == 0) throw std::invalid_argument("int_sample on an empty range");
  std::vector<std::uint64_t> k(count);
  for (auto& i : k) i = rng.below(total);
  std::sort(k.begin(), k.end());
  return int_collect(lines, a, b, k);
}

TracedArray<Intersection> int_enumeration(TracedRange<Line> lines, const Boundary& a, const Boundary& b) {
  const std::uint64_t total = int_count(lines, a, b);
  if (total == 0) return TracedArray<Intersection>(lines.log(), 0);
  std::vector<std::uint64_t> k(total);
  std::iota(k.begin(), k.end(), std::uint64_t{0});
  return int_collect(lines, a, b, k);
}

}  // namespace oblivisel
