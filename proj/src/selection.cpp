#include "oblivisel/selection.hpp"

#include <algorithm>
#include <stdexcept>

#include "oblivisel/int_collect.hpp"
#include "oblivisel/inversion_counting.hpp"
#include "oblivisel/oblivious_primitives.hpp"

namespace oblivisel {

namespace {

struct PreItem {
  Line line;
  std::uint32_t pos;
  std::uint32_t rank_in_class;
};

struct ByOffset {
  bool operator()(const PreItem& x, const PreItem& y) const {
    if (x.line.b != y.line.b) return x.line.b < y.line.b;
    if (x.line.m != y.line.m) return x.line.m < y.line.m;
    return x.pos < y.pos;
  }
};

struct BySlopeThenIdx {
  bool operator()(const PreItem& x, const PreItem& y) const {
    return x.line.m != y.line.m ? x.line.m < y.line.m : x.line.idx < y.line.idx;
  }
};

struct ByPosition {
  bool operator()(const PreItem& x, const PreItem& y) const { return x.pos < y.pos; }
};

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

std::uint64_t ceil_div(std::uint64_t x, std::uint64_t y) { return x / y + (x % y != 0); }

// Ranks of the dedupled sequence are picked in one scan; equal neighbours are
// copies of one intersection.
std::vector<Intersection> pick_distinct_ranks(TracedArray<Intersection>& sorted, std::span<const std::uint64_t> ranks) {
  std::vector<Intersection> out(ranks.size());
  std::uint64_t r = 0;
  Intersection prev{};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Intersection x = sorted.get(i);
    if (i > 0 && !(x == prev)) ++r;
    for (std::size_t t = 0; t < ranks.size(); ++t) {
      if (ranks[t] == r) out[t] = x;
    }
    prev = x;
  }
  return out;
}

std::pair<Intersection, Intersection> enumerate_and_pick(TracedRange<Line> lines, const Boundary& a,
                                                         const Boundary& b, std::uint64_t k_lo, std::uint64_t k_hi) {
  TracedArray<Intersection> all = int_enumeration(lines, a, b);
  const std::size_t ranks[] = {static_cast<std::size_t>(k_lo), static_cast<std::size_t>(k_hi)};
  const auto got = select_concealed(all, std::span<const std::size_t>(ranks), IntersectionLess{});
  return {got[0], got[1]};
}

}  // namespace

Preprocessed preprocess(TracedRange<Line> raw) {
  const std::size_t n = raw.size();
  if (n < 2) throw std::invalid_argument("preprocess needs at least two lines");
  if (n > UINT32_MAX) throw std::length_error("too many lines");
  TraceLog& log = raw.log();
  TracedArray<PreItem> w(log, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Line l = raw.get(i);
    check_coordinate(l.m);
    check_coordinate(l.b);
    w.put(i, PreItem{l, static_cast<std::uint32_t>(i), 0});
  }

  sort(w, ByOffset{});
  for (std::size_t i = 0; i < n; ++i) {
    PreItem e = w.get(i);
    e.line.idx = static_cast<std::uint32_t>(i);
    w.put(i, e);
  }

  sort(w, BySlopeThenIdx{});
  std::int64_t prev_m = 0;
  std::uint32_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    PreItem e = w.get(i);
    j = (i > 0 && e.line.m == prev_m) ? j + 1 : 0;
    e.rank_in_class = j;
    prev_m = e.line.m;
    w.put(i, e);
  }

  // Backwards: t = members of the class above this line. A pair lies at the
  // right end iff its higher-index line has s = -1, so a line at class
  // position j with s = -1 sends j pairs right. Sides follow A B B A A B B A
  // from the top of the class; for classes with an odd pair count the meaning
  // of side A alternates between classes.
  Preprocessed out;
  bool toggle = true;
  bool a_is_right = true;
  std::uint32_t t = 0;
  for (std::size_t r = n; r-- > 0;) {
    PreItem e = w.get(r);
    t = (r + 1 < n && e.line.m == prev_m) ? t + 1 : 0;
    prev_m = e.line.m;
    const std::uint64_t c = std::uint64_t{e.rank_in_class} + t + 1;
    if (t == 0) {
      const bool odd = pairs_of(c) % 2 == 1;
      a_is_right = odd ? toggle : true;
      toggle = odd ? !toggle : toggle;
      out.virtual_pairs += pairs_of(c);
    }
    const bool side_a = t % 4 == 0 || t % 4 == 3;
    const bool right = side_a == a_is_right;
    e.line.s = right ? -1 : 1;
    out.virtual_right += right ? e.rank_in_class : 0;
    w.put(r, e);
  }
  out.virtual_left = out.virtual_pairs - out.virtual_right;
  if (out.virtual_left != out.virtual_pairs / 2) throw std::logic_error("unbalanced virtual intersections");

  sort(w, ByPosition{});
  out.lines = TracedArray<Line>(log, n);
  for (std::size_t i = 0; i < n; ++i) out.lines.put(i, w.get(i).line);
  return out;
}

std::uint64_t ceil_sqrt(std::uint64_t x) {
  std::uint64_t r = 0;
  for (std::uint64_t bit = std::uint64_t{1} << 31; bit > 0; bit >>= 1) {
    const std::uint64_t c = r | bit;
    if (c * c <= x) r = c;
  }
  return r * r == x ? r : r + 1;
}

std::size_t padded_iterations(std::size_t n) {
  if (n < 2) return 0;
  const std::uint64_t w = ceil_sqrt(9 * std::uint64_t{n});
  const std::uint64_t mid = n / 2;
  const std::uint64_t span = std::min<std::uint64_t>(n - 1, mid + w) - (mid > w ? mid - w : 0);
  std::uint64_t big = pairs_of(n);
  std::size_t e = 0;
  while (big > n && e < 64) {
    big = ceil_div(big * span, n);
    ++e;
  }
  return e + ceil_div(e, 2) + 1;
}

std::pair<Intersection, Intersection> int_selection_range(TracedRange<Line> lines, std::uint64_t k_lo,
                                                          std::uint64_t k_hi, SplitMix64& rng,
                                                          const SelectionOptions& options, SelectionStats* stats) {
  const std::uint64_t n = lines.size();
  const std::uint64_t total = pairs_of(n);
  if (k_lo > k_hi || k_hi >= total) throw std::out_of_range("selection rank out of range");
  SelectionStats local;
  SelectionStats& st = stats ? *stats : local;
  st = {};

  if (n < options.direct_below || total <= n) {
    return enumerate_and_pick(lines, Boundary::neg_inf(), Boundary::pos_inf(), k_lo, k_hi);
  }

  const std::size_t planned = options.iterations.value_or(padded_iterations(n));
  const std::size_t cap = 4 * planned + 64;
  const std::uint64_t w = ceil_sqrt(9 * n);
  Boundary a = Boundary::neg_inf(), b = Boundary::pos_inf();
  std::uint64_t window = total, offset = 0;

  std::size_t it = 0;
  for (; it < planned || window > n; ++it) {
    if (it == cap) {
      st.fallback = true;
      st.iterations = it;
      const auto [x, y] = enumerate_and_pick(lines, a, b, k_lo - offset, k_hi - offset);
      return {x, y};
    }
    // j = ceil(n (k - N' + 1) / N) - 1.
    const std::uint64_t j_lo = ceil_div(n * (k_lo - offset + 1), window) - 1;
    const std::uint64_t j_hi = ceil_div(n * (k_hi - offset + 1), window) - 1;
    const std::size_t ranks[] = {static_cast<std::size_t>(j_lo > w ? j_lo - w : 0),
                                 static_cast<std::size_t>(std::min(n - 1, j_hi + w))};

    TracedArray<Intersection> sample = int_sample(lines, a, b, n, rng);
    const auto cand = select_concealed(sample, std::span<const std::size_t>(ranks), IntersectionLess{});
    const Boundary a2 = Boundary::at(cand[0]), b2 = Boundary::at(cand[1]);
    const std::uint64_t m_a = int_count(lines, Boundary::neg_inf(), a2);
    const std::uint64_t m_b = int_count(lines, Boundary::neg_inf(), b2);
    const i128 spread = i128{m_b} - i128{m_a};
    const bool accept = m_a <= k_lo && k_hi < m_b && spread * spread * n <= i128{121} * window * window;
    if (accept) {
      a = a2;
      b = b2;
      window = m_b - m_a;
      offset = m_a;
      ++st.accepted;
    }
    if (options.observer) options.observer(IterationRecord{it, window, offset, accept, a, b});
  }
  st.iterations = it;

  // Request n indices so the final call has the same shape for every input;
  // indices past the window repeat its last one.
  std::vector<std::uint64_t> k(n);
  for (std::uint64_t i = 0; i < n; ++i) k[i] = std::min(i, window - 1);
  TracedArray<Intersection> rest = int_collect(lines, a, b, k);
  sort(rest, IntersectionLess{});
  const std::uint64_t want[] = {k_lo - offset, k_hi - offset};
  const auto got = pick_distinct_ranks(rest, want);
  return {got[0], got[1]};
}

Intersection int_selection(TracedRange<Line> lines, std::uint64_t k, SplitMix64& rng, const SelectionOptions& options,
                           SelectionStats* stats) {
  return int_selection_range(lines, k, k, rng, options, stats).first;
}

SlopeResult median_slope(TraceLog& log, std::span<const Point> points, SplitMix64& rng,
                         const SelectionOptions& options, SelectionStats* stats) {
  if (points.size() < 2) throw std::invalid_argument("median slope needs at least two points");
  const std::vector<Line> dual = dualize(points);
  TracedArray<Line> raw = alloc_from(log, dual);
  Preprocessed pre = preprocess(raw);

  const std::uint64_t total = pairs_of(points.size());
  const std::uint64_t v = pre.virtual_pairs;
  const std::uint64_t real = total - v;
  if (real == 0) throw std::domain_error("no pair of points with distinct x-coordinates");

  const std::uint64_t hi = total / 2;
  const std::uint64_t lo = total == 1 ? 0 : hi - 1;
  const auto [x_lo, x_hi] = int_selection_range(pre.lines, lo, hi, rng, options, stats);

  // Real intersections occupy ranks [v_left, v_left + real) with v_left = floor(v/2).
  std::vector<Intersection> used;
  if (real % 2 == 1) {
    used.push_back(v % 2 == 0 ? x_hi : x_lo);
  } else {
    used = {x_lo, x_hi};
  }
  for (const auto& p : used) {
    if (is_virtual(p)) throw std::logic_error("median rank landed on a virtual intersection");
  }
  const Rational value =
      used.size() == 1 ? unperturbed_x(used[0]) : midpoint(unperturbed_x(used[0]), unperturbed_x(used[1]));
  return {value, used};
}

}  // namespace oblivisel
