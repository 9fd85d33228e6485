#include "oblivisel/baseline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oblivisel::baseline {

namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

std::uint64_t ceil_div(std::uint64_t x, std::uint64_t y) { return x / y + (x % y != 0); }

// Requested indices and where their intersections go.
struct Reporter {
  std::span<const std::uint64_t> k;
  TracedArray<Intersection>* out = nullptr;
  std::size_t next = 0;
  std::uint64_t counted = 0;
};

// Top-down merge sort of a[lo, hi) under `less`, counting inversions. Runs
// already in order are not merged. If a reporter is given, indices falling in
// a 0-element's range are resolved against the hi elements already emitted.
template <typename Less>
void merge_sort(TracedArray<Line>& a, TracedArray<Line>& tmp, std::size_t lo, std::size_t hi, const Less& less,
                Reporter& rep) {
  if (hi - lo < 2) return;
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  merge_sort(a, tmp, lo, mid, less, rep);
  merge_sort(a, tmp, mid, hi, less, rep);
  if (!less(a.get(mid), a.get(mid - 1))) return;
  std::size_t i = lo, j = mid, o = lo;
  while (i < mid || j < hi) {
    if (j < hi && (i == mid || less(a.get(j), a.get(i)))) {
      tmp.put(o++, a.get(j++));
      continue;
    }
    const Line x = a.get(i++);
    const std::uint64_t c = j - mid;
    while (rep.out && rep.next < rep.k.size() && rep.k[rep.next] < rep.counted + c) {
      const Line y = a.get(mid + (rep.k[rep.next] - rep.counted));
      rep.out->put(rep.next++, make_intersection(x, y));
    }
    rep.counted += c;
    tmp.put(o++, x);
  }
  for (std::size_t t = lo; t < hi; ++t) a.put(t, tmp.get(t));
}

template <typename Less>
void plain_sort(TracedArray<Line>& a, const Less& less) {
  TracedArray<Line> tmp(a.log(), a.size());
  Reporter none;
  merge_sort(a, tmp, 0, a.size(), less, none);
}

// Sorting intersections uses the same skip-ordered merge sort.
void sort_intersections(TracedArray<Intersection>& a) {
  TracedArray<Intersection> tmp(a.log(), a.size());
  const IntersectionLess less;
  for (std::size_t w = 1; w < a.size(); w *= 2) {
    for (std::size_t lo = 0; lo + w < a.size(); lo += 2 * w) {
      const std::size_t mid = lo + w, hi = std::min(a.size(), lo + 2 * w);
      if (!less(a.get(mid), a.get(mid - 1))) continue;
      std::size_t i = lo, j = mid, o = lo;
      while (i < mid || j < hi) tmp.put(o++, (j < hi && (i == mid || less(a.get(j), a.get(i)))) ? a.get(j++) : a.get(i++));
      for (std::size_t t = lo; t < hi; ++t) a.put(t, tmp.get(t));
    }
  }
}

TracedArray<Line> sorted_copy(TracedRange<Line> lines, const Boundary& a) {
  TracedArray<Line> p(lines.log(), lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) p.put(i, lines.get(i));
  plain_sort(p, LineOrder{a});
  return p;
}

}  // namespace

std::uint64_t int_count(TracedRange<Line> lines, const Boundary& a, const Boundary& b) {
  TracedArray<Line> p = sorted_copy(lines, a);
  TracedArray<Line> tmp(lines.log(), lines.size());
  Reporter rep;
  merge_sort(p, tmp, 0, p.size(), LineOrder{b}, rep);
  return rep.counted;
}

TracedArray<Intersection> int_collect(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                      std::span<const std::uint64_t> k) {
  TracedArray<Line> p = sorted_copy(lines, a);
  TracedArray<Line> tmp(lines.log(), lines.size());
  TracedArray<Intersection> out(lines.log(), k.size());
  Reporter rep{k, &out};
  merge_sort(p, tmp, 0, p.size(), LineOrder{b}, rep);
  if (rep.next != k.size()) throw std::out_of_range("index beyond range count");
  return out;
}

std::pair<Intersection, Intersection> int_selection_range(TracedRange<Line> lines, std::uint64_t k_lo,
                                                          std::uint64_t k_hi, SplitMix64& rng,
                                                          SelectionStats* stats) {
  const std::uint64_t n = lines.size();
  const std::uint64_t total = pairs_of(n);
  if (k_lo > k_hi || k_hi >= total) throw std::out_of_range("selection rank out of range");
  SelectionStats local;
  SelectionStats& st = stats ? *stats : local;
  st = {};
  const std::uint64_t w = ceil_sqrt(9 * n);
  const std::size_t cap = 4 * padded_iterations(n) + 64;
  Boundary a = Boundary::neg_inf(), b = Boundary::pos_inf();
  std::uint64_t window = total, offset = 0;
  while (n >= 64 && window > n && st.iterations < cap) {
    ++st.iterations;
    std::vector<std::uint64_t> k(n);
    for (auto& i : k) i = rng.below(window);
    std::sort(k.begin(), k.end());
    TracedArray<Intersection> sample = int_collect(lines, a, b, k);
    sort_intersections(sample);
    const std::uint64_t j_lo = ceil_div(n * (k_lo - offset + 1), window) - 1;
    const std::uint64_t j_hi = ceil_div(n * (k_hi - offset + 1), window) - 1;
    const Boundary a2 = Boundary::at(sample.get(j_lo > w ? j_lo - w : 0));
    const Boundary b2 = Boundary::at(sample.get(std::min(n - 1, j_hi + w)));
    const std::uint64_t m_a = int_count(lines, Boundary::neg_inf(), a2);
    const std::uint64_t m_b = int_count(lines, Boundary::neg_inf(), b2);
    const i128 spread = i128{m_b} - i128{m_a};
    if (m_a <= k_lo && k_hi < m_b && spread * spread * n <= i128{121} * window * window) {
      a = a2;
      b = b2;
      window = m_b - m_a;
      offset = m_a;
      ++st.accepted;
    }
  }
  st.fallback = window > n && n >= 64;
  std::vector<std::uint64_t> k(window);
  std::iota(k.begin(), k.end(), std::uint64_t{0});
  TracedArray<Intersection> rest = int_collect(lines, a, b, k);
  sort_intersections(rest);
  return {rest.get(k_lo - offset), rest.get(k_hi - offset)};
}

SlopeResult median_slope(TraceLog& log, std::span<const Point> points, SplitMix64& rng, SelectionStats* stats) {
  if (points.size() < 2) throw std::invalid_argument("median slope needs at least two points");
  TracedArray<Line> raw = alloc_from(log, dualize(points));
  Preprocessed pre = preprocess(raw);
  const std::uint64_t total = pairs_of(points.size());
  const std::uint64_t v = pre.virtual_pairs;
  const std::uint64_t real = total - v;
  if (real == 0) throw std::domain_error("no pair of points with distinct x-coordinates");
  const std::uint64_t hi = total / 2;
  const std::uint64_t lo = total == 1 ? 0 : hi - 1;
  const auto [x_lo, x_hi] = int_selection_range(pre.lines, lo, hi, rng, stats);
  std::vector<Intersection> used;
  if (real % 2 == 1) {
    used.push_back(v % 2 == 0 ? x_hi : x_lo);
  } else {
    used = {x_lo, x_hi};
  }
  const Rational value =
      used.size() == 1 ? unperturbed_x(used[0]) : midpoint(unperturbed_x(used[0]), unperturbed_x(used[1]));
  return {value, used};
}

}  // namespace oblivisel::baseline
