#pragma once

#include <cstddef>
#include <cstdint>

#include "oblivisel/exact_arith.hpp"
#include "oblivisel/oblivious_primitives.hpp"
#include "oblivisel/traced_memory.hpp"

namespace oblivisel {

/// ceil(log2 n): number of bottom-up merge layers over n elements.
inline unsigned layer_count(std::size_t n) {
  unsigned l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

/// Adjacent blocks merged by pair i of layer l: lo = [begin, begin + lo),
/// hi = [begin + lo, begin + lo + hi), both clipped to n.
struct LayerPair {
  std::size_t index;
  std::size_t begin;
  std::size_t lo;
  std::size_t hi;

  std::size_t size() const { return lo + hi; }
};

template <typename F>
void for_each_layer_pair(std::size_t n, unsigned l, F&& f) {
  const std::size_t w = std::size_t{1} << l;
  for (std::size_t i = 0; 2 * i * w < n; ++i) {
    const std::size_t begin = 2 * i * w;
    const std::size_t lo = std::min(w, n - begin);
    const std::size_t hi = std::min(w, n - begin - lo);
    f(LayerPair{i, begin, lo, hi});
  }
}

template <typename T>
struct Labeled {
  T value;
  std::uint8_t half;
};

template <typename Less>
struct OnValue {
  Less less;

  template <typename T>
  bool operator()(const Labeled<T>& x, const Labeled<T>& y) const {
    if (less(x.value, y.value)) return true;
    // Equal values: lower half first, so ties never count.
    return !less(y.value, x.value) && x.half < y.half;
  }
};

/// Labels the halves, merges them and counts cross pairs out of order by one
/// scan. Probes depend on (pair.lo, pair.hi) only.
template <typename T, typename Less>
std::uint64_t count_pair_inversions(TracedRange<Labeled<T>> a, const LayerPair& pair, const Less& less) {
  TracedRange<Labeled<T>> r = a.sub(pair.begin, pair.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    Labeled<T> x = r.get(t);
    x.half = t < pair.lo ? 0 : 1;
    r.put(t, x);
  }
  merge_in_place(r, pair.lo, OnValue<Less>{less});
  std::uint64_t inv = 0, c = 0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const bool hi = r.get(t).half != 0;
    inv += hi ? 0 : c;
    c += hi ? 1 : 0;
  }
  return inv;
}

/// Bottom-up merge-based inversion count; sorts `a` under `less` as a side
/// effect. leak = |A|.
template <typename T, typename Less>
std::uint64_t count_inversions_labeled(TracedRange<Labeled<T>> a, const Less& less) {
  std::uint64_t total = 0;
  for (unsigned l = 0; l < layer_count(a.size()); ++l) {
    for_each_layer_pair(a.size(), l, [&](const LayerPair& p) { total += count_pair_inversions(a, p, less); });
  }
  return total;
}

template <typename T>
TracedArray<Labeled<T>> wrap_labeled(TracedRange<T> a) {
  TracedArray<Labeled<T>> out(a.log(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.put(i, Labeled<T>{a.get(i), 0});
  return out;
}

template <typename T, typename Less>
std::uint64_t inversions(TracedRange<T> a, const Less& less) {
  TracedArray<Labeled<T>> w = wrap_labeled(a);
  const std::uint64_t total = count_inversions_labeled(TracedRange<Labeled<T>>(w), less);
  for (std::size_t i = 0; i < a.size(); ++i) a.put(i, w.get(i).value);
  return total;
}

template <typename T, typename Less>
std::uint64_t inversions(TracedArray<T>& a, const Less& less) {
  return inversions(TracedRange<T>(a), less);
}

/// Merged array of two sorted runs and the number of pairs (x in lo, y in hi)
/// with y before x. leak = (|A_lo|, |A_hi|).
template <typename T, typename Less>
std::pair<TracedArray<T>, std::uint64_t> bi_inversions(TracedRange<T> lo, TracedRange<T> hi, const Less& less) {
  TracedArray<Labeled<T>> w(lo.log(), lo.size() + hi.size());
  for (std::size_t i = 0; i < lo.size(); ++i) w.put(i, Labeled<T>{lo.get(i), 0});
  for (std::size_t i = 0; i < hi.size(); ++i) w.put(lo.size() + i, Labeled<T>{hi.get(i), 0});
  const std::uint64_t inv =
      count_pair_inversions(TracedRange<Labeled<T>>(w), LayerPair{0, 0, lo.size(), hi.size()}, less);
  TracedArray<T> out(lo.log(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.put(i, w.get(i).value);
  return {std::move(out), inv};
}

template <typename T, typename Less>
std::pair<TracedArray<T>, std::uint64_t> bi_inversions(TracedArray<T>& lo, TracedArray<T>& hi, const Less& less) {
  return bi_inversions(TracedRange<T>(lo), TracedRange<T>(hi), less);
}

/// Number of intersections p with a ⪯ p ≺ b. leak = |lines|.
std::uint64_t int_count(TracedRange<Line> lines, const Boundary& a, const Boundary& b);

inline std::uint64_t int_count(TracedArray<Line>& lines, const Boundary& a, const Boundary& b) {
  return int_count(TracedRange<Line>(lines), a, b);
}

}  // namespace oblivisel
