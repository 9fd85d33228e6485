#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oblivisel/traced_memory.hpp"

namespace oblivisel {

/// Reads both cells, writes both cells; min ends at i, max at j under `less`.
template <typename T, typename Less>
void compare_exchange(TracedRange<T> a, std::size_t i, std::size_t j, const Less& less) {
  const T x = a.get(i);
  const T y = a.get(j);
  const bool swap = less(y, x);
  a.put(i, swap ? y : x);
  a.put(j, swap ? x : y);
}

/// Invokes f(i, j) for every comparator of Batcher's odd-even mergesort on n
/// inputs, padded to a power of two with trailing +inf sentinels. Comparators
/// touching a sentinel never move data and are dropped.
template <typename F>
void for_each_sort_comparator(std::size_t n, F&& f) {
  for (std::size_t p = 1; p < n; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      for (std::size_t j = k % p; j + k < n; j += 2 * k) {
        const std::size_t lim = std::min(k, n - j - k);
        for (std::size_t i = 0; i < lim; ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) f(i + j, i + j + k);
        }
      }
    }
  }
}

std::uint64_t sort_comparator_count(std::size_t n);

/// Batcher's odd-even merge of sorted runs [0, p) and [p, p + q) for arbitrary
/// p, q. After applying `comparators` in order, cell output[r] holds rank r.
struct MergeNetwork {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> comparators;
  std::vector<std::uint32_t> output;
  bool identity = true;
};

/// Cached per (p, q) and per thread.
const MergeNetwork& merge_network(std::size_t p, std::size_t q);

/// Oblivious in-place sort. Probes depend on a.size() only.
template <typename T, typename Less>
void sort(TracedRange<T> a, const Less& less) {
  for_each_sort_comparator(a.size(), [&](std::size_t i, std::size_t j) { compare_exchange(a, i, j, less); });
}

/// Merges the sorted runs a[0, p) and a[p, size) in place. Probes depend on
/// (p, a.size()) only.
template <typename T, typename Less>
void merge_in_place(TracedRange<T> a, std::size_t p, const Less& less) {
  if (p > a.size()) throw std::invalid_argument("merge split beyond range");
  const MergeNetwork& net = merge_network(p, a.size() - p);
  for (const auto& [i, j] : net.comparators) compare_exchange(a, i, j, less);
  if (net.identity) return;
  TracedArray<T> scratch(a.log(), a.size());
  for (std::size_t r = 0; r < a.size(); ++r) scratch.put(r, a.get(net.output[r]));
  for (std::size_t r = 0; r < a.size(); ++r) a.put(r, scratch.get(r));
}

/// Sorted concatenation of two sorted arrays. leak = (|A|, |B|).
template <typename T, typename Less>
TracedArray<T> merge(TracedRange<T> a, TracedRange<T> b, const Less& less) {
  TracedArray<T> out(a.log(), a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.put(i, a.get(i));
  for (std::size_t i = 0; i < b.size(); ++i) out.put(a.size() + i, b.get(i));
  merge_in_place(TracedRange<T>(out), a.size(), less);
  return out;
}

template <typename T>
TracedArray<T> copy_of(TracedRange<T> a) {
  TracedArray<T> out(a.log(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.put(i, a.get(i));
  return out;
}

/// Rank-k element; sorts a scratch copy and reads one cell. leak = (|A|, k).
template <typename T, typename Less>
T select(TracedRange<T> a, std::size_t k, const Less& less) {
  if (k >= a.size()) throw std::out_of_range("select rank out of range");
  TracedArray<T> scratch = copy_of(a);
  sort(TracedRange<T>(scratch), less);
  return scratch.get(k);
}

/// Elements of the given ranks, picked up during a full scan of a sorted
/// scratch copy, so the ranks stay private. leak = |A|.
template <typename T, typename Less>
std::vector<T> select_concealed(TracedRange<T> a, std::span<const std::size_t> ranks, const Less& less) {
  for (std::size_t k : ranks) {
    if (k >= a.size()) throw std::out_of_range("select rank out of range");
  }
  TracedArray<T> scratch = copy_of(a);
  sort(TracedRange<T>(scratch), less);
  std::vector<T> out(ranks.size());
  for (std::size_t i = 0; i < scratch.size(); ++i) {
    const T x = scratch.get(i);
    for (std::size_t r = 0; r < ranks.size(); ++r) {
      if (ranks[r] == i) out[r] = x;
    }
  }
  return out;
}

template <typename T>
struct Keyed {
  std::uint64_t key;
  T value;
};

struct KeyLess {
  template <typename T>
  bool operator()(const Keyed<T>& x, const Keyed<T>& y) const {
    return x.key < y.key;
  }
};

/// Stably moves pred-true elements to the front and returns their count.
/// leak = |A|.
template <typename T, typename Pred>
std::size_t filter(TracedRange<T> a, const Pred& pred) {
  const std::size_t n = a.size();
  TracedArray<Keyed<T>> scratch(a.log(), n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T x = a.get(i);
    const bool keep = pred(x);
    count += keep;
    scratch.put(i, Keyed<T>{keep ? i : n + i, x});
  }
  sort(TracedRange<Keyed<T>>(scratch), KeyLess{});
  for (std::size_t i = 0; i < n; ++i) a.put(i, scratch.get(i).value);
  return count;
}

/// a[0, i + k) becomes old a[0, i) followed by proj(b[0, k)). leak = (|A|, |B|).
template <typename T, typename U, typename Proj>
void append(TracedRange<T> a, TracedRange<U> b, std::size_t i, std::size_t k, const Proj& proj) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (i > na || k > nb || i + k > na) throw std::invalid_argument("append exceeds destination");
  const std::uint64_t discard = na + nb;
  TracedArray<Keyed<T>> scratch(a.log(), na + nb);
  for (std::size_t t = 0; t < na; ++t) scratch.put(t, Keyed<T>{t < i ? t : discard + t, a.get(t)});
  for (std::size_t t = 0; t < nb; ++t) scratch.put(na + t, Keyed<T>{t < k ? i + t : discard + na + t, proj(b.get(t))});
  sort(TracedRange<Keyed<T>>(scratch), KeyLess{});
  for (std::size_t t = 0; t < na; ++t) a.put(t, scratch.get(t).value);
}

template <typename T>
void append(TracedRange<T> a, TracedRange<T> b, std::size_t i, std::size_t k) {
  append(a, b, i, k, [](const T& x) { return x; });
}

template <typename T, typename Less>
void sort(TracedArray<T>& a, const Less& less) {
  sort(TracedRange<T>(a), less);
}

template <typename T, typename Less>
void merge_in_place(TracedArray<T>& a, std::size_t p, const Less& less) {
  merge_in_place(TracedRange<T>(a), p, less);
}

template <typename T, typename Less>
TracedArray<T> merge(TracedArray<T>& a, TracedArray<T>& b, const Less& less) {
  return merge(TracedRange<T>(a), TracedRange<T>(b), less);
}

template <typename T, typename Less>
T select(TracedArray<T>& a, std::size_t k, const Less& less) {
  return select(TracedRange<T>(a), k, less);
}

template <typename T, typename Less>
std::vector<T> select_concealed(TracedArray<T>& a, std::span<const std::size_t> ranks, const Less& less) {
  return select_concealed(TracedRange<T>(a), ranks, less);
}

template <typename T, typename Pred>
std::size_t filter(TracedArray<T>& a, const Pred& pred) {
  return filter(TracedRange<T>(a), pred);
}

template <typename T>
void append(TracedArray<T>& a, TracedArray<T>& b, std::size_t i, std::size_t k) {
  append(TracedRange<T>(a), TracedRange<T>(b), i, k);
}

}  // namespace oblivisel
