#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "oblivisel/exact_arith.hpp"

namespace oblivisel::oracle {

/// All C(n,2) intersections, sorted under ⪯.
std::vector<Intersection> all_intersections(std::span<const Line> lines);

/// Intersections p with a ⪯ p ≺ b, sorted under ⪯.
std::vector<Intersection> range_intersections(std::span<const Line> lines, const Boundary& a, const Boundary& b);

std::uint64_t count_range(std::span<const Line> lines, const Boundary& a, const Boundary& b);

template <typename T, typename Less>
std::uint64_t brute_inversions(std::span<const T> a, const Less& less) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) c += less(a[j], a[i]) ? 1 : 0;
  return c;
}

/// Plain bottom-up merge counting with the oblivious split schedule; element
/// i of the result is the intersection assigned index i.
std::vector<Intersection> layer_order_enumeration(std::span<const Line> lines, const Boundary& a, const Boundary& b);

/// Lines sorted under <=_p.
std::vector<Line> sorted_at(std::span<const Line> lines, const Boundary& p);

/// Median of all finite pairwise slopes, mean of the two middle ones for an
/// even count. Throws std::domain_error when no finite slope exists.
SlopeResult theil_sen_median(std::span<const Point> points);

/// Perturbation labels assigned the way preprocessing does, computed directly.
std::vector<Line> reference_labels(std::span<const Line> raw);

}  // namespace oblivisel::oracle
