#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "oblivisel/exact_arith.hpp"
#include "oblivisel/random.hpp"
#include "oblivisel/selection.hpp"
#include "oblivisel/traced_memory.hpp"

/// Plain randomized slope selection for the RAM model: merge sorts that skip
/// ordered runs and intersections reported while merging. Same answers as the
/// oblivious path, but its probes depend on the data.
namespace oblivisel::baseline {

std::uint64_t int_count(TracedRange<Line> lines, const Boundary& a, const Boundary& b);

/// Intersections with the given ascending indices, in index order.
TracedArray<Intersection> int_collect(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                      std::span<const std::uint64_t> k);

std::pair<Intersection, Intersection> int_selection_range(TracedRange<Line> lines, std::uint64_t k_lo,
                                                          std::uint64_t k_hi, SplitMix64& rng,
                                                          SelectionStats* stats = nullptr);

SlopeResult median_slope(TraceLog& log, std::span<const Point> points, SplitMix64& rng,
                         SelectionStats* stats = nullptr);

}  // namespace oblivisel::baseline
