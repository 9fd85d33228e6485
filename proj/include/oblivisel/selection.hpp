#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "oblivisel/exact_arith.hpp"
#include "oblivisel/random.hpp"
#include "oblivisel/traced_memory.hpp"

namespace oblivisel {

/// Lines labelled with perturbation index and sign, in input order. The
/// parallel-pair counts are private values, never traced.
struct Preprocessed {
  TracedArray<Line> lines;
  std::uint64_t virtual_pairs = 0;
  std::uint64_t virtual_left = 0;
  std::uint64_t virtual_right = 0;
};

/// idx = rank by (b, m, position). s is chosen per slope class so that the
/// parallel pairs split floor(v/2) to the left end and ceil(v/2) to the right.
/// leak = n.
Preprocessed preprocess(TracedRange<Line> raw);

struct IterationRecord {
  std::size_t iteration;
  std::uint64_t window;  // N
  std::uint64_t offset;  // N'
  bool accepted;
  Boundary a;
  Boundary b;
};

struct SelectionOptions {
  /// Below this many lines every intersection is enumerated directly.
  std::size_t direct_below = 64;
  /// Overrides the padded iteration count T(n).
  std::optional<std::size_t> iterations;
  std::function<void(const IterationRecord&)> observer;
};

struct SelectionStats {
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  bool fallback = false;
};

/// ceil(sqrt(x)).
std::uint64_t ceil_sqrt(std::uint64_t x);

/// Loop iterations every run performs at size n.
std::size_t padded_iterations(std::size_t n);

/// Intersections of ⪯-ranks k_lo and k_hi (k_lo <= k_hi) found in one run of the
/// interpolating search. leak = (n, k_lo, k_hi).
std::pair<Intersection, Intersection> int_selection_range(TracedRange<Line> lines, std::uint64_t k_lo,
                                                          std::uint64_t k_hi, SplitMix64& rng,
                                                          const SelectionOptions& options = {},
                                                          SelectionStats* stats = nullptr);

Intersection int_selection(TracedRange<Line> lines, std::uint64_t k, SplitMix64& rng,
                           const SelectionOptions& options = {}, SelectionStats* stats = nullptr);

/// Theil-Sen median slope. leak = n. Throws std::invalid_argument for fewer
/// than two points, std::domain_error when all points share an x-coordinate.
SlopeResult median_slope(TraceLog& log, std::span<const Point> points, SplitMix64& rng,
                         const SelectionOptions& options = {}, SelectionStats* stats = nullptr);

}  // namespace oblivisel
