#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "oblivisel/exact_arith.hpp"
#include "oblivisel/random.hpp"
#include "oblivisel/traced_memory.hpp"

namespace oblivisel {

struct LabeledLine {
  Line line;
  std::uint32_t blk = 0;
  std::uint8_t half = 0;
  std::uint64_t idx0 = 0;
  std::uint64_t idx1 = 0;
};

/// Element of the working array X: either a line or an index token.
/// Keys are in doubled units so that the "+0.5" ranks of tokens are odd.
struct CollectItem {
  Line line0;
  Line line1;
  std::uint64_t key0 = 0;
  std::uint64_t key1 = 0;
  std::uint32_t blk = 0;
  std::uint8_t is_token = 0;
  std::uint8_t half = 0;
  std::uint8_t has0 = 0;
  std::uint8_t has1 = 0;
};

/// One layer of index assignment: merges adjacent 2^l blocks under <=_b and
/// labels every line; `inversions` is advanced by the layer's count.
void determine_line_indices(TracedArray<LabeledLine>& lines, std::uint64_t& inversions, unsigned l,
                            const Boundary& b);

/// Tokens for the ascending index list K (doubled units, 2k + 1).
TracedArray<CollectItem> make_tokens(TraceLog& log, std::span<const std::uint64_t> k);

/// Merges lines and tokens by index and attaches the inducing lines to every
/// token whose index falls in layer l. Probes depend on (|lines|, |tokens|).
TracedArray<CollectItem> match_against_lines(TracedArray<LabeledLine>& lines, TracedArray<CollectItem>& tokens,
                                             unsigned l);

/// Appends the matched tokens of X as intersections to out[stored, ...).
/// Probes depend on (|X|, |out|) only.
void store_intersections(TracedArray<CollectItem>& x, TracedArray<Intersection>& out, std::size_t& stored);

/// Intersections with the given indices under the implicit merge-sort
/// enumeration of [a, b). K must be ascending and non-empty, every index below
/// int_count(lines, a, b). leak = (|lines|, |K|).
TracedArray<Intersection> int_collect(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                      std::span<const std::uint64_t> k);

/// `count` intersections drawn uniformly with replacement from [a, b).
/// leak = (|lines|, count).
TracedArray<Intersection> int_sample(TracedRange<Line> lines, const Boundary& a, const Boundary& b,
                                     std::size_t count, SplitMix64& rng);

/// All intersections in [a, b). leak = (|lines|, int_count(lines, a, b)).
TracedArray<Intersection> int_enumeration(TracedRange<Line> lines, const Boundary& a, const Boundary& b);

}  // namespace oblivisel
