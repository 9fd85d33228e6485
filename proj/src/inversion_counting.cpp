#include "oblivisel/inversion_counting.hpp"

namespace oblivisel {

std::uint64_t int_count(TracedRange<Line> lines, const Boundary& a, const Boundary& b) {
  TracedArray<Labeled<Line>> w = wrap_labeled(lines);
  sort(w, OnValue<LineOrder>{LineOrder{a}});
  return count_inversions_labeled(TracedRange<Labeled<Line>>(w), LineOrder{b});
}

}  // namespace oblivisel
