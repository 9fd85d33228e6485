#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oblivisel/exact_arith.hpp"

namespace oblivisel {

enum class InputKind { Spread, Pencil };

/// Parses "spread" / "pencil"; throws std::invalid_argument otherwise.
InputKind parse_kind(const std::string& name);
std::string to_string(InputKind kind);

struct SpreadRange {
  std::int64_t m_min = -(std::int64_t{1} << 30);
  std::int64_t m_max = std::int64_t{1} << 30;
  std::int64_t b_min = -(std::int64_t{1} << 30);
  std::int64_t b_max = std::int64_t{1} << 30;
};

/// Dual lines (idx and s left at their defaults).
/// spread: slope i drawn from [m_min + i r, m_min + (i + 1) r) with
/// r = (m_max - m_min) / n, uniform offsets, then shuffled.
/// pencil: l_i = (i, -i) for i = 1..n, all through (1, 0).
std::vector<Line> generate_lines(InputKind kind, std::size_t n, std::uint64_t seed, const SpreadRange& range = {});

/// Primal points of dual lines: (m, -b).
std::vector<Point> to_points(const std::vector<Line>& lines);
std::vector<Line> to_lines(const std::vector<Point>& points);

}  // namespace oblivisel
