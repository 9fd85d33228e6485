#include "oblivisel/generate.hpp"

#include <stdexcept>
#include <utility>

#include "oblivisel/random.hpp"

namespace oblivisel {

InputKind parse_kind(const std::string& name) {
  if (name == "spread") return InputKind::Spread;
  if (name == "pencil") return InputKind::Pencil;
  throw std::invalid_argument("unknown input kind: " + name);
}

std::string to_string(InputKind kind) { return kind == InputKind::Spread ? "spread" : "pencil"; }

std::vector<Line> generate_lines(InputKind kind, std::size_t n, std::uint64_t seed, const SpreadRange& range) {
  if (n < 2) throw std::invalid_argument("need at least two lines");
  std::vector<Line> out(n);
  if (kind == InputKind::Pencil) {
    if (n > static_cast<std::size_t>(kCoordinateLimit)) throw std::invalid_argument("pencil too large");
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int64_t>(i + 1);
      out[i] = Line{v, -v, 0, 1};
    }
    return out;
  }
  for (std::int64_t v : {range.m_min, range.m_max, range.b_min, range.b_max}) check_coordinate(v);
  if (range.m_min >= range.m_max || range.b_min > range.b_max) throw std::invalid_argument("empty generator range");
  const std::int64_t r = (range.m_max - range.m_min) / static_cast<std::int64_t>(n);
  if (r < 1) throw std::invalid_argument("n too large for the slope range");
  SplitMix64 rng(seed);
  const auto b_span = static_cast<std::uint64_t>(range.b_max - range.b_min) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t m = range.m_min + static_cast<std::int64_t>(i) * r + static_cast<std::int64_t>(rng.below(r));
    const std::int64_t b = range.b_min + static_cast<std::int64_t>(rng.below(b_span));
    out[i] = Line{m, b, 0, 1};
  }
  for (std::size_t i = n - 1; i > 0; --i) std::swap(out[i], out[rng.below(i + 1)]);
  return out;
}

std::vector<Point> to_points(const std::vector<Line>& lines) {
  std::vector<Point> out;
  out.reserve(lines.size());
  for (const Line& l : lines) out.push_back(Point{l.m, -l.b});
  return out;
}

std::vector<Line> to_lines(const std::vector<Point>& points) { return dualize(points); }

}  // namespace oblivisel
