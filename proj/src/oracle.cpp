#include "oblivisel/oracle.hpp"

#include <stdexcept>

namespace oblivisel::oracle {

std::vector<Intersection> all_intersections(std::span<const Line> lines) {
  std::vector<Intersection> out;
  out.reserve(lines.size() * (lines.size() - (lines.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) out.push_back(make_intersection(lines[i], lines[j]));
  std::sort(out.begin(), out.end(), IntersectionLess{});
  return out;
}

std::vector<Intersection> range_intersections(std::span<const Line> lines, const Boundary& a, const Boundary& b) {
  std::vector<Intersection> out;
  for (const Intersection& p : all_intersections(lines)) {
    if (compare_boundary(a, Boundary::at(p)) <= 0 && compare_boundary(Boundary::at(p), b) < 0) out.push_back(p);
  }
  return out;
}

std::uint64_t count_range(std::span<const Line> lines, const Boundary& a, const Boundary& b) {
  return range_intersections(lines, a, b).size();
}

std::vector<Line> sorted_at(std::span<const Line> lines, const Boundary& p) {
  std::vector<Line> out(lines.begin(), lines.end());
  std::sort(out.begin(), out.end(), LineOrder{p});
  return out;
}

std::vector<Intersection> layer_order_enumeration(std::span<const Line> lines, const Boundary& a, const Boundary& b) {
  std::vector<Line> cur = sorted_at(lines, a);
  const LineOrder below{b};
  std::vector<Intersection> out;
  const std::size_t n = cur.size();
  for (std::size_t w = 1; w < n; w *= 2) {
    std::vector<Line> next;
    next.reserve(n);
    for (std::size_t begin = 0; begin < n; begin += 2 * w) {
      const std::size_t mid = std::min(begin + w, n), end = std::min(begin + 2 * w, n);
      std::size_t i = begin, j = mid;
      while (i < mid || j < end) {
        if (j < end && (i == mid || below(cur[j], cur[i]))) {
          next.push_back(cur[j++]);
        } else {
          for (std::size_t t = mid; t < j; ++t) out.push_back(make_intersection(cur[i], cur[t]));
          next.push_back(cur[i++]);
        }
      }
    }
    cur = std::move(next);
  }
  return out;
}

SlopeResult theil_sen_median(std::span<const Point> points) {
  struct Slope {
    Rational value;
    std::size_t i, j;
  };
  std::vector<Slope> slopes;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].x == points[j].x) continue;
      slopes.push_back({make_rational(i128{points[j].y} - points[i].y, i128{points[j].x} - points[i].x), i, j});
    }
  }
  if (slopes.empty()) throw std::domain_error("no pair of points with distinct x-coordinates");
  std::sort(slopes.begin(), slopes.end(), [](const Slope& x, const Slope& y) { return x.value < y.value; });
  const std::size_t r = slopes.size();
  const auto dual = [&](const Slope& s) {
    const Line a{points[s.i].x, -points[s.i].y, static_cast<std::uint32_t>(s.i), 1};
    const Line b{points[s.j].x, -points[s.j].y, static_cast<std::uint32_t>(s.j), 1};
    return make_intersection(a, b);
  };
  if (r % 2 == 1) return {slopes[r / 2].value, {dual(slopes[r / 2])}};
  const Slope& lo = slopes[r / 2 - 1];
  const Slope& hi = slopes[r / 2];
  return {midpoint(lo.value, hi.value), {dual(lo), dual(hi)}};
}

std::vector<Line> reference_labels(std::span<const Line> raw) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (raw[x].b != raw[y].b) return raw[x].b < raw[y].b;
    if (raw[x].m != raw[y].m) return raw[x].m < raw[y].m;
    return x < y;
  });
  std::vector<Line> out(raw.begin(), raw.end());
  for (std::size_t r = 0; r < n; ++r) out[order[r]].idx = static_cast<std::uint32_t>(r);
  return out;
}

}  // namespace oblivisel::oracle
