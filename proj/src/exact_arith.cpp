#include "oblivisel/exact_arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace oblivisel {

namespace {

template <typename T>
int sign(T v) {
  return (v > 0) - (v < 0);
}

i128 gcd(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

void check_coordinate(std::int64_t v) {
  if (v > kCoordinateLimit || v < -kCoordinateLimit) throw std::out_of_range("coordinate exceeds 32-bit input range");
}

std::strong_ordering compare_slope(const Line& a, const Line& b) {
  if (a.m != b.m) return a.m <=> b.m;
  const std::int64_t ea = std::int64_t{a.s} * a.idx;
  const std::int64_t eb = std::int64_t{b.s} * b.idx;
  return ea <=> eb;
}

Intersection make_intersection(const Line& a, const Line& b) {
  if (same_line(a, b)) throw std::invalid_argument("intersection of a line with itself");
  return compare_slope(a, b) > 0 ? Intersection{a, b} : Intersection{b, a};
}

EpsRational x_coordinate(const Intersection& p) {
  const Line& u = p.up;
  const Line& d = p.down;
  return {d.b - u.b, std::int64_t{d.idx} - std::int64_t{u.idx}, u.m - d.m,
          std::int64_t{u.s} * u.idx - std::int64_t{d.s} * d.idx};
}

std::weak_ordering compare_x(const Intersection& p, const Intersection& q) {
  const EpsRational a = x_coordinate(p);
  const EpsRational b = x_coordinate(q);
  // Numerator of x_p - x_q over a positive denominator, as a polynomial in eps.
  const i128 t0 = i128{a.n0} * b.d0 - i128{b.n0} * a.d0;
  const i128 t1 = i128{a.n1} * b.d0 - i128{b.n1} * a.d0;
  const i128 t2 = i128{a.n0} * b.d1 - i128{b.n0} * a.d1;
  const i128 t3 = i128{a.n1} * b.d1 - i128{b.n1} * a.d1;
  const int s = t0 != 0 ? sign(t0) : t1 != 0 ? sign(t1) : t2 != 0 ? sign(t2) : sign(t3);
  return s < 0 ? std::weak_ordering::less : (s > 0 ? std::weak_ordering::greater : std::weak_ordering::equivalent);
}

std::strong_ordering compare_boundary(const Boundary& p, const Boundary& q) {
  if (p.kind() != q.kind() || !p.is_point()) return static_cast<int>(p.kind()) <=> static_cast<int>(q.kind());
  const std::weak_ordering cx = compare_x(p.point(), q.point());
  if (cx != 0) return cx < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  const std::strong_ordering cu = compare_slope(p.point().up, q.point().up);
  if (cu != 0) return cu;
  return compare_slope(p.point().down, q.point().down);
}

bool line_le(const Boundary& p, const Line& l1, const Line& l2) {
  if (same_line(l1, l2)) return true;
  if (compare_slope(l1, l2) > 0) return compare_boundary(p, Boundary::at(Intersection{l1, l2})) <= 0;
  return compare_boundary(Boundary::at(Intersection{l2, l1}), p) < 0;
}

std::vector<Line> dualize(std::span<const Point> points) {
  std::vector<Line> lines;
  lines.reserve(points.size());
  for (const Point& pt : points) {
    check_coordinate(pt.x);
    check_coordinate(pt.y);
    lines.push_back(Line{pt.x, -pt.y, 0, 1});
  }
  return lines;
}

Rational make_rational(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

Rational midpoint(const Rational& a, const Rational& b) {
  return make_rational(a.num * b.den + b.num * a.den, 2 * a.den * b.den);
}

Rational unperturbed_x(const Intersection& p) {
  if (is_virtual(p)) throw std::domain_error("virtual intersection has no finite x-coordinate");
  const EpsRational x = x_coordinate(p);
  return make_rational(x.n0, x.d0);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string out;
  // Work on the negative side so the minimum value needs no special case.
  if (!neg) v = -v;
  while (v != 0) {
    out.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? to_string(r.num) : to_string(r.num) + "/" + to_string(r.den);
}

}  // namespace oblivisel
