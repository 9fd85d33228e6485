#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oblivisel {

using i128 = __int128;

/// Inputs are b-bit integers with b = 32: |coordinate| <= 2^31 - 1. Every
/// cross product of intersection coordinates then fits comfortably in i128.
inline constexpr std::int64_t kCoordinateLimit = (std::int64_t{1} << 31) - 1;

/// Throws std::out_of_range when |v| exceeds kCoordinateLimit.
void check_coordinate(std::int64_t v);

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

/// Dual line x -> m x + b with symbolic perturbation
///   m' = m + s * idx * eps^2,  b' = b + idx * eps.
/// idx is unique per input set, so lines are identified by idx.
struct Line {
  std::int64_t m = 0;
  std::int64_t b = 0;
  std::uint32_t idx = 0;
  std::int8_t s = 1;
};

inline bool same_line(const Line& a, const Line& b) { return a.idx == b.idx; }

/// Order of the perturbed slopes: m first, then the eps^2 coefficient s * idx.
std::strong_ordering compare_slope(const Line& a, const Line& b);

/// Intersection of two distinct lines, `up` having the larger perturbed slope.
struct Intersection {
  Line up;
  Line down;

  friend bool operator==(const Intersection& p, const Intersection& q) {
    return same_line(p.up, q.up) && same_line(p.down, q.down);
  }
};

/// Orients the pair; throws std::invalid_argument for the same line twice.
Intersection make_intersection(const Line& a, const Line& b);

/// Parallel before perturbation, i.e. a virtual intersection at -inf or +inf.
inline bool is_virtual(const Intersection& p) { return p.up.m == p.down.m; }

/// x-coordinate (n0 + n1 eps) / (d0 + d1 eps^2) of a perturbed intersection.
/// The denominator is positive for all small eps > 0.
struct EpsRational {
  std::int64_t n0;
  std::int64_t n1;
  std::int64_t d0;
  std::int64_t d1;
};

EpsRational x_coordinate(const Intersection& p);

/// Order of x-coordinates as eps -> 0+. Equivalent means equal for all small eps.
std::weak_ordering compare_x(const Intersection& p, const Intersection& q);

/// Element of P_x: an intersection or one of the sentinels.
class Boundary {
 public:
  enum class Kind : std::uint8_t { NegInf, Point, PosInf };

  Boundary() = default;
  static Boundary neg_inf() { return Boundary(Kind::NegInf, {}); }
  static Boundary pos_inf() { return Boundary(Kind::PosInf, {}); }
  static Boundary at(const Intersection& p) { return Boundary(Kind::Point, p); }

  Kind kind() const { return kind_; }
  bool is_point() const { return kind_ == Kind::Point; }
  /// Only meaningful when is_point().
  const Intersection& point() const { return point_; }

 private:
  Boundary(Kind kind, const Intersection& p) : kind_(kind), point_(p) {}

  Kind kind_ = Kind::NegInf;
  Intersection point_{};
};

/// Total order on P_x: sentinels at the ends, points by x, then by the
/// perturbed slope of `up`, then of `down`.
std::strong_ordering compare_boundary(const Boundary& p, const Boundary& q);

inline std::strong_ordering compare_boundary(const Intersection& p, const Intersection& q) {
  return compare_boundary(Boundary::at(p), Boundary::at(q));
}

/// l1 <=_p l2.
bool line_le(const Boundary& p, const Line& l1, const Line& l2);

/// Strict order on lines induced by <=_p; usable as a sorting comparator.
struct LineOrder {
  Boundary at;

  bool operator()(const Line& l1, const Line& l2) const { return !same_line(l1, l2) && line_le(at, l1, l2); }
};

/// Strict ⪯ on intersections.
struct IntersectionLess {
  bool operator()(const Intersection& p, const Intersection& q) const { return compare_boundary(p, q) < 0; }
};

/// Point (px, py) -> line x -> px x - py. Perturbation fields are left zero.
std::vector<Line> dualize(std::span<const Point> points);

/// Exact rational in lowest terms with positive denominator.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 l = a.num * b.den;
    const i128 r = b.num * a.den;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double approx() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Throws std::domain_error for a zero denominator.
Rational make_rational(i128 num, i128 den);
Rational midpoint(const Rational& a, const Rational& b);

/// Unperturbed x-coordinate of a real (non-virtual) intersection.
Rational unperturbed_x(const Intersection& p);

/// Median slope: exact unperturbed value and the one or two intersections it
/// was taken from.
struct SlopeResult {
  Rational value;
  std::vector<Intersection> contributing;

  double approx() const { return value.approx(); }
};

std::string to_string(i128 v);
std::string to_string(const Rational& r);

}  // namespace oblivisel
