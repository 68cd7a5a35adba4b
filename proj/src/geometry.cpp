#include "ric/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace ric {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroLengthSegment: return "ZeroLengthSegment";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::CollinearOverlap: return "CollinearOverlap";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DuplicateSegment: return "DuplicateSegment";
    case ErrorCode::DegenerateQuery: return "DegenerateQuery";
    case ErrorCode::TooManyPaths: return "TooManyPaths";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DuplicateSite: return "DuplicateSite";
    case ErrorCode::DegeneratePosition: return "DegeneratePosition";
    case ErrorCode::CollinearBase: return "CollinearBase";
    case ErrorCode::RebuildLimitExceeded: return "RebuildLimitExceeded";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw Error(ErrorCode::Parse, "not a finite decimal: '" + s + "'");
    }
  }
  if (digits.empty()) throw Error(ErrorCode::Parse, "not a finite decimal: '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  Rational q(negative ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

namespace {

constexpr std::int64_t kSmallLimit = std::int64_t{1} << 60;

bool small_integer(const Rational& q, std::int64_t& out) {
  if (q.get_den() != 1) return false;
  const mpz_class& n = q.get_num();
  if (!n.fits_slong_p()) return false;
  long v = n.get_si();
  if (v >= kSmallLimit || v <= -kSmallLimit) return false;
  out = v;
  return true;
}

int sign_of(const Rational& q) { return sgn(q); }

}  // namespace

Point::Point(Rational x, Rational y) : x_(std::move(x)), y_(std::move(y)) {
  x_.canonicalize();
  y_.canonicalize();
  small_ = small_integer(x_, sx_) && small_integer(y_, sy_);
}

Point::Point(std::int64_t x, std::int64_t y)
    : x_(static_cast<long>(x)), y_(static_cast<long>(y)), small_(true), sx_(x), sy_(y) {
  if (x >= kSmallLimit || x <= -kSmallLimit || y >= kSmallLimit || y <= -kSmallLimit) small_ = false;
}

bool operator==(const Point& a, const Point& b) {
  if (a.small_ && b.small_) return a.sx_ == b.sx_ && a.sy_ == b.sy_;
  return a.x_ == b.x_ && a.y_ == b.y_;
}

std::string to_string(const Point& p) { return "(" + to_string(p.x()) + "," + to_string(p.y()) + ")"; }

Segment make_segment(int id, const Point& a, const Point& b) {
  auto ord = compare_sheared(a, b);
  if (ord == 0) throw Error(ErrorCode::ZeroLengthSegment, "segment " + std::to_string(id));
  if (ord < 0) return Segment{id, a, b};
  return Segment{id, b, a};
}

std::strong_ordering compare_sheared(const Point& p, const Point& q) {
  if (p.is_small() && q.is_small()) {
    if (p.small_x() != q.small_x()) return p.small_x() <=> q.small_x();
    return p.small_y() <=> q.small_y();
  }
  int cx = cmp(p.x(), q.x());
  if (cx != 0) return cx < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  int cy = cmp(p.y(), q.y());
  if (cy != 0) return cy < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int orientation(const Point& p, const Point& q, const Point& r) {
  if (p.is_small() && q.is_small() && r.is_small()) {
    __int128 ax = static_cast<__int128>(q.small_x()) - p.small_x();
    __int128 ay = static_cast<__int128>(q.small_y()) - p.small_y();
    __int128 bx = static_cast<__int128>(r.small_x()) - p.small_x();
    __int128 by = static_cast<__int128>(r.small_y()) - p.small_y();
    __int128 det = ax * by - ay * bx;
    return (det > 0) - (det < 0);
  }
  Rational det = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  return sign_of(det);
}

Side is_above(const Point& p, const Segment& s) {
  return static_cast<Side>(orientation(s.left, s.right, p));
}

namespace {

// Lexicographic position of an endpoint strictly inside a collinear segment.
bool strictly_between(const Point& p, const Segment& s) {
  return compare_sheared(s.left, p) < 0 && compare_sheared(p, s.right) < 0;
}

Point crossing_point_of(const Segment& a, const Segment& b) {
  Rational ax = a.right.x() - a.left.x();
  Rational ay = a.right.y() - a.left.y();
  Rational bx = b.right.x() - b.left.x();
  Rational by = b.right.y() - b.left.y();
  Rational denom = ax * by - ay * bx;
  Rational t = ((b.left.x() - a.left.x()) * by - (b.left.y() - a.left.y()) * bx) / denom;
  return Point(a.left.x() + t * ax, a.left.y() + t * ay);
}

}  // namespace

std::optional<Point> intersect(const Segment& s1, const Segment& s2) {
  int o1 = orientation(s1.left, s1.right, s2.left);
  int o2 = orientation(s1.left, s1.right, s2.right);
  if (o1 == 0 && o2 == 0) {
    const Point& lo = compare_sheared(s1.left, s2.left) < 0 ? s2.left : s1.left;
    const Point& hi = compare_sheared(s1.right, s2.right) < 0 ? s1.right : s2.right;
    if (compare_sheared(lo, hi) < 0) {
      throw Error(ErrorCode::CollinearOverlap,
                  "segments " + std::to_string(s1.id) + " and " + std::to_string(s2.id));
    }
    return std::nullopt;
  }
  int o3 = orientation(s2.left, s2.right, s1.left);
  int o4 = orientation(s2.left, s2.right, s1.right);
  if (o1 * o2 < 0 && o3 * o4 < 0) return crossing_point_of(s1, s2);
  return std::nullopt;
}

std::size_t count_crossings(std::span<const Segment> segments) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = i + 1; j < segments.size(); ++j)
      if (intersect(segments[i], segments[j])) ++k;
  return k;
}

SegmentSet::SegmentSet(std::vector<Segment> segments) : segments_(std::move(segments)) {
  const std::size_t n = segments_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Segment& s = segments_[i];
    s = make_segment(s.id, s.left, s.right);
    if (s.id < 0) throw Error(ErrorCode::InvalidArgument, "negative segment id");
    if (!by_id_.emplace(s.id, i).second)
      throw Error(ErrorCode::DuplicateId, "segment id " + std::to_string(s.id));
  }

  // Candidate pairs by x-sorted bounding boxes.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_sheared(segments_[a].left, segments_[b].left) < 0;
  });
  auto min_y = [&](const Segment& s) -> const Rational& {
    return s.left.y() < s.right.y() ? s.left.y() : s.right.y();
  };
  auto max_y = [&](const Segment& s) -> const Rational& {
    return s.left.y() < s.right.y() ? s.right.y() : s.left.y();
  };

  std::vector<std::pair<int, int>> found;
  for (std::size_t oi = 0; oi < n; ++oi) {
    const Segment& a = segments_[order[oi]];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const Segment& b = segments_[order[oj]];
      if (b.left.x() > a.right.x()) break;
      if (max_y(a) < min_y(b) || max_y(b) < min_y(a)) continue;

      int o1 = orientation(a.left, a.right, b.left);
      int o2 = orientation(a.left, a.right, b.right);
      int o3 = orientation(b.left, b.right, a.left);
      int o4 = orientation(b.left, b.right, a.right);
      std::string pair = std::to_string(a.id) + " and " + std::to_string(b.id);
      if (o1 == 0 && o2 == 0) {
        intersect(a, b);  // throws on positive-length overlap
        if (a.right == b.left || b.right == a.left)
          throw Error(ErrorCode::DegenerateInput, "collinear segments touching: " + pair);
        continue;
      }
      if (o1 * o2 < 0 && o3 * o4 < 0) {
        int ia = static_cast<int>(order[oi]);
        int ib = static_cast<int>(order[oj]);
        found.emplace_back(std::min(ia, ib), std::max(ia, ib));
        continue;
      }
      if ((o1 == 0 && strictly_between(b.left, a)) || (o2 == 0 && strictly_between(b.right, a)) ||
          (o3 == 0 && strictly_between(a.left, b)) || (o4 == 0 && strictly_between(a.right, b)))
        throw Error(ErrorCode::DegenerateInput, "endpoint on segment interior: " + pair);
    }
  }
  std::sort(found.begin(), found.end());
  crossings_ = std::move(found);
  crossing_points_.reserve(crossings_.size());
  for (auto [a, b] : crossings_) crossing_points_.push_back(crossing_point_of(segments_[a], segments_[b]));

  std::vector<std::size_t> by_point(crossing_points_.size());
  std::iota(by_point.begin(), by_point.end(), 0);
  std::sort(by_point.begin(), by_point.end(), [&](std::size_t a, std::size_t b) {
    return compare_sheared(crossing_points_[a], crossing_points_[b]) < 0;
  });
  for (std::size_t i = 1; i < by_point.size(); ++i)
    if (crossing_points_[by_point[i]] == crossing_points_[by_point[i - 1]])
      throw Error(ErrorCode::DegenerateInput, "three segments through " + to_string(crossing_points_[by_point[i]]));
}

std::size_t SegmentSet::index_of(int id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(ErrorCode::InvalidArgument, "unknown segment id " + std::to_string(id));
  return it->second;
}

std::optional<Point> SegmentSet::crossing_point(int a, int b) const {
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  auto it = std::lower_bound(crossings_.begin(), crossings_.end(), key);
  if (it == crossings_.end() || *it != key) return std::nullopt;
  return crossing_points_[static_cast<std::size_t>(it - crossings_.begin())];
}

std::pair<Point, Point> SegmentSet::bounding_box() const {
  if (segments_.empty()) return {Point(0, 0), Point(1, 1)};
  Rational x0 = segments_[0].left.x(), x1 = x0, y0 = segments_[0].left.y(), y1 = y0;
  for (const Segment& s : segments_) {
    for (const Point* p : {&s.left, &s.right}) {
      if (p->x() < x0) x0 = p->x();
      if (p->x() > x1) x1 = p->x();
      if (p->y() < y0) y0 = p->y();
      if (p->y() > y1) y1 = p->y();
    }
  }
  return {Point(x0, y0), Point(x1, y1)};
}

}  // namespace ric
