#pragma once

// Exact planar primitives over arbitrary-precision rationals.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ric/error.hpp"

namespace ric {

using Rational = mpq_class;

/// Parses an integer or finite decimal ("-12", "3.25") into an exact rational.
Rational parse_rational(std::string_view text);

/// Renders as "num/den" (or "num" when integral).
std::string to_string(const Rational& q);

/// A point with exact rational coordinates. Points whose coordinates are
/// integers of magnitude below 2^60 also carry a machine-word copy so the
/// predicates can skip GMP on the common integer-grid path.
class Point {
 public:
  Point() : Point(0, 0) {}
  Point(Rational x, Rational y);
  Point(std::int64_t x, std::int64_t y);

  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }

  bool is_small() const { return small_; }
  std::int64_t small_x() const { return sx_; }
  std::int64_t small_y() const { return sy_; }

  friend bool operator==(const Point& a, const Point& b);

 private:
  Rational x_, y_;
  bool small_ = false;
  std::int64_t sx_ = 0, sy_ = 0;
};

std::string to_string(const Point& p);

struct Segment {
  int id = 0;
  Point left;
  Point right;
};

/// Orders the endpoints and validates; throws ZeroLengthSegment.
Segment make_segment(int id, const Point& a, const Point& b);

/// Lexicographic (x, then y) order: the infinitesimal shear.
std::strong_ordering compare_sheared(const Point& p, const Point& q);

/// Sign of the signed area of pqr; +1 for counterclockwise.
int orientation(const Point& p, const Point& q, const Point& r);

enum class Side { Below = -1, On = 0, Above = 1 };

/// Position of p against the supporting line of s.
Side is_above(const Point& p, const Segment& s);

/// Interior crossing point, or nullopt. Shared endpoints and touching
/// configurations are not crossings. Throws CollinearOverlap.
std::optional<Point> intersect(const Segment& s1, const Segment& s2);

/// Pairwise crossing count by brute force.
std::size_t count_crossings(std::span<const Segment> segments);

/// A validated segment collection with its crossing set K(S).
///
/// Rejected at construction: zero-length segments, duplicate ids, collinear
/// overlaps, collinear segments touching end to end, an endpoint lying in
/// the interior of another segment, and crossings shared by more than two
/// segments or coinciding with an endpoint.
class SegmentSet {
 public:
  SegmentSet() = default;
  explicit SegmentSet(std::vector<Segment> segments);

  std::span<const Segment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const Segment& operator[](std::size_t i) const { return segments_[i]; }

  /// Position of the segment with the given id; throws InvalidArgument.
  std::size_t index_of(int id) const;

  /// Crossing pairs as (smaller index, larger index), sorted.
  const std::vector<std::pair<int, int>>& crossings() const { return crossings_; }
  std::size_t k() const { return crossings_.size(); }

  /// Crossing point of two segment indices, if they cross.
  std::optional<Point> crossing_point(int a, int b) const;

  /// Bounding box of all endpoints; {min, max}.
  std::pair<Point, Point> bounding_box() const;

 private:
  std::vector<Segment> segments_;
  std::vector<std::pair<int, int>> crossings_;
  std::vector<Point> crossing_points_;
  std::unordered_map<int, std::size_t> by_id_;
};

}  // namespace ric
