#include <random>

#include "doctest.h"
#include "ric/datasets.hpp"
#include "ric/geometry.hpp"

using namespace ric;

namespace {

Segment seg(int id, std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2) {
  return make_segment(id, Point(x1, y1), Point(x2, y2));
}

Point big(std::int64_t x, std::int64_t y) {
  // Same value without the machine-word fast path.
  return Point(Rational(x) * Rational(1, 1), Rational(y) + Rational(1, 3) - Rational(1, 3));
}

}  // namespace

TEST_CASE("sheared comparison") {
  CHECK(compare_sheared(Point(1, 2), Point(1, 5)) == std::strong_ordering::less);
  CHECK(compare_sheared(Point(1, 2), Point(1, 2)) == std::strong_ordering::equal);
  CHECK(compare_sheared(Point(2, 0), Point(1, 9)) == std::strong_ordering::greater);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(0, 3);
  for (int t = 0; t < 2000; ++t) {
    Point a(d(rng), d(rng)), b(d(rng), d(rng)), c(d(rng), d(rng));
    CHECK(compare_sheared(a, b) == (0 <=> compare_sheared(b, a)));
    if (compare_sheared(a, b) < 0 && compare_sheared(b, c) < 0) CHECK(compare_sheared(a, c) < 0);
  }
}

TEST_CASE("orientation") {
  CHECK(orientation(Point(0, 0), Point(1, 0), Point(0, 1)) == 1);
  CHECK(orientation(Point(0, 0), Point(1, 1), Point(2, 2)) == 0);
  CHECK(orientation(Point(0, 0), Point(0, 1), Point(1, 0)) == -1);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
  for (int t = 0; t < 500; ++t) {
    Point p(d(rng), d(rng)), q(d(rng), d(rng)), r(d(rng), d(rng));
    const int o = orientation(p, q, r);
    CHECK(orientation(p, r, q) == -o);
    CHECK(orientation(q, p, r) == -o);
    // The integer fast path agrees with the rational path.
    CHECK(orientation(big(p.small_x(), p.small_y()), big(q.small_x(), q.small_y()), big(r.small_x(), r.small_y())) == o);
  }
}

TEST_CASE("side of a supporting line") {
  const Segment s = seg(0, 0, 0, 2, 0);
  CHECK(is_above(Point(1, 1), s) == Side::Above);
  CHECK(is_above(Point(1, 0), s) == Side::On);
  CHECK(is_above(Point(3, -1), s) == Side::Below);
}

TEST_CASE("intersection") {
  auto p = intersect(seg(0, 0, 0, 2, 2), seg(1, 0, 2, 2, 0));
  REQUIRE(p);
  CHECK(*p == Point(1, 1));
  CHECK_FALSE(intersect(seg(0, 0, 0, 1, 0), seg(1, 2, 0, 3, 0)));
  p = intersect(seg(0, 0, 0, 4, 2), seg(1, 0, 2, 4, 0));
  REQUIRE(p);
  CHECK(*p == Point(2, 1));
  CHECK(*intersect(seg(1, 0, 2, 4, 0), seg(0, 0, 0, 4, 2)) == Point(2, 1));

  // Non-integer crossing.
  p = intersect(seg(0, 0, 0, 3, 1), seg(1, 0, 1, 3, 0));
  REQUIRE(p);
  CHECK(*p == Point(Rational(3, 2), Rational(1, 2)));

  // Shared endpoint is not a crossing.
  CHECK_FALSE(intersect(seg(0, 0, 0, 2, 2), seg(1, 0, 0, 2, -1)));
  CHECK_THROWS_AS(intersect(seg(0, 0, 0, 2, 0), seg(1, 1, 0, 3, 0)), Error);
}

TEST_CASE("scaling invariance") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-50, 50);
  const Rational scale(7, 3);
  auto scaled = [&](const Point& p) { return Point(p.x() * scale, p.y() * scale); };
  for (int t = 0; t < 300; ++t) {
    Point a(d(rng), d(rng)), b(d(rng), d(rng)), c(d(rng), d(rng)), e(d(rng), d(rng));
    CHECK(orientation(a, b, c) == orientation(scaled(a), scaled(b), scaled(c)));
    CHECK(compare_sheared(a, b) == compare_sheared(scaled(a), scaled(b)));
    if (a == b || c == e) continue;
    const Segment s1 = make_segment(0, a, b), s2 = make_segment(1, c, e);
    const Segment t1 = make_segment(0, scaled(a), scaled(b)), t2 = make_segment(1, scaled(c), scaled(e));
    CHECK(is_above(c, s1) == is_above(scaled(c), t1));
    try {
      auto x = intersect(s1, s2);
      auto y = intersect(t1, t2);
      CHECK(x.has_value() == y.has_value());
      if (x) CHECK(scaled(*x) == *y);
    } catch (const Error&) {
      CHECK_THROWS_AS(intersect(t1, t2), Error);
    }
  }
}

TEST_CASE("crossing counts") {
  CHECK(count_crossings(four_segment_fixture()) == 0);
  CHECK(count_crossings(std::vector<Segment>{seg(0, 0, 0, 2, 2), seg(1, 0, 2, 2, 0)}) == 1);
  std::vector<Segment> grid;
  for (int i = 0; i < 3; ++i) {
    grid.push_back(seg(i, 0, 2 * i + 1, 6, 2 * i + 1));
    grid.push_back(seg(3 + i, 2 * i + 1, 0, 2 * i + 1, 6));
  }
  CHECK(count_crossings(grid) == 9);
  CHECK(SegmentSet(grid).k() == 9);
}

TEST_CASE("ingestion validation") {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;  // sentinel: nothing thrown
  };
  CHECK(code([] { make_segment(0, Point(1, 1), Point(1, 1)); }) == ErrorCode::ZeroLengthSegment);
  CHECK(code([] { SegmentSet({seg(1, 0, 0, 1, 0), seg(1, 0, 1, 1, 1)}); }) == ErrorCode::DuplicateId);
  CHECK(code([] { SegmentSet({seg(0, 0, 0, 2, 0), seg(1, 1, 0, 3, 0)}); }) == ErrorCode::CollinearOverlap);
  CHECK(SegmentSet({seg(0, 0, 0, 2, 0), seg(1, 0, 0, 2, 1)}).k() == 0);
  CHECK(SegmentSet({seg(7, 0, 0, 2, 0), seg(3, 0, 1, 2, 1)}).index_of(3) == 1);
}

TEST_CASE("decimal parsing") {
  CHECK(parse_rational("-12") == -12);
  CHECK(parse_rational("3.25") == Rational(13, 4));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK_THROWS_AS(parse_rational("1/2"), Error);
  CHECK_THROWS_AS(parse_rational("1e5"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK(to_string(Rational(6, 4)) == "3/2");
}
