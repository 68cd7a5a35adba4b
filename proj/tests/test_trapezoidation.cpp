#include <memory>
#include <random>
#include <set>

#include "doctest.h"
#include "ric/datasets.hpp"
#include "ric/trapezoidation.hpp"

using namespace ric;

namespace {

std::shared_ptr<const SegmentSet> make_set(std::vector<Segment> s) {
  return std::make_shared<const SegmentSet>(std::move(s));
}

Tsd build_in_order(std::vector<Segment> s) {
  auto set = make_set(std::move(s));
  auto order = identity_order(set->size());
  return build(set, order);
}

// Longest root-to-leaf path by explicit enumeration.
int longest_path(const Tsd& tsd) {
  int best = 0;
  for (const auto& p : tsd.enumerate_paths(1u << 22)) best = std::max(best, static_cast<int>(p.size()) - 1);
  return best;
}

// Sampled partition check: every sample point lies in exactly one active leaf,
// and locate() finds it.
void check_partition(const Tsd& tsd, std::mt19937_64& rng, int samples) {
  const Box& b = tsd.bounds();
  for (int s = 0; s < samples; ++s) {
    std::uniform_int_distribution<int> u(1, 9999);
    Rational fx(u(rng), 10000), fy(u(rng), 10000);
    Point q(b.min.x() + fx * (b.max.x() - b.min.x()) + Rational(1, 7919),
            b.min.y() + fy * (b.max.y() - b.min.y()) + Rational(1, 104729));
    int containing = 0, which = -1;
    for (int leaf : tsd.active_leaves()) {
      if (tsd.leaf_contains(leaf, q)) {
        ++containing;
        which = leaf;
      }
    }
    REQUIRE(containing == 1);
    auto loc = tsd.locate(q);
    CHECK(loc.leaf == which);
    CHECK(loc.comparisons <= tsd.depth());
  }
}

}  // namespace

TEST_CASE("fresh structure") {
  auto set = make_set({});
  Tsd tsd(set, Box{Point(0, 0), Point(1, 1)});
  CHECK(tsd.size() == 1);
  CHECK(tsd.depth() == 0);
  CHECK(tsd.face_count() == 1);
  CHECK(tsd.trajectory().empty());
  auto loc = tsd.locate(Point(Rational(1, 2), Rational(1, 3)));
  CHECK(loc.leaf == tsd.root());
  CHECK(loc.comparisons == 0);
  CHECK(tsd.enumerate_paths(10).size() == 1);
  CHECK(tsd.search_depth_exact() == 0);
}

TEST_CASE("single segment gives four faces and seven nodes") {
  Tsd tsd = build_in_order({make_segment(0, Point(2, 2), Point(6, 3))});
  CHECK(tsd.face_count() == 4);
  CHECK(tsd.size() == 7);
  CHECK(tsd.depth() == 3);
  CHECK(tsd.enumerate_paths(100).size() == 4);
  CHECK(tsd.trajectory()[0].D == 4);
  CHECK(tsd.trajectory()[0].E == 4);
}

TEST_CASE("four segment fixture") {
  Tsd tsd = build_in_order(four_segment_fixture());
  std::vector<std::size_t> faces;
  std::vector<int> d;
  for (const auto& st : tsd.trajectory()) {
    faces.push_back(st.faces);
    d.push_back(st.D);
  }
  CHECK(faces == std::vector<std::size_t>{4, 7, 10, 13});
  CHECK(d == std::vector<int>{4, 5, 6, 4});
  CHECK(tsd.trajectory()[1].adjacent == std::vector<int>{1});
  CHECK(tsd.trajectory()[2].adjacent == std::vector<int>{1, 2});
  CHECK(tsd.trajectory()[3].adjacent == std::vector<int>{3});
  CHECK(tsd.depth() == longest_path(tsd));
  CHECK(tsd.depth() == 8);
  // The deepest path through a.r (going right) and then d.r (going left) is
  // combinatorial only: d.r lies left of a.r.
  const int a_r = 3, d_r = 9;
  REQUIRE(tsd.vertices()[a_r].kind == VertexRef::Kind::RightEndpoint);
  REQUIRE(tsd.vertices()[a_r].a == 0);
  REQUIRE(tsd.vertices()[d_r].a == 3);
  int heavy = 0;
  for (const auto& p : tsd.enumerate_paths(1000)) {
    bool right_of_a = false, left_of_d = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const TsdNode& n = tsd.nodes()[static_cast<std::size_t>(p[i])];
      if (n.kind != TsdNode::Kind::XNode) continue;
      if (n.key == a_r && n.child[1] == p[i + 1]) right_of_a = true;
      if (n.key == d_r && n.child[0] == p[i + 1]) left_of_d = true;
    }
    if (right_of_a && left_of_d) {
      ++heavy;
      CHECK_FALSE(tsd.is_search_path(p));
    }
  }
  CHECK(heavy > 0);
  // Another path of full length stays above a, c and d, so the search depth
  // equals the depth on this fixture.
  CHECK(tsd.search_depth_exact() == 8);

  // A point between b and c, right of a's right endpoint.
  auto loc = tsd.locate(Point(14, 6));
  const Trapezoid& t = tsd.leaf_trapezoid(loc.leaf);
  CHECK(t.top == 2);
  CHECK(t.bot == 1);
  std::mt19937_64 rng(5);
  check_partition(tsd, rng, 300);
}

TEST_CASE("two crossing segments contribute three crossing faces") {
  for (int flip = 0; flip < 2; ++flip) {
    std::vector<Segment> s{make_segment(0, Point(0, 0), Point(4, 4)), make_segment(1, Point(0, 4), Point(4, 0))};
    auto set = make_set(s);
    std::vector<std::size_t> order = flip ? std::vector<std::size_t>{1, 0} : std::vector<std::size_t>{0, 1};
    Tsd tsd = build(set, order);
    int c = 0;
    for (const auto& st : tsd.trajectory()) c += st.C;
    CHECK(c == 3);
    CHECK(tsd.face_count() == 1 + 3 * (2 + 1));
    CHECK(tsd.depth() == longest_path(tsd));
  }
}

TEST_CASE("errors") {
  auto set = make_set({make_segment(0, Point(2, 2), Point(6, 3))});
  Tsd tsd(set, Box{Point(0, 0), Point(5, 5)});
  CHECK_THROWS_AS(tsd.insert_segment(0), Error);
  Tsd ok(set, Box{Point(0, 0), Point(10, 10)});
  ok.insert_segment(0);
  try {
    ok.insert_segment(0);
    FAIL("expected DuplicateSegment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSegment);
  }
  try {
    ok.locate(Point(4, Rational(5, 2)));
    FAIL("expected DegenerateQuery");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateQuery);
  }
}

TEST_CASE("random instances keep the face identity, partition and depth") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto kind = trial % 2 ? DatasetKind::RandomCrossing : DatasetKind::RandomNoncrossing;
    auto inst = generate(kind, 2 + trial % 7, 100 + static_cast<std::uint64_t>(trial));
    auto set = make_set(inst.segments);
    auto order = identity_order(set->size());
    std::shuffle(order.begin(), order.end(), rng);
    Tsd tsd(set, default_bounds(*set));
    int c_total = 0;
    for (std::size_t idx : order) {
      const auto& st = tsd.insert_segment(idx);
      REQUIRE(st.faces == 1 + 3 * (static_cast<std::size_t>(st.j) + tsd.crossings_so_far()));
      CHECK(st.D == st.E + st.O + st.C);
      CHECK(st.nodes_created <= 3 * st.D);
      CHECK(static_cast<int>(st.visible_crossings.size()) <= st.O);
      c_total += st.C;
    }
    CHECK(c_total == 3 * static_cast<int>(set->k()));
    CHECK(tsd.depth() == longest_path(tsd));
    CHECK(tsd.search_depth_exact() <= tsd.depth());
    check_partition(tsd, rng, 60);
  }
}

TEST_CASE("shared endpoints") {
  // A fan of segments from one point plus one ending there.
  std::vector<Segment> s{
      make_segment(0, Point(5, 5), Point(9, 9)), make_segment(1, Point(5, 5), Point(9, 1)),
      make_segment(2, Point(5, 5), Point(5, 9)), make_segment(3, Point(1, 3), Point(5, 5)),
      make_segment(4, Point(5, 5), Point(9, 5)), make_segment(5, Point(4, 1), Point(5, 5)),
  };
  auto set = make_set(s);
  std::mt19937_64 rng(3);
  auto order = identity_order(set->size());
  for (int trial = 0; trial < 30; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    Tsd tsd = build(set, order);
    CHECK(tsd.face_count() == 1 + 3 * 6);
    CHECK(tsd.depth() == longest_path(tsd));
    check_partition(tsd, rng, 40);
  }
}

TEST_CASE("adversarial order produces deep DAG with many paths") {
  auto segs = adversarial_depth_segments(10);
  Tsd tsd = build_in_order(segs);
  CHECK(tsd.depth() >= 5);
  CHECK(tsd.depth() == longest_path(tsd));
  Tsd six = build_in_order(adversarial_depth_segments(6));
  CHECK(six.enumerate_paths(1u << 20).size() >= 27);
  MESSAGE("depth n=10: " << tsd.depth() << " search depth: " << tsd.search_depth_exact());
}
