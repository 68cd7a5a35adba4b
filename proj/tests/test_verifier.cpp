#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "ric/datasets.hpp"
#include "ric/verifier.hpp"

using namespace ric;

namespace {

std::shared_ptr<const SegmentSet> make_set(std::vector<Segment> s) {
  return std::make_shared<const SegmentSet>(std::move(s));
}

}  // namespace

TEST_CASE("threshold helpers") {
  CHECK(log2_ceil_plus2(0) == 1);
  CHECK(log2_ceil_plus2(1) == 2);
  CHECK(log2_ceil_plus2(2) == 2);
  CHECK(log2_ceil_plus2(1000) == 10);
  CHECK(scaled_limit(2.5, 10) == 25);
  CHECK(scaled_limit(std::numeric_limits<double>::infinity(), 10) == std::numeric_limits<std::size_t>::max());
  CHECK(scaled_limit(7.0 / 3.0, 3) == 7);
}

TEST_CASE("infinite thresholds accept the first order") {
  auto set = make_set(generate(DatasetKind::RandomCrossing, 12, 4).segments);
  VerifiedTsd v = build_verified_tsd(set, VerifierConfig{});
  CHECK(v.report.rebuilds == 0);
  CHECK(v.report.attempts.size() == 1);
  CHECK(v.report.attempts[0].accepted);
  CHECK(v.order == attempt_order(12, 1, 0));
  CHECK(recount_tsd(v.tsd, v.tsd.size(), v.tsd.depth()));
  CHECK_FALSE(recount_tsd(v.tsd, v.tsd.size() - 1, v.tsd.depth()));
  CHECK_FALSE(recount_tsd(v.tsd, v.tsd.size(), v.tsd.depth() - 1));

  auto sites = std::make_shared<const std::vector<Site>>(generate(DatasetKind::UniformSites, 30, 4).sites);
  VerifiedDelaunay d = build_verified_delaunay(sites, VerifierConfig{});
  CHECK(d.report.rebuilds == 0);
  CHECK(recount_delaunay(d.dag, d.dag.size(), d.dag.weighted_depth()));
  CHECK_FALSE(recount_delaunay(d.dag, d.dag.size(), d.dag.weighted_depth() - 1));
}

TEST_CASE("unattainable thresholds exhaust the rebuild budget") {
  auto set = make_set(generate(DatasetKind::RndHor, 20, 2).segments);
  VerifierConfig cfg;
  cfg.c_size = 2.0;  // below the 1 + 3(n + k) leaf floor
  cfg.max_rebuilds = 5;
  try {
    build_verified_tsd(set, cfg);
    FAIL("expected RebuildLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RebuildLimitExceeded);
  }
  cfg.c_size = -1.0;
  CHECK_THROWS_AS(build_verified_tsd(set, cfg), Error);
}

TEST_CASE("rejected attempts stop right after crossing a threshold") {
  auto set = make_set(generate(DatasetKind::RndHor, 200, 2).segments);
  Calibration cal = pilot_tsd(set, 50, 3);
  VerifierConfig cfg;
  cfg.c_depth = *std::min_element(cal.depth_ratios.begin(), cal.depth_ratios.end());
  cfg.max_rebuilds = std::nullopt;
  VerifiedTsd v = build_verified_tsd(set, cfg);
  REQUIRE(v.report.rebuilds > 0);
  for (const auto& a : v.report.attempts) {
    if (a.accepted) continue;
    // One insertion adds at most three levels below the deepest old leaf.
    CHECK(a.depth > v.report.depth_limit);
    CHECK(a.depth <= v.report.depth_limit + 3);
  }
  CHECK(v.report.attempts.back().accepted);
  CHECK(recount_tsd(v.tsd, v.report.size_limit, v.report.depth_limit));
}

TEST_CASE("single site triangulation") {
  auto sites = std::make_shared<const std::vector<Site>>(std::vector<Site>{Site{1, Point(3, 4)}});
  VerifierConfig cfg;
  cfg.c_depth = 1.0;  // limit 1 * ceil(log2 3) = 2
  cfg.c_size = 4.0;
  VerifiedDelaunay d = build_verified_delaunay(sites, cfg);
  CHECK(d.report.depth == 2);
  CHECK(d.report.rebuilds == 0);
}

TEST_CASE("calibrated thresholds rarely rebuild") {
  auto set = make_set(generate(DatasetKind::RandomNoncrossing, 150, 6).segments);
  Calibration cal = pilot_tsd(set, 100, 9);
  CHECK(cal.size_ratios.size() == 100);
  CHECK(cal.c_size >= *std::min_element(cal.size_ratios.begin(), cal.size_ratios.end()));
  VerifierConfig cfg;
  cfg.c_size = cal.c_size;
  cfg.c_depth = cal.c_depth;
  int rebuilds = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    VerifiedTsd v = build_verified_tsd(set, cfg);
    rebuilds += v.report.rebuilds;
    CHECK(recount_tsd(v.tsd, v.report.size_limit, v.report.depth_limit));
  }
  CHECK(rebuilds <= 10);
}

TEST_CASE("attempt orders are uniform") {
  // 4 elements: each of the 24 orders should appear with frequency 1/24.
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 24000;
  for (int k = 0; k < draws; ++k) counts[attempt_order(4, static_cast<std::uint64_t>(k / 8), k % 8)]++;
  CHECK(counts.size() == 24);
  const double p = 1.0 / 24.0, sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [order, c] : counts) CHECK(std::abs(c - draws * p) <= 3 * sigma);
}
