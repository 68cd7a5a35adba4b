// Acceptance runs: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [criterion...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ric/datasets.hpp"
#include "ric/delaunay.hpp"
#include "ric/events.hpp"
#include "ric/trapezoidation.hpp"
#include "ric/verifier.hpp"

using namespace ric;

namespace {

struct Outcome {
  bool passed = true;
  std::string summary;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    if (!ok) {
      passed = false;
      notes.push_back(note);
    }
  }
};

std::shared_ptr<const SegmentSet> make_set(std::vector<Segment> s) {
  return std::make_shared<const SegmentSet>(std::move(s));
}

std::shared_ptr<const std::vector<Site>> make_sites(std::vector<Site> s) {
  return std::make_shared<const std::vector<Site>>(std::move(s));
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

// 1. Fixture: faces, D, event rows and feasible sequences, exact.
Outcome criterion1() {
  Outcome o;
  const Tsd tsd = build(make_set(four_segment_fixture()), identity_order(4));
  const auto& tr = tsd.trajectory();
  std::vector<std::size_t> faces;
  std::vector<int> d;
  for (const auto& s : tr) {
    faces.push_back(s.faces);
    d.push_back(s.D);
  }
  o.require(faces == std::vector<std::size_t>{4, 7, 10, 13}, "face counts differ");
  o.require(d == std::vector<int>{4, 5, 6, 4}, "D differs");
  const Events ev = extract_events(tr);
  const std::vector<std::vector<int>> rows{{1}, {1, 1}, {0, 0, 1}};
  for (int j = 2; j <= 4; ++j)
    for (int i = 1; i < j; ++i)
      o.require(ev.X.get(i, j) == (rows[static_cast<std::size_t>(j - 2)][static_cast<std::size_t>(i - 1)] == 1),
                fmt("X(%d,%d) differs", i, j));
  const std::vector<IndexSequence> expected{{1, 2}, {1, 2, 3}, {1, 2, 3, 4}, {1, 3}, {1, 3, 4}};
  o.require(feasible_sequences(ev.X) == expected, "feasible set differs");
  o.summary = "faces (4,7,10,13), D (4,5,6,4), rows (1),(1,1),(0,0,1), five feasible sequences";
  return o;
}

// 2. Structural identities on 1000 random instances.
Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  const DatasetKind kinds[] = {DatasetKind::RandomCrossing, DatasetKind::RandomNoncrossing, DatasetKind::RndHor};
  int face_bad = 0, bracket_bad = 0, o_bad = 0, c_bad = 0, crossing_instances = 0;
  long steps = 0;
  std::string first_o;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = size(rng);
    const DatasetKind kind = kinds[t % 3];
    auto set = make_set(generate(kind, n, static_cast<std::uint64_t>(t + 1)).segments);
    crossing_instances += set->k() > 0;
    const auto order = attempt_order(n, static_cast<std::uint64_t>(t + 1), 0);
    const Tsd tsd = build(set, order);
    const auto& tr = tsd.trajectory();
    std::vector<int> prio(n);
    for (std::size_t j = 0; j < n; ++j) prio[order[j]] = static_cast<int>(j + 1);
    std::vector<int> k_at(n + 1, 0);  // crossings among the first j segments
    for (auto [a, b] : set->crossings()) k_at[static_cast<std::size_t>(std::max(prio[a], prio[b]))]++;
    for (std::size_t j = 1; j <= n; ++j) k_at[j] += k_at[j - 1];

    const Events ev = extract_events(tr);
    const auto brackets = row_bracket_check(tr, ev.X);
    long c_sum = 0;
    for (const StepStats& s : tr) {
      ++steps;
      const auto j = static_cast<std::size_t>(s.j);
      face_bad += s.faces != 1 + 3 * (j + static_cast<std::size_t>(k_at[j]));
      bracket_bad += !brackets[j - 1];
      if (s.O != ev.Y.row_count(s.j)) {
        if (o_bad++ == 0)
          first_o = fmt("%s n=%zu seed %d step %d: O_j=%d, triple row count %d", to_string(kind).c_str(), n, t + 1,
                        s.j, s.O, ev.Y.row_count(s.j));
      }
      c_sum += s.C;
    }
    c_bad += c_sum != 3 * static_cast<long>(set->k());
  }
  o.require(face_bad == 0, fmt("face identity failed at %d steps", face_bad));
  o.require(bracket_bad == 0, fmt("row-sum brackets failed at %d steps", bracket_bad));
  o.require(o_bad == 0, fmt("O_j != triple row count at %d of %ld steps; first: %s", o_bad, steps, first_o.c_str()));
  o.require(c_bad == 0, fmt("sum C_j != 3k on %d instances", c_bad));
  o.summary = fmt("1000 instances (%d with crossings), %ld steps", crossing_instances, steps);
  return o;
}

// 3. Exhaustive oracles over all permutations.
Outcome criterion3() {
  Outcome o;
  struct Case {
    std::string name;
    std::vector<Segment> segments;
  };
  std::vector<Case> cases{{"fixture", four_segment_fixture()},
                          {"pair", {make_segment(0, Point(0, 0), Point(2, 0)), make_segment(1, Point(0, 1), Point(2, 1))}}};
  for (std::uint64_t seed : {1, 2}) {
    cases.push_back({fmt("random-noncrossing n=8 seed %d", int(seed)), generate(DatasetKind::RandomNoncrossing, 8, seed).segments});
    cases.push_back({fmt("random-crossing n=8 seed %d", int(seed)), generate(DatasetKind::RandomCrossing, 8, seed).segments});
  }
  cases.push_back({"rnd-hor n=8 seed 1", generate(DatasetKind::RndHor, 8, 1).segments});

  std::map<std::string, std::pair<int, int>> tally;  // name -> (passed, total)
  std::vector<std::string> order;
  for (const Case& c : cases) {
    const OracleReport r = brute_force_expectations(make_set(c.segments));
    for (const OracleCheck& check : r.checks) {
      if (!tally.count(check.name)) order.push_back(check.name);
      auto& [p, total] = tally[check.name];
      ++total;
      p += check.passed;
      if (!check.passed) {
        o.passed = false;
        o.notes.push_back(c.name + ", " + check.name + ": " + check.detail.substr(0, 160));
      }
    }
  }
  std::string s = fmt("%zu instances;", cases.size());
  for (const auto& name : order) s += fmt(" %s %d/%d;", name.c_str(), tally[name].first, tally[name].second);
  o.summary = s;
  return o;
}

// 4. Tail envelope and size CCDF monotonicity.
Outcome criterion4() {
  Outcome o;
  auto set = make_set(generate(DatasetKind::RandomNoncrossing, 200, 1).segments);
  const TailResult r = monte_carlo_tail(set, 2000, 4);
  double worst = -1;
  for (const TailRow& row : r.rows) {
    worst = std::max(worst, row.empirical_ccdf - std::min(row.envelope, 1.0) - row.slack);
    o.require(row.ok, fmt("T=%.2f: ccdf %.4f > envelope %.4g + slack %.4f", row.T, row.empirical_ccdf, row.envelope,
                          row.slack));
  }
  for (std::size_t i = 1; i < r.size_rows.size(); ++i)
    o.require(r.size_rows[i].empirical_ccdf <= r.size_rows[i - 1].empirical_ccdf,
              fmt("size CCDF rises at c=%.3f", r.size_rows[i].c));
  o.summary = fmt("n=200, 2000 trials, mean sum %.2f, %zu thresholds, largest ccdf minus (envelope + slack) %.3g", r.mean, r.rows.size(), worst);
  return o;
}

// 5. Depth concentration and the adversarial gap.
Outcome criterion5() {
  Outcome o;
  const std::size_t n = 10000;
  const double log2n = std::log2(static_cast<double>(n));
  auto ratio = [&](std::uint64_t seed, int* search_depth) {
    auto set = make_set(generate(DatasetKind::RndHor, n, seed).segments);
    const Tsd tsd = build(set, attempt_order(n, seed, 0));
    if (search_depth) *search_depth = tsd.search_depth_exact();
    return std::make_pair(static_cast<double>(tsd.depth()) / log2n, tsd.depth());
  };
  std::vector<double> pilot;
  for (std::uint64_t seed = 1001; seed <= 1020; ++seed) pilot.push_back(ratio(seed, nullptr).first);
  const double med = median(pilot);

  double lo = 1e9, hi = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    int sd = 0;
    const auto [r, depth] = ratio(seed, &sd);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    o.require(std::abs(r - med) <= 0.2 * med, fmt("seed %d: depth/log2 n = %.3f", int(seed), r));
    o.require(sd <= depth, fmt("seed %d: search depth %d > depth %d", int(seed), sd, depth));
  }

  auto adv = make_set(adversarial_depth_segments(100));
  const int adv_depth = build(adv, identity_order(100)).depth();
  o.require(adv_depth >= 50, fmt("adversarial depth %d < 50", adv_depth));
  const double bound = 1.2 * med * std::log2(100.0);
  int worst = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) worst = std::max(worst, build(adv, attempt_order(100, seed, 0)).depth());
  o.require(worst <= bound, fmt("random-order depth %d > %.1f", worst, bound));
  o.summary = fmt("pilot median depth/log2 n %.3f, 50 seeds in [%.3f, %.3f], search depth <= depth; adversarial "
                  "depth %d vs random <= %d (bound %.1f)",
                  med, lo, hi, adv_depth, worst, bound);
  return o;
}

// 6. Delaunay suite.
Outcome criterion6() {
  Outcome o;
  long steps = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sites = make_sites(generate(DatasetKind::UniformSites, 500, seed).sites);
    const DelaunayHistory dag = build_delaunay(sites, attempt_order(500, seed, 0));
    const EventMatrix X = delaunay_events(dag.trajectory());
    std::vector<int> kept(501, 0);  // triangles created at step j and part of T(S_j)
    for (const auto& t : dag.triangles())
      if (t.final && t.creation_step > 0) kept[static_cast<std::size_t>(t.creation_step)]++;
    for (const auto& s : dag.trajectory()) {
      ++steps;
      o.require(X.row_sum(s.j) == s.D, fmt("seed %d step %d: row sum %d vs D %d", int(seed), s.j, X.row_sum(s.j), s.D));
      o.require(kept[static_cast<std::size_t>(s.j)] == s.D,
                fmt("seed %d step %d: %d new triangles vs D %d", int(seed), s.j, kept[static_cast<std::size_t>(s.j)], s.D));
    }
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sites = make_sites(generate(DatasetKind::UniformSites, 200, seed).sites);
    o.require(empty_circumcircle_check(build_delaunay(sites, attempt_order(200, seed, 0))),
              fmt("n=200 seed %d: non-empty circumcircle", int(seed)));
    auto small = make_sites(generate(DatasetKind::UniformSites, 50, seed).sites);
    const DelaunayHistory dag = build_delaunay(small, attempt_order(50, seed, 0));
    o.require(dag.weighted_depth() == dag.longest_weighted_path(),
              fmt("n=50 seed %d: tracked %d vs longest path %d", int(seed), dag.weighted_depth(), dag.longest_weighted_path()));
  }

  auto sites = make_sites(generate(DatasetKind::UniformSites, 500, 1).sites);
  const DelaunayHistory dag = build_delaunay(sites, attempt_order(500, 1, 0));
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::int64_t> coord(0, kGridSize - 1);
  int queries = 0, max_comparisons = 0;
  while (queries < 1000) {
    const Point q(Rational(3 * coord(rng) + 1, 3), Rational(3 * coord(rng) + 2, 3));
    TriangleLocation v1, v2;
    try {
      v1 = dag.locate_v1(q);
      v2 = dag.locate_v2(q);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateQuery) continue;
      throw;
    }
    ++queries;
    max_comparisons = std::max(max_comparisons, v2.comparisons);
    o.require(v2.comparisons <= dag.weighted_depth(),
              fmt("query %d: %d comparisons > weighted depth %d", queries, v2.comparisons, dag.weighted_depth()));
    o.require(v1.triangle == v2.triangle, fmt("query %d: v1 and v2 disagree", queries));
  }
  o.summary = fmt("%ld steps D_j = row sum; 20 empty-circle and depth checks; 1000 queries, max %d comparisons vs "
                  "weighted depth %d",
                  steps, max_comparisons, dag.weighted_depth());
  return o;
}

// 7. Verifier with pilot-calibrated thresholds.
Outcome criterion7() {
  Outcome o;
  const std::size_t n = 1000;
  std::string summary;
  {
    auto set = make_set(generate(DatasetKind::RndHor, n, 1).segments);
    const Calibration cal = pilot_tsd(set, 200, 1);
    VerifierConfig cfg;
    cfg.c_size = cal.c_size;
    cfg.c_depth = cal.c_depth;
    int rebuilds = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      cfg.seed = seed;
      const VerifiedTsd v = build_verified_tsd(set, cfg);
      rebuilds += v.report.rebuilds;
      o.require(recount_tsd(v.tsd, v.report.size_limit, v.report.depth_limit), fmt("tsd seed %d: recount fails", int(seed)));
    }
    const double mean = rebuilds / 100.0;
    o.require(mean <= 0.5, fmt("tsd mean rebuilds %.2f", mean));
    summary += fmt("tsd c_size %.3f c_depth %.3f mean rebuilds %.2f; ", cal.c_size, cal.c_depth, mean);
  }
  {
    auto sites = make_sites(generate(DatasetKind::UniformSites, n, 1).sites);
    const Calibration cal = pilot_delaunay(sites, 200, 1);
    VerifierConfig cfg;
    cfg.c_size = cal.c_size;
    cfg.c_depth = cal.c_depth;
    int rebuilds = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      cfg.seed = seed;
      const VerifiedDelaunay v = build_verified_delaunay(sites, cfg);
      rebuilds += v.report.rebuilds;
      o.require(recount_delaunay(v.dag, v.report.size_limit, v.report.depth_limit),
                fmt("delaunay seed %d: recount fails", int(seed)));
    }
    const double mean = rebuilds / 100.0;
    o.require(mean <= 0.5, fmt("delaunay mean rebuilds %.2f", mean));
    summary += fmt("delaunay c_size %.3f c_depth %.3f mean rebuilds %.2f", cal.c_size, cal.c_depth, mean);
  }
  o.summary = summary;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7};
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty())
    for (int c = 1; c <= 7; ++c) selected.push_back(c);

  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > 7) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s (%.1f s) %s\n", c, o.passed ? "PASS" : "FAIL", secs, o.summary.c_str());
    const std::size_t shown = std::min<std::size_t>(o.notes.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) std::printf("    %s\n", o.notes[i].c_str());
    if (o.notes.size() > shown) std::printf("    ... %zu more\n", o.notes.size() - shown);
    std::fflush(stdout);
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
