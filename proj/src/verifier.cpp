#include "ric/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "ric/events.hpp"

namespace ric {

namespace {

void validate(const VerifierConfig& cfg) {
  if (!(cfg.c_size > 0) || !(cfg.c_depth > 0))
    throw Error(ErrorCode::InvalidArgument, "threshold multipliers must be positive");
}

int depth_limit(double c, std::size_t n) {
  const std::size_t v = scaled_limit(c, static_cast<std::size_t>(log2_ceil_plus2(n)));
  return static_cast<int>(std::min<std::size_t>(v, static_cast<std::size_t>(std::numeric_limits<int>::max())));
}

bool out_of_attempts(const VerifierConfig& cfg, int attempt) {
  return cfg.max_rebuilds && attempt > *cfg.max_rebuilds;
}

double percentile99(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(k, 1) - 1];
}

// Pilot orders come from a stream disjoint from the verifier's attempts.
constexpr std::uint64_t kPilotStream = 0x70696c6f74ULL;

}  // namespace

int log2_ceil_plus2(std::size_t n) { return static_cast<int>(std::bit_width(n + 1)); }

std::size_t scaled_limit(double c, std::size_t base) {
  // The slack absorbs rounding when c came from a measured ratio over the same base.
  const double v = std::floor(c * static_cast<double>(base) + 1e-9);
  if (!(v < 1.8e19)) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> attempt_order(std::size_t n, std::uint64_t seed, int attempt) {
  auto order = identity_order(n);
  std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(attempt)));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

VerifiedTsd build_verified_tsd(std::shared_ptr<const SegmentSet> set, const VerifierConfig& cfg) {
  validate(cfg);
  const std::size_t n = set->size();
  VerifierReport report;
  report.size_limit = scaled_limit(cfg.c_size, n + set->k() + 1);
  report.depth_limit = depth_limit(cfg.c_depth, n);
  const Box bounds = default_bounds(*set);
  for (int attempt = 0;; ++attempt) {
    if (out_of_attempts(cfg, attempt))
      throw Error(ErrorCode::RebuildLimitExceeded, std::to_string(attempt) + " attempts exceeded the thresholds");
    auto order = attempt_order(n, cfg.seed, attempt);
    Tsd tsd(set, bounds);
    bool ok = tsd.size() <= report.size_limit && tsd.depth() <= report.depth_limit;
    for (std::size_t i = 0; i < n && ok; ++i) {
      tsd.insert_segment(order[i]);
      ok = tsd.size() <= report.size_limit && tsd.depth() <= report.depth_limit;
    }
    report.attempts.push_back(AttemptRecord{attempt, tsd.size(), tsd.depth(), ok});
    if (ok) {
      report.rebuilds = attempt;
      report.size = tsd.size();
      report.depth = tsd.depth();
      return VerifiedTsd{std::move(tsd), std::move(order), std::move(report)};
    }
  }
}

VerifiedDelaunay build_verified_delaunay(std::shared_ptr<const std::vector<Site>> sites, const VerifierConfig& cfg) {
  validate(cfg);
  const std::size_t n = sites->size();
  VerifierReport report;
  report.size_limit = scaled_limit(cfg.c_size, n);
  report.depth_limit = depth_limit(cfg.c_depth, n);
  for (int attempt = 0;; ++attempt) {
    if (out_of_attempts(cfg, attempt))
      throw Error(ErrorCode::RebuildLimitExceeded, std::to_string(attempt) + " attempts exceeded the thresholds");
    auto order = attempt_order(n, cfg.seed, attempt);
    DelaunayHistory dag(sites);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      dag.insert_site(order[i]);
      ok = dag.size() <= report.size_limit && dag.weighted_depth() <= report.depth_limit;
    }
    report.attempts.push_back(AttemptRecord{attempt, dag.size(), dag.weighted_depth(), ok});
    if (ok) {
      report.rebuilds = attempt;
      report.size = dag.size();
      report.depth = dag.weighted_depth();
      return VerifiedDelaunay{std::move(dag), std::move(order), std::move(report)};
    }
  }
}

bool recount_tsd(const Tsd& tsd, std::size_t size_limit, int depth_limit) {
  const auto nodes = tsd.nodes();
  std::vector<int> longest(nodes.size(), -1);
  std::size_t reached = 0;
  auto visit = [&](auto&& self, int id) -> int {
    int& memo = longest[static_cast<std::size_t>(id)];
    if (memo >= 0) return memo;
    ++reached;
    const TsdNode& node = nodes[static_cast<std::size_t>(id)];
    int best = 0;
    if (node.kind != TsdNode::Kind::Leaf)
      for (int c : node.child) best = std::max(best, 1 + self(self, c));
    memo = best;
    return best;
  };
  const int depth = visit(visit, tsd.root());
  return reached <= size_limit && depth <= depth_limit;
}

bool recount_delaunay(const DelaunayHistory& dag, std::size_t size_limit, int depth_limit) {
  const auto tris = dag.triangles();
  std::vector<char> seen(tris.size(), 0);
  std::vector<int> stack{0};
  std::size_t reached = 0;
  seen[0] = 1;
  while (!stack.empty()) {
    const auto t = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    ++reached;
    for (int k = 0; k < tris[t].child_count; ++k) {
      const auto c = static_cast<std::size_t>(tris[t].children[static_cast<std::size_t>(k)]);
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(static_cast<int>(c));
      }
    }
  }
  return reached <= size_limit && dag.longest_weighted_path() <= depth_limit;
}

Calibration pilot_tsd(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "pilot needs at least one trial");
  Calibration cal;
  const std::size_t n = set->size();
  const auto size_base = static_cast<double>(n + set->k() + 1);
  const auto depth_base = static_cast<double>(log2_ceil_plus2(n));
  const Box bounds = default_bounds(*set);
  for (std::size_t t = 0; t < trials; ++t) {
    auto order = attempt_order(n, substream_seed(seed, kPilotStream), static_cast<int>(t));
    Tsd tsd = build(set, order, bounds);
    cal.size_ratios.push_back(static_cast<double>(tsd.size()) / size_base);
    cal.depth_ratios.push_back(static_cast<double>(tsd.depth()) / depth_base);
  }
  cal.c_size = percentile99(cal.size_ratios);
  cal.c_depth = percentile99(cal.depth_ratios);
  return cal;
}

Calibration pilot_delaunay(std::shared_ptr<const std::vector<Site>> sites, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "pilot needs at least one trial");
  Calibration cal;
  const std::size_t n = sites->size();
  const auto depth_base = static_cast<double>(log2_ceil_plus2(n));
  for (std::size_t t = 0; t < trials; ++t) {
    auto order = attempt_order(n, substream_seed(seed, kPilotStream), static_cast<int>(t));
    DelaunayHistory dag = build_delaunay(sites, order);
    cal.size_ratios.push_back(static_cast<double>(dag.size()) / static_cast<double>(std::max<std::size_t>(n, 1)));
    cal.depth_ratios.push_back(static_cast<double>(dag.weighted_depth()) / depth_base);
  }
  cal.c_size = percentile99(cal.size_ratios);
  cal.c_depth = percentile99(cal.depth_ratios);
  return cal;
}

}  // namespace ric
