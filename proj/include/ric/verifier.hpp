#pragma once

// Las Vegas wrappers: rebuild with a fresh permutation until the history
// meets its size and depth thresholds.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "ric/delaunay.hpp"
#include "ric/trapezoidation.hpp"

namespace ric {

struct VerifierConfig {
  double c_size = std::numeric_limits<double>::infinity();
  double c_depth = std::numeric_limits<double>::infinity();
  std::optional<int> max_rebuilds = 64;  // nullopt: unbounded
  std::uint64_t seed = 1;
};

struct AttemptRecord {
  int attempt = 0;
  std::size_t size = 0;
  int depth = 0;
  bool accepted = false;
};

struct VerifierReport {
  int rebuilds = 0;
  std::size_t size = 0;
  int depth = 0;  // weighted depth for triangulations
  std::size_t size_limit = 0;
  int depth_limit = 0;
  std::vector<AttemptRecord> attempts;
};

/// ceil(log2(n + 2)).
int log2_ceil_plus2(std::size_t n);

/// floor(c * base), saturating; infinite c gives the maximum value.
std::size_t scaled_limit(double c, std::size_t base);

/// Insertion order used by the given attempt: a uniform permutation drawn
/// from the attempt's own stream.
std::vector<std::size_t> attempt_order(std::size_t n, std::uint64_t seed, int attempt);

struct VerifiedTsd {
  Tsd tsd;
  std::vector<std::size_t> order;
  VerifierReport report;
};

/// Accepts when size <= c_size (n + k + 1) and depth <= c_depth ceil(log2(n+2)).
/// Thresholds are checked after every insertion. Throws RebuildLimitExceeded
/// or InvalidArgument (non-positive multipliers).
VerifiedTsd build_verified_tsd(std::shared_ptr<const SegmentSet> set, const VerifierConfig& cfg);

struct VerifiedDelaunay {
  DelaunayHistory dag;
  std::vector<std::size_t> order;
  VerifierReport report;
};

/// Accepts when history size <= c_size n and weighted depth <= c_depth ceil(log2(n+2)).
VerifiedDelaunay build_verified_delaunay(std::shared_ptr<const std::vector<Site>> sites, const VerifierConfig& cfg);

/// Recounts size and depth from the node links alone (reachable nodes,
/// longest path) and compares them with the limits.
bool recount_tsd(const Tsd& tsd, std::size_t size_limit, int depth_limit);
bool recount_delaunay(const DelaunayHistory& dag, std::size_t size_limit, int depth_limit);

struct Calibration {
  double c_size = 0;
  double c_depth = 0;
  std::vector<double> size_ratios;
  std::vector<double> depth_ratios;
};

/// Measures size and depth ratios over `trials` random orders and returns
/// their 99th percentiles as multipliers.
Calibration pilot_tsd(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed);
Calibration pilot_delaunay(std::shared_ptr<const std::vector<Site>> sites, std::size_t trials, std::uint64_t seed);

}  // namespace ric
