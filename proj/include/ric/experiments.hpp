#pragma once

// Experiment drivers shared by the CLI and the acceptance runs.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ric/events.hpp"
#include "ric/trapezoidation.hpp"

namespace ric {

struct TrajectoryResult {
  Tsd tsd;
  // Exact search depth after each of the first min(n, m) steps.
  std::vector<int> search_depths;
};

/// Builds under `order`, computing the exact search depth after each of the
/// first `search_depth_steps` insertions.
TrajectoryResult run_trajectory(std::shared_ptr<const SegmentSet> set, std::span<const std::size_t> order,
                                std::size_t search_depth_steps);

/// Writes the tail table; returns false if any row exceeds envelope plus slack.
/// `exhaustive` enumerates all permutations instead of sampling.
bool run_tail(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed, bool exhaustive,
              std::ostream& csv, TailResult* result = nullptr);

/// Exhaustive expectations and overcount inequalities, then the
/// feasible sequences of the file order. Writes a plain-text report and
/// returns whether every check passed.
bool run_oracles(std::shared_ptr<const SegmentSet> set, std::uint64_t seed, std::ostream& report);

}  // namespace ric
