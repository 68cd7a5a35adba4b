#include "ric/experiments.hpp"

#include <ostream>

#include "ric/io.hpp"

namespace ric {

TrajectoryResult run_trajectory(std::shared_ptr<const SegmentSet> set, std::span<const std::size_t> order,
                                std::size_t search_depth_steps) {
  const Box bounds = default_bounds(*set);
  TrajectoryResult r{Tsd(set, bounds), {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    r.tsd.insert_segment(order[i]);
    if (i < search_depth_steps) r.search_depths.push_back(r.tsd.search_depth_exact());
  }
  return r;
}

bool run_tail(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed, bool exhaustive,
              std::ostream& csv, TailResult* result) {
  TailResult tail = exhaustive ? exhaustive_tail(set) : monte_carlo_tail(set, trials, seed);
  write_tail_csv(csv, tail);
  const bool passed = tail.passed;
  if (result) *result = std::move(tail);
  return passed;
}

bool run_oracles(std::shared_ptr<const SegmentSet> set, std::uint64_t seed, std::ostream& report) {
  OracleOptions options;
  options.seed = seed;
  const OracleReport oracle = brute_force_expectations(set, options);
  write_oracle_report(report, oracle);
  const bool passed = oracle.passed();

  Tsd tsd = build(set, identity_order(set->size()));
  const Events ev = extract_events(tsd.trajectory());
  report << "feasible sequences (file order):";
  for (const IndexSequence& s : feasible_sequences(ev.X)) {
    report << " (";
    for (std::size_t i = 0; i < s.size(); ++i) report << (i ? "," : "") << s[i];
    report << ')';
  }
  report << '\n';
  return passed;
}

}  // namespace ric
