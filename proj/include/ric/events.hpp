#pragma once

// Pairwise events X(i,j), triple events Y(h,i,j), index sequences and the
// exhaustive oracles over all permutations of small instances.

#include <array>
#include <cstdint>
#include <span>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "ric/geometry.hpp"
#include "ric/trapezoidation.hpp"

namespace ric {

/// Strict lower triangle of pairwise outcomes, indices are 1-based priorities.
/// Optionally carries pseudo columns (bounding vertices of a triangulation)
/// that count towards row sums but not towards total().
class EventMatrix {
 public:
  EventMatrix() = default;
  explicit EventMatrix(int n, int pseudo = 0);

  int n() const { return n_; }
  int pseudo() const { return pseudo_; }
  bool get(int i, int j) const { return bits_[index(i, j)] != 0; }
  void set(int i, int j, bool value = true) { bits_[index(i, j)] = value ? 1 : 0; }
  bool get_pseudo(int p, int j) const;
  void set_pseudo(int p, int j, bool value = true);

  /// Sum over row j, pseudo columns included.
  int row_sum(int j) const;
  int column_sum(int i) const;
  /// Sum of all real events.
  int total() const;

 private:
  static std::size_t index(int i, int j) {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(j - 2) / 2 + static_cast<std::size_t>(i - 1);
  }
  int n_ = 0;
  int pseudo_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint8_t> pseudo_bits_;  // row-major, pseudo_ per row
};

struct TripleEvents {
  std::vector<std::array<int, 3>> triples;  // (h, i, j), sorted
  int row_count(int j) const;
};

struct Events {
  EventMatrix X;
  TripleEvents Y;
};

Events extract_events(std::span<const StepStats> trajectory);

/// Per step j = 1..n: E_j/6 <= row sum <= 3 E_j (true at j = 1).
std::vector<bool> row_bracket_check(std::span<const StepStats> trajectory, const EventMatrix& X);

using IndexSequence = std::vector<int>;

/// All feasible sequences (1 = b0 < ... < bl <= n, l >= 1), lexicographic.
/// Throws TooLarge above n = 24.
std::vector<IndexSequence> feasible_sequences(const EventMatrix& X);

/// The n-1 events of a sequence: X(b(j), j) for j = 2..n with b(j) the
/// largest element below j.
std::vector<std::pair<int, int>> sequence_events(const IndexSequence& sigma, int n);

struct SequenceStats {
  int sigma_value = 0;
  int sigma_prime = 0;
  bool feasible = false;
  bool B = false;
  bool B_prime = false;
};

SequenceStats sequence_stats(const IndexSequence& sigma, const EventMatrix& X, double threshold);

/// C[i][k] = sum over i < j <= k of X(i,j), 1-based, (n+1) x (n+1).
std::vector<std::vector<int>> truncated_column_sums(const EventMatrix& X);

struct TailParams {
  int gamma = 4;
  int delta = 96;
  double beta_prime = 710.0;  // above delta * e^2
  double beta = 1420.0;
};

/// Smallest integer delta with 12 gamma / (j - 1) <= delta / j for all j >= 2.
int smallest_delta(int gamma);

/// exp(mean - T ln 2), unclamped.
double tail_envelope(double mean, double T);

struct TailRow {
  double T = 0;
  double empirical_ccdf = 0;
  double envelope = 0;
  std::size_t trials = 0;
  double slack = 0;  // 3 binomial standard deviations
  bool ok = true;
};

struct SizeRow {
  double c = 0;  // threshold multiplier over n
  double empirical_ccdf = 0;
};

struct TailResult {
  std::vector<TailRow> rows;
  std::vector<SizeRow> size_rows;
  double mean = 0;
  std::vector<int> sums;          // sum of X per trial
  std::vector<std::size_t> sizes;  // TSD size per trial
  std::vector<int> depths;
  bool passed = true;
};

/// Independent builds under fresh permutations; trials run on `threads`
/// workers with per-trial seeded streams, so results do not depend on it.
TailResult monte_carlo_tail(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed,
                            unsigned threads = 0);

/// Same table over all n! permutations (n <= 8), each weighted equally.
TailResult exhaustive_tail(std::shared_ptr<const SegmentSet> set);

/// Threshold scan used by the tail tables: mean * (1 + m/10), m = 0..40.
std::vector<double> threshold_scan(double mean);

// --- exhaustive oracles -----------------------------------------------------

struct OracleCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct OracleOptions {
  TailParams params;
  int sampled_pairs = 20;    // (sigma, Y) independence samples
  int sampled_triples = 20;  // conditioning-invariance samples
  std::uint64_t seed = 1;
};

struct OracleReport {
  std::size_t n = 0;
  std::size_t permutations = 0;
  // E[X(i,j)] as (i, j, value), and E[D_j].
  std::vector<std::tuple<int, int, Rational>> expected_x;
  std::vector<Rational> expected_d;
  Rational expected_feasible;
  std::vector<OracleCheck> checks;
  bool passed() const;
};

/// Enumerates all n! permutations (n <= 8, else TooLarge) and checks the
/// harmonic brackets, E[D_j] bound, product formula for feasibility,
/// independence within sequences, conditioning invariance and the bound on
/// the expected number of feasible sequences. All exact.
OracleReport brute_force_expectations(std::shared_ptr<const SegmentSet> set, const OracleOptions& options = {});

struct OvercountResult {
  Rational lhs;
  Rational rhs;
  bool strict = false;
};

/// lhs = sum over i1 < ... < il <= n of 1/(i1...il), rhs = H_n^l / l!.
/// Requires 2 <= l <= 6 and l <= n <= 60.
OvercountResult overcount_check(int n, int l);

/// Harmonic number H_n as an exact rational.
Rational harmonic(int n);

/// 64-bit seed for trial `index` derived from a base seed (splitmix64).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ric
