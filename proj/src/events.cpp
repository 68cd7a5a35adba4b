#include "ric/events.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace ric {

EventMatrix::EventMatrix(int n, int pseudo)
    : n_(n),
      pseudo_(pseudo),
      bits_(n > 1 ? index(n - 1, n) + 1 : 0, 0),
      pseudo_bits_(static_cast<std::size_t>(std::max(n, 0)) * static_cast<std::size_t>(pseudo), 0) {}

bool EventMatrix::get_pseudo(int p, int j) const {
  return pseudo_bits_[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(pseudo_) + static_cast<std::size_t>(p)] != 0;
}

void EventMatrix::set_pseudo(int p, int j, bool value) {
  pseudo_bits_[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(pseudo_) + static_cast<std::size_t>(p)] =
      value ? 1 : 0;
}

int EventMatrix::row_sum(int j) const {
  int s = 0;
  for (int i = 1; i < j; ++i) s += get(i, j);
  for (int p = 0; p < pseudo_; ++p) s += get_pseudo(p, j);
  return s;
}

int EventMatrix::column_sum(int i) const {
  int s = 0;
  for (int j = i + 1; j <= n_; ++j) s += get(i, j);
  return s;
}

int EventMatrix::total() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

int TripleEvents::row_count(int j) const {
  return static_cast<int>(std::count_if(triples.begin(), triples.end(), [j](const auto& t) { return t[2] == j; }));
}

Events extract_events(std::span<const StepStats> trajectory) {
  const int n = static_cast<int>(trajectory.size());
  Events ev{EventMatrix(n), {}};
  for (const StepStats& st : trajectory) {
    for (int i : st.adjacent)
      if (i < st.j) ev.X.set(i, st.j);
    for (auto [h, i] : st.visible_crossings) ev.Y.triples.push_back({h, i, st.j});
  }
  std::sort(ev.Y.triples.begin(), ev.Y.triples.end());
  return ev;
}

std::vector<bool> row_bracket_check(std::span<const StepStats> trajectory, const EventMatrix& X) {
  std::vector<bool> out;
  out.reserve(trajectory.size());
  for (const StepStats& st : trajectory) {
    if (st.j < 2) {
      out.push_back(true);
      continue;
    }
    const int row = X.row_sum(st.j);
    // E/6 <= row <= 3E, kept in integers.
    out.push_back(st.E <= 6 * row && row <= 3 * st.E);
  }
  return out;
}

std::vector<IndexSequence> feasible_sequences(const EventMatrix& X) {
  const int n = X.n();
  if (n > 24) throw Error(ErrorCode::TooLarge, "feasible-sequence enumeration is limited to n <= 24");
  std::vector<IndexSequence> out;
  IndexSequence cur{1};
  auto rec = [&](auto&& self) -> void {
    const int last = cur.back();
    for (int b = last + 1; b <= n; ++b) {
      if (!X.get(last, b)) continue;
      cur.push_back(b);
      out.push_back(cur);
      self(self);
      cur.pop_back();
    }
  };
  if (n >= 2) rec(rec);
  return out;
}

std::vector<std::pair<int, int>> sequence_events(const IndexSequence& sigma, int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(std::max(n - 1, 0)));
  std::size_t k = 0;
  for (int j = 2; j <= n; ++j) {
    while (k + 1 < sigma.size() && sigma[k + 1] < j) ++k;
    out.emplace_back(sigma[k], j);
  }
  return out;
}

SequenceStats sequence_stats(const IndexSequence& sigma, const EventMatrix& X, double threshold) {
  if (sigma.empty() || sigma.front() != 1 || !std::is_sorted(sigma.begin(), sigma.end()) ||
      std::adjacent_find(sigma.begin(), sigma.end()) != sigma.end() || sigma.back() > X.n())
    throw Error(ErrorCode::InvalidArgument, "not an increasing index sequence starting at 1");
  SequenceStats st;
  for (auto [i, j] : sequence_events(sigma, X.n())) st.sigma_value += X.get(i, j);
  int on_path = 0;
  st.feasible = true;
  for (std::size_t k = 1; k < sigma.size(); ++k) {
    const bool x = X.get(sigma[k - 1], sigma[k]);
    on_path += x;
    st.feasible = st.feasible && x;
  }
  st.sigma_prime = st.sigma_value - on_path;
  st.B = st.sigma_value >= threshold;
  st.B_prime = st.sigma_prime >= threshold;
  return st;
}

std::vector<std::vector<int>> truncated_column_sums(const EventMatrix& X) {
  const int n = X.n();
  std::vector<std::vector<int>> c(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), 0));
  for (int i = 1; i <= n; ++i)
    for (int k = i + 1; k <= n; ++k)
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] + X.get(i, k);
  return c;
}

int smallest_delta(int gamma) {
  // 12 gamma j / (j - 1) is largest at j = 2.
  return 24 * gamma;
}

double tail_envelope(double mean, double T) { return std::exp(mean - T * std::log(2.0)); }

std::vector<double> threshold_scan(double mean) {
  std::vector<double> out;
  for (int m = 0; m <= 40; ++m) out.push_back(mean * (1.0 + m / 10.0));
  return out;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct Trial {
  int sum = 0;
  std::size_t size = 0;
  int depth = 0;
};

Trial run_trial(const std::shared_ptr<const SegmentSet>& set, std::span<const std::size_t> order) {
  Tsd tsd = build(set, order);
  Trial t;
  t.sum = extract_events(tsd.trajectory()).X.total();
  t.size = tsd.size();
  t.depth = tsd.depth();
  return t;
}

// Builds the CCDF tables from per-trial values, each trial weighted equally.
TailResult tabulate(const std::vector<Trial>& trials, std::size_t n) {
  TailResult r;
  const auto count = static_cast<double>(trials.size());
  for (const Trial& t : trials) {
    r.sums.push_back(t.sum);
    r.sizes.push_back(t.size);
    r.depths.push_back(t.depth);
  }
  r.mean = std::accumulate(r.sums.begin(), r.sums.end(), 0.0) / count;
  for (double T : threshold_scan(r.mean)) {
    TailRow row;
    row.T = T;
    row.trials = trials.size();
    const auto hits = std::count_if(r.sums.begin(), r.sums.end(), [T](int s) { return s >= T; });
    row.empirical_ccdf = static_cast<double>(hits) / count;
    row.envelope = tail_envelope(r.mean, T);
    const double p = std::min(row.envelope, 1.0);
    row.slack = 3.0 * std::sqrt(p * (1.0 - p) / count);
    row.ok = row.empirical_ccdf <= p + row.slack;
    r.passed = r.passed && row.ok;
    r.rows.push_back(row);
  }
  const double mean_size = std::accumulate(r.sizes.begin(), r.sizes.end(), 0.0) / count;
  const double per = n > 0 ? mean_size / static_cast<double>(n) : mean_size;
  for (double c : threshold_scan(per)) {
    const double cut = c * static_cast<double>(std::max<std::size_t>(n, 1));
    const auto hits = std::count_if(r.sizes.begin(), r.sizes.end(), [cut](std::size_t s) { return s >= cut; });
    r.size_rows.push_back(SizeRow{c, static_cast<double>(hits) / count});
  }
  return r;
}

}  // namespace

TailResult monte_carlo_tail(std::shared_ptr<const SegmentSet> set, std::size_t trials, std::uint64_t seed,
                            unsigned threads) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  std::vector<Trial> results(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<std::size_t> order(set->size());
    for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 rng(substream_seed(seed, t));
      std::shuffle(order.begin(), order.end(), rng);
      results[t] = run_trial(set, order);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return tabulate(results, set->size());
}

TailResult exhaustive_tail(std::shared_ptr<const SegmentSet> set) {
  if (set->size() > 8) throw Error(ErrorCode::TooLarge, "exhaustive enumeration is limited to n <= 8");
  std::vector<Trial> results;
  auto order = identity_order(set->size());
  do results.push_back(run_trial(set, order));
  while (std::next_permutation(order.begin(), order.end()));
  return tabulate(results, set->size());
}

}  // namespace ric
