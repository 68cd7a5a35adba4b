#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "ric/events.hpp"

namespace ric {

namespace {

// Bit of X(i,j) in a 64-bit outcome mask (n <= 8 needs 28 bits).
int bit(int i, int j) { return (j - 1) * (j - 2) / 2 + (i - 1); }

std::uint64_t mask_of(const std::vector<std::pair<int, int>>& events) {
  std::uint64_t m = 0;
  for (auto [i, j] : events) m |= std::uint64_t{1} << bit(i, j);
  return m;
}

std::string sequence_text(const IndexSequence& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k];
  os << ')';
  return os.str();
}

std::vector<IndexSequence> all_sequences(int n) {
  std::vector<IndexSequence> out;
  for (std::uint32_t rest = 1; rest < (1u << (n - 1)); ++rest) {
    IndexSequence s{1};
    for (int b = 2; b <= n; ++b)
      if (rest >> (b - 2) & 1u) s.push_back(b);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Outcomes {
  int n = 0;
  std::vector<std::uint64_t> masks;            // per permutation
  std::vector<std::vector<std::size_t>> perms;  // segment index per step
  std::vector<long> d_sums;                       // per step j, index j-1
};

Outcomes enumerate(const std::shared_ptr<const SegmentSet>& set) {
  Outcomes out;
  out.n = static_cast<int>(set->size());
  out.d_sums.assign(static_cast<std::size_t>(out.n), 0);
  auto order = identity_order(set->size());
  do {
    Tsd tsd = build(set, order);
    std::uint64_t m = 0;
    for (const StepStats& st : tsd.trajectory()) {
      out.d_sums[static_cast<std::size_t>(st.j - 1)] += st.D;
      for (int i : st.adjacent) m |= std::uint64_t{1} << bit(i, st.j);
    }
    out.masks.push_back(m);
    out.perms.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational probability(const Outcomes& o, std::uint64_t need) {
  long hits = 0;
  for (std::uint64_t m : o.masks) hits += (m & need) == need;
  return ratio(hits, static_cast<long>(o.masks.size()));
}

}  // namespace

bool OracleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

OracleReport brute_force_expectations(std::shared_ptr<const SegmentSet> set, const OracleOptions& options) {
  const int n = static_cast<int>(set->size());
  if (n > 8) throw Error(ErrorCode::TooLarge, "exhaustive oracles are limited to n <= 8");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "empty instance");
  const Outcomes o = enumerate(set);
  const auto N = static_cast<long>(o.masks.size());
  const int gamma = options.params.gamma;

  OracleReport r;
  r.n = static_cast<std::size_t>(n);
  r.permutations = o.masks.size();

  // Harmonic brackets on every pairwise event.
  OracleCheck brackets{"harmonic brackets", true, ""};
  std::map<std::pair<int, int>, Rational> px;
  for (int j = 2; j <= n; ++j) {
    for (int i = 1; i < j; ++i) {
      Rational p = probability(o, std::uint64_t{1} << bit(i, j));
      px[{i, j}] = p;
      r.expected_x.emplace_back(i, j, p);
      if (p < ratio(1, j - 1) || p > ratio(12 * gamma, j - 1)) {
        brackets.passed = false;
        brackets.detail += "E[X(" + std::to_string(i) + "," + std::to_string(j) + ")] = " + to_string(p) + "; ";
      }
    }
  }
  r.checks.push_back(brackets);

  OracleCheck dbound{"E[D_j] <= 4 gamma", true, ""};
  for (int j = 1; j <= n; ++j) {
    const Rational e = ratio(o.d_sums[static_cast<std::size_t>(j - 1)], N);
    r.expected_d.push_back(e);
    if (e > Rational(4 * gamma)) {
      dbound.passed = false;
      dbound.detail += "E[D_" + std::to_string(j) + "] = " + to_string(e) + "; ";
    }
  }
  r.checks.push_back(dbound);

  // Product formula for feasibility, over every sequence.
  OracleCheck product{"feasibility product formula", true, ""};
  const auto sequences = all_sequences(n);
  r.expected_feasible = 0;
  for (const IndexSequence& s : sequences) {
    std::vector<std::pair<int, int>> path;
    Rational rhs = 1;
    for (std::size_t k = 1; k < s.size(); ++k) {
      path.emplace_back(s[k - 1], s[k]);
      rhs *= px[{s[k - 1], s[k]}];
    }
    const Rational lhs = probability(o, mask_of(path));
    r.expected_feasible += lhs;
    if (lhs != rhs) {
      product.passed = false;
      product.detail += sequence_text(s) + ": " + to_string(lhs) + " vs " + to_string(rhs) + "; ";
    }
  }
  r.checks.push_back(product);

  std::mt19937_64 rng(options.seed);

  // Independence within X(sigma) for sampled subsets Y.
  OracleCheck indep{"independence within sequences", true, ""};
  if (n >= 3) {
    for (int sample = 0; sample < options.sampled_pairs; ++sample) {
      const IndexSequence& s =
          sequences[std::uniform_int_distribution<std::size_t>(0, sequences.size() - 1)(rng)];
      const auto events = sequence_events(s, n);
      std::vector<std::pair<int, int>> y;
      while (y.size() < 2) {
        y.clear();
        for (const auto& e : events)
          if (rng() & 1u) y.push_back(e);
      }
      Rational rhs = 1;
      for (const auto& e : y) rhs *= px[e];
      const Rational lhs = probability(o, mask_of(y));
      if (lhs != rhs) {
        indep.passed = false;
        std::ostringstream os;
        os << sequence_text(s) << " Y={";
        for (auto [i, j] : y) os << "X(" << i << "," << j << ")";
        os << "}: " << to_string(lhs) << " vs " << to_string(rhs) << "; ";
        indep.detail += os.str();
      }
    }
  }
  r.checks.push_back(indep);

  // Conditioning on a later column's event does not change E[X(i,j) | suffix].
  OracleCheck cond{"conditioning invariance", true, ""};
  if (n >= 3) {
    for (int sample = 0; sample < options.sampled_triples; ++sample) {
      const int i = std::uniform_int_distribution<int>(1, n - 2)(rng);
      const int j = std::uniform_int_distribution<int>(i + 1, n)(rng);
      const int i2 = std::uniform_int_distribution<int>(i + 1, n - 1)(rng);
      const int j2 = std::uniform_int_distribution<int>(i2 + 1, n)(rng);
      const std::uint64_t xb = std::uint64_t{1} << bit(i, j);
      const std::uint64_t yb = std::uint64_t{1} << bit(i2, j2);
      // Per suffix (steps i+1..n): [class size, X hits, Y size, X and Y hits].
      std::map<std::vector<std::size_t>, std::array<long, 4>> classes;
      for (std::size_t p = 0; p < o.masks.size(); ++p) {
        std::vector<std::size_t> suffix(o.perms[p].begin() + i, o.perms[p].end());
        auto& c = classes[suffix];
        const bool x = o.masks[p] & xb, yv = o.masks[p] & yb;
        c[0] += 1;
        c[1] += x;
        c[2] += yv;
        c[3] += x && yv;
      }
      for (const auto& [suffix, c] : classes) {
        const Rational base = ratio(c[1], c[0]);
        for (int outcome = 0; outcome < 2; ++outcome) {
          const long size = outcome ? c[2] : c[0] - c[2];
          const long hits = outcome ? c[3] : c[1] - c[3];
          if (size == 0) continue;
          if (ratio(hits, size) != base) {
            cond.passed = false;
            cond.detail += "X(" + std::to_string(i) + "," + std::to_string(j) + ") given X(" + std::to_string(i2) +
                           "," + std::to_string(j2) + ")=" + std::to_string(outcome) + "; ";
          }
        }
      }
    }
  }
  r.checks.push_back(cond);

  OracleCheck count{"expected feasible count", true, ""};
  Rational bound = 1;
  for (int j = 2; j <= n; ++j) bound *= ratio(j + options.params.delta, j);
  count.passed = r.expected_feasible <= bound;
  count.detail = to_string(r.expected_feasible) + " <= " + to_string(bound);
  r.checks.push_back(count);

  for (int l : {2, 3}) {
    const OvercountResult oc = overcount_check(std::max(n, l), l);
    r.checks.push_back(OracleCheck{"overcount l=" + std::to_string(l), oc.strict,
                                   to_string(oc.lhs) + " < " + to_string(oc.rhs)});
  }
  return r;
}

Rational harmonic(int n) {
  Rational h = 0;
  for (int k = 1; k <= n; ++k) h += Rational(1, k);
  return h;
}

OvercountResult overcount_check(int n, int l) {
  if (l < 2 || l > 6 || n < l || n > 60)
    throw Error(ErrorCode::InvalidArgument, "overcount check needs 2 <= l <= 6 and l <= n <= 60");
  // Terms scaled by L^l with L = lcm(1..n), so every term is an integer product of L/i.
  mpz_class L = 1;
  for (int i = 2; i <= n; ++i) mpz_lcm_ui(L.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(i));
  std::vector<mpz_class> scaled(static_cast<std::size_t>(n + 2), 0);  // scaled[i] = L / i
  std::vector<mpz_class> tail(static_cast<std::size_t>(n + 2), 0);    // sum of scaled[i..n]
  for (int i = n; i >= 1; --i) {
    scaled[static_cast<std::size_t>(i)] = L / i;
    tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i + 1)] + scaled[static_cast<std::size_t>(i)];
  }
  mpz_class sum = 0;
  auto rec = [&](auto&& self, int from, int left, const mpz_class& prefix) -> void {
    if (left == 1) {
      sum += prefix * tail[static_cast<std::size_t>(from)];
      return;
    }
    for (int i = from; i <= n - left + 1; ++i) self(self, i + 1, left - 1, prefix * scaled[static_cast<std::size_t>(i)]);
  };
  rec(rec, 1, l, mpz_class(1));
  mpz_class denom = 1;
  for (int k = 0; k < l; ++k) denom *= L;
  OvercountResult r;
  r.lhs = Rational(sum, denom);
  r.lhs.canonicalize();
  Rational h = harmonic(n), power = 1;
  for (int k = 0; k < l; ++k) power *= h;
  mpz_class fact = 1;
  for (int k = 2; k <= l; ++k) fact *= k;
  r.rhs = power / Rational(fact);
  r.strict = r.lhs < r.rhs;
  return r;
}

}  // namespace ric
