#include "ric/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace ric {

namespace {

// Non-comment, non-blank lines split on whitespace, with 1-based line numbers.
template <typename F>
void for_each_record(std::istream& in, F&& f) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    f(tokens, number);
  }
}

int parse_id(const std::string& s, int line) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": bad id '" + s + "'");
  return v;
}

Rational parse_number(const std::string& s, int line) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + e.what());
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  return in;
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::vector<Segment> parse_segments(std::istream& in) {
  std::vector<Segment> out;
  for_each_record(in, [&](const std::vector<std::string>& t, int line) {
    if (t.size() != 5) throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": expected 'id x1 y1 x2 y2'");
    const Point a(parse_number(t[1], line), parse_number(t[2], line));
    const Point b(parse_number(t[3], line), parse_number(t[4], line));
    out.push_back(make_segment(parse_id(t[0], line), a, b));
  });
  return out;
}

std::vector<Site> parse_sites(std::istream& in) {
  std::vector<Site> out;
  for_each_record(in, [&](const std::vector<std::string>& t, int line) {
    if (t.size() != 3) throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": expected 'id x y'");
    out.push_back(Site{parse_id(t[0], line), Point(parse_number(t[1], line), parse_number(t[2], line))});
  });
  return out;
}

std::vector<int> parse_permutation(std::istream& in) {
  std::vector<int> out;
  for_each_record(in, [&](const std::vector<std::string>& t, int line) {
    if (t.size() != 1) throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": expected one id");
    out.push_back(parse_id(t[0], line));
  });
  return out;
}

std::vector<Segment> read_segments_file(const std::string& path) {
  auto in = open(path);
  return parse_segments(in);
}

std::vector<Site> read_sites_file(const std::string& path) {
  auto in = open(path);
  return parse_sites(in);
}

std::vector<int> read_permutation_file(const std::string& path) {
  auto in = open(path);
  return parse_permutation(in);
}

std::vector<std::size_t> permutation_indices(std::span<const int> all_ids, std::span<const int> ids) {
  if (ids.size() != all_ids.size())
    throw Error(ErrorCode::Parse, "permutation has " + std::to_string(ids.size()) + " ids, expected " +
                                      std::to_string(all_ids.size()));
  std::unordered_map<int, std::size_t> pos;
  for (std::size_t i = 0; i < all_ids.size(); ++i) pos.emplace(all_ids[i], i);
  std::vector<char> used(all_ids.size(), 0);
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (int id : ids) {
    auto it = pos.find(id);
    if (it == pos.end()) throw Error(ErrorCode::Parse, "unknown id " + std::to_string(id) + " in permutation");
    if (used[it->second]++) throw Error(ErrorCode::Parse, "id " + std::to_string(id) + " repeated in permutation");
    out.push_back(it->second);
  }
  return out;
}

std::string to_decimal(const Rational& q) {
  mpz_class den = q.get_den();
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) throw Error(ErrorCode::InvalidArgument, to_string(q) + " has no finite decimal expansion");
  const int digits = std::max(twos, fives);
  if (digits == 0) return q.get_num().get_str();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const mpz_class scaled = q.get_num() * (scale / q.get_den());
  const bool negative = scaled < 0;
  std::string s = mpz_class(abs(scaled)).get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return negative ? "-" + s : s;
}

void write_segments(std::ostream& out, std::span<const Segment> segments) {
  for (const Segment& s : segments)
    out << s.id << ' ' << to_decimal(s.left.x()) << ' ' << to_decimal(s.left.y()) << ' ' << to_decimal(s.right.x())
        << ' ' << to_decimal(s.right.y()) << '\n';
}

void write_sites(std::ostream& out, std::span<const Site> sites) {
  for (const Site& s : sites) out << s.id << ' ' << to_decimal(s.point.x()) << ' ' << to_decimal(s.point.y()) << '\n';
}

void write_permutation(std::ostream& out, std::span<const int> ids) {
  for (int id : ids) out << id << '\n';
}

void write_trajectory_csv(std::ostream& out, std::span<const StepStats> trajectory,
                          std::optional<std::span<const int>> search_depths) {
  out << "step,faces,size_nodes,max_depth,Dj,Ej,Oj,Cj,nodes_created";
  if (search_depths) out << ",search_depth";
  out << '\n';
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const StepStats& s = trajectory[i];
    out << s.j << ',' << s.faces << ',' << s.size_nodes << ',' << s.max_depth << ',' << s.D << ',' << s.E << ','
        << s.O << ',' << s.C << ',' << s.nodes_created;
    if (search_depths) {
      out << ',';
      if (i < search_depths->size()) out << (*search_depths)[i];
    }
    out << '\n';
  }
}

void write_delaunay_csv(std::ostream& out, std::span<const DelaunayStepStats> trajectory) {
  out << "step,Dj,flips,weighted_depth,size_triangles\n";
  for (const auto& s : trajectory)
    out << s.j << ',' << s.D << ',' << s.flips << ',' << s.weighted_depth << ',' << s.size_triangles << '\n';
}

void write_tail_csv(std::ostream& out, const TailResult& tail) {
  out << "T,empirical_ccdf,envelope,trials\n";
  for (const TailRow& r : tail.rows)
    out << fixed(r.T) << ',' << fixed(r.empirical_ccdf) << ',' << fixed(std::min(r.envelope, 1.0)) << ',' << r.trials
        << '\n';
}

void write_events_csv(std::ostream& out, const EventMatrix& X) {
  out << "i,j,bit\n";
  for (int j = 2; j <= X.n(); ++j)
    for (int i = 1; i < j; ++i) out << i << ',' << j << ',' << (X.get(i, j) ? 1 : 0) << '\n';
}

void write_verifier_csv(std::ostream& out, const VerifierReport& report) {
  out << "attempt,size,depth,accepted\n";
  for (const AttemptRecord& a : report.attempts)
    out << a.attempt << ',' << a.size << ',' << a.depth << ',' << (a.accepted ? 1 : 0) << '\n';
}

void write_oracle_report(std::ostream& out, const OracleReport& report) {
  out << "n = " << report.n << ", permutations = " << report.permutations << '\n';
  for (const auto& [i, j, p] : report.expected_x) out << "E[X(" << i << "," << j << ")] = " << to_string(p) << '\n';
  for (std::size_t j = 0; j < report.expected_d.size(); ++j)
    out << "E[D_" << j + 1 << "] = " << to_string(report.expected_d[j]) << '\n';
  out << "E[#feasible] = " << to_string(report.expected_feasible) << '\n';
  for (const OracleCheck& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "missing CSV header");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size())
      throw Error(ErrorCode::Parse, "CSV row has " + std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ric
