// Command-line driver: dataset generation, builds, point location, tail
// scans, exhaustive oracles and the rebuild verifier.
//
// Exit status: 0 pass, 1 acceptance violation, 2 usage or ingestion error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ric/datasets.hpp"
#include "ric/experiments.hpp"
#include "ric/io.hpp"
#include "ric/verifier.hpp"

using namespace ric;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Options {
  std::string input;
  std::string kind = "rnd-hor";
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string permutation;
  bool file_order = false;
  std::size_t trials = 0;
  std::size_t search_depth_steps = 1000;
  double c_size = std::numeric_limits<double>::infinity();
  double c_depth = std::numeric_limits<double>::infinity();
  int max_rebuilds = 64;
  bool exhaustive = false;
  std::string x, y;
};

void add_source(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "Segment file (id x1 y1 x2 y2) or site file (id x y)");
  sub->add_option("--kind", o.kind, "Generated dataset when no input is given")
      ->check(CLI::IsMember({"rnd-hor", "random-noncrossing", "random-crossing", "adversarial-depth", "uniform-sites"}));
  sub->add_option("--n", o.n, "Generated instance size")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Seed for generation and permutations");
  sub->add_option("--out", o.out, "Output path (default stdout)");
}

void add_order(CLI::App* sub, Options& o) {
  auto* perm = sub->add_option("--permutation", o.permutation, "Insertion order file, one id per line");
  sub->add_flag("--file-order", o.file_order, "Insert in file order")->excludes(perm);
}

// Segment and site files are told apart by the width of the first record.
Instance load(const Options& o) {
  if (o.input.empty()) return generate(parse_dataset_kind(o.kind), o.n, o.seed);
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + o.input + "'");
  std::stringstream text;
  text << in.rdbuf();
  std::size_t width = 0;
  for (std::string line; std::getline(text, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    for (std::string t; fields >> t;) ++width;
    break;
  }
  text.clear();
  text.seekg(0);
  Instance inst;
  inst.ordered = true;
  if (width == 3) {
    inst.kind = DatasetKind::UniformSites;
    inst.sites = parse_sites(text);
  } else {
    inst.kind = DatasetKind::RandomCrossing;
    inst.segments = parse_segments(text);
  }
  return inst;
}

bool is_sites(const Instance& inst) { return inst.kind == DatasetKind::UniformSites; }

std::vector<int> ids_of(const Instance& inst) {
  std::vector<int> ids;
  if (is_sites(inst))
    for (const Site& s : inst.sites) ids.push_back(s.id);
  else
    for (const Segment& s : inst.segments) ids.push_back(s.id);
  return ids;
}

std::vector<std::size_t> insertion_order(const Options& o, const Instance& inst) {
  const auto ids = ids_of(inst);
  if (!o.permutation.empty()) return permutation_indices(ids, read_permutation_file(o.permutation));
  if (o.file_order) return identity_order(ids.size());
  return attempt_order(ids.size(), o.seed, 0);
}

std::shared_ptr<const SegmentSet> segment_set(const Instance& inst) {
  if (is_sites(inst)) throw Error(ErrorCode::InvalidArgument, "this command needs a segment instance");
  return std::make_shared<const SegmentSet>(inst.segments);
}

std::shared_ptr<const std::vector<Site>> site_set(const Instance& inst) {
  return std::make_shared<const std::vector<Site>>(inst.sites);
}

// Writes to --out when given, else stdout.
template <typename F>
void emit(const Options& o, F&& f) {
  if (o.out.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream out(o.out);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + o.out + "'");
  f(out);
}

std::string vertex_name(const DelaunayHistory& dag, int v) {
  if (v >= 0) return std::to_string(dag.sites()[static_cast<std::size_t>(v)].id);
  return v == kSymbolicA ? "A" : v == kSymbolicB ? "B" : "C";
}

std::string boundary_name(const Tsd& tsd, int s) {
  if (s == kDomainTop) return "top";
  if (s == kDomainBottom) return "bottom";
  return std::to_string(tsd.segments()[static_cast<std::size_t>(s)].id);
}

int cmd_generate(const Options& o) {
  const Instance inst = generate(parse_dataset_kind(o.kind), o.n, o.seed);
  emit(o, [&](std::ostream& out) {
    out << "# " << o.kind << " n=" << o.n << " seed=" << o.seed << '\n';
    if (is_sites(inst))
      write_sites(out, inst.sites);
    else
      write_segments(out, inst.segments);
  });
  return kPass;
}

int cmd_build(const Options& o) {
  const Instance inst = load(o);
  const auto order = insertion_order(o, inst);
  if (is_sites(inst)) {
    const DelaunayHistory dag = build_delaunay(site_set(inst), order);
    emit(o, [&](std::ostream& out) { write_delaunay_csv(out, dag.trajectory()); });
    return kPass;
  }
  const TrajectoryResult r = run_trajectory(segment_set(inst), order, o.search_depth_steps);
  emit(o, [&](std::ostream& out) {
    write_trajectory_csv(out, r.tsd.trajectory(), std::span<const int>(r.search_depths));
  });
  return kPass;
}

int cmd_locate(const Options& o) {
  const Instance inst = load(o);
  const auto order = insertion_order(o, inst);
  const Point q(parse_rational(o.x), parse_rational(o.y));
  if (is_sites(inst)) {
    const DelaunayHistory dag = build_delaunay(site_set(inst), order);
    const TriangleLocation v1 = dag.locate_v1(q);
    const TriangleLocation v2 = dag.locate_v2(q);
    const auto& t = dag.triangles()[static_cast<std::size_t>(v2.triangle)];
    emit(o, [&](std::ostream& out) {
      out << "triangle " << vertex_name(dag, t.v[0]) << ' ' << vertex_name(dag, t.v[1]) << ' '
          << vertex_name(dag, t.v[2]) << '\n'
          << "comparisons_v1 " << v1.comparisons << "\ncomparisons_v2 " << v2.comparisons << '\n';
    });
    return kPass;
  }
  const Tsd tsd = build(segment_set(inst), order);
  const LocateResult r = tsd.locate(q);
  const Trapezoid& t = tsd.leaf_trapezoid(r.leaf);
  emit(o, [&](std::ostream& out) {
    out << "trapezoid top " << boundary_name(tsd, t.top) << " bottom " << boundary_name(tsd, t.bot) << '\n'
        << "comparisons " << r.comparisons << '\n';
  });
  return kPass;
}

int cmd_tail(const Options& o) {
  const Instance inst = load(o);
  bool passed = false;
  emit(o, [&](std::ostream& out) {
    passed = run_tail(segment_set(inst), o.trials ? o.trials : 2000, o.seed, o.exhaustive, out);
  });
  if (!passed) std::cerr << "tail envelope violated\n";
  return passed ? kPass : kViolation;
}

int cmd_oracles(const Options& o) {
  const Instance inst = load(o);
  bool passed = false;
  emit(o, [&](std::ostream& out) { passed = run_oracles(segment_set(inst), o.seed, out); });
  return passed ? kPass : kViolation;
}

int cmd_verify(const Options& o) {
  const Instance inst = load(o);
  VerifierConfig cfg;
  cfg.c_size = o.c_size;
  cfg.c_depth = o.c_depth;
  cfg.seed = o.seed;
  if (o.max_rebuilds < 0)
    cfg.max_rebuilds = std::nullopt;
  else
    cfg.max_rebuilds = o.max_rebuilds;
  try {
    const VerifierReport report = is_sites(inst) ? build_verified_delaunay(site_set(inst), cfg).report
                                                 : build_verified_tsd(segment_set(inst), cfg).report;
    emit(o, [&](std::ostream& out) { write_verifier_csv(out, report); });
    std::cerr << "rebuilds " << report.rebuilds << " size " << report.size << " depth " << report.depth << '\n';
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RebuildLimitExceeded) throw;
    std::cerr << e.what() << '\n';
    return kViolation;
  }
  return kPass;
}

int cmd_pilot(const Options& o) {
  const Instance inst = load(o);
  const std::size_t trials = o.trials ? o.trials : 200;
  const Calibration cal =
      is_sites(inst) ? pilot_delaunay(site_set(inst), trials, o.seed) : pilot_tsd(segment_set(inst), trials, o.seed);
  emit(o, [&](std::ostream& out) {
    out << std::setprecision(17) << "c_size,c_depth\n" << cal.c_size << ',' << cal.c_depth << '\n';
  });
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized incremental search structures"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a generated instance");
  gen->add_option("--kind", o.kind, "Dataset kind")
      ->check(CLI::IsMember({"rnd-hor", "random-noncrossing", "random-crossing", "adversarial-depth", "uniform-sites"}));
  gen->add_option("--n", o.n, "Instance size")->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--out", o.out, "Output path (default stdout)");

  auto* bld = app.add_subcommand("build", "Build and write the per-step trajectory CSV");
  add_source(bld, o);
  add_order(bld, o);
  bld->add_option("--search-depth-steps", o.search_depth_steps, "Steps with exact search depth");

  auto* loc = app.add_subcommand("locate", "Locate one query point");
  add_source(loc, o);
  add_order(loc, o);
  loc->add_option("--x", o.x, "Query x")->required();
  loc->add_option("--y", o.y, "Query y")->required();

  auto* tail = app.add_subcommand("tail", "Tail table of the event sum against its envelope");
  add_source(tail, o);
  tail->add_option("--trials", o.trials, "Monte Carlo trials (default 2000)")->check(CLI::PositiveNumber);
  tail->add_flag("--exhaustive", o.exhaustive, "Enumerate all permutations (n <= 8)");

  auto* orc = app.add_subcommand("oracles", "Exhaustive expectation checks (n <= 8)");
  add_source(orc, o);

  auto* ver = app.add_subcommand("verify", "Build with rebuilds until thresholds hold");
  add_source(ver, o);
  ver->add_option("--c-size", o.c_size, "Size multiplier");
  ver->add_option("--c-depth", o.c_depth, "Depth multiplier");
  ver->add_option("--max-rebuilds", o.max_rebuilds, "Attempt budget, negative for unbounded");

  auto* pil = app.add_subcommand("pilot", "Measure 99th-percentile multipliers");
  add_source(pil, o);
  pil->add_option("--trials", o.trials, "Pilot trials (default 200)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*bld) return cmd_build(o);
    if (*loc) return cmd_locate(o);
    if (*tail) return cmd_tail(o);
    if (*orc) return cmd_oracles(o);
    if (*ver) return cmd_verify(o);
    if (*pil) return cmd_pilot(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
