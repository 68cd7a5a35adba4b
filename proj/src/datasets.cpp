#include "ric/datasets.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace ric {

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "rnd-hor") return DatasetKind::RndHor;
  if (name == "random-noncrossing") return DatasetKind::RandomNoncrossing;
  if (name == "random-crossing") return DatasetKind::RandomCrossing;
  if (name == "adversarial-depth") return DatasetKind::AdversarialDepth;
  if (name == "uniform-sites") return DatasetKind::UniformSites;
  throw Error(ErrorCode::InvalidArgument, "unknown dataset kind '" + std::string(name) + "'");
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::RndHor: return "rnd-hor";
    case DatasetKind::RandomNoncrossing: return "random-noncrossing";
    case DatasetKind::RandomCrossing: return "random-crossing";
    case DatasetKind::AdversarialDepth: return "adversarial-depth";
    case DatasetKind::UniformSites: return "uniform-sites";
  }
  return "unknown";
}

std::vector<Segment> four_segment_fixture() {
  return {
      make_segment(0, Point(4, 8), Point(12, 8)),
      make_segment(1, Point(8, 4), Point(20, 4)),
      make_segment(2, Point(10, 12), Point(24, 12)),
      make_segment(3, Point(10, 12), Point(11, 14)),
  };
}

std::vector<Segment> adversarial_depth_segments(std::size_t n) {
  const std::int64_t x0 = kGridSize / 2;
  const std::int64_t y0 = 1;
  const auto w = static_cast<std::int64_t>(n) + 2;
  std::vector<Segment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = static_cast<int>(i);
    if (i == 0) {
      out.push_back(make_segment(id, Point(x0 - w, y0), Point(x0 + w, y0)));
    } else if (i % 2 == 1) {
      const auto m = static_cast<std::int64_t>((i + 1) / 2);
      out.push_back(make_segment(id, Point(x0 - 1, y0 + 2 * m - 1), Point(x0 + 1, y0 + 2 * m - 1)));
    } else {
      const auto m = static_cast<std::int64_t>(i / 2);
      out.push_back(make_segment(id, Point(x0 - w + m, y0 + 2 * m), Point(x0 + w - m, y0 + 2 * m)));
    }
  }
  return out;
}

namespace {

std::pair<std::int64_t, std::int64_t> random_span(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> coord(1, kGridSize - 1);
  for (;;) {
    std::int64_t a = coord(rng), b = coord(rng);
    if (a == b) continue;
    return {std::min(a, b), std::max(a, b)};
  }
}

std::vector<Segment> horizontal(std::size_t n, std::mt19937_64& rng, bool random_levels) {
  std::vector<std::int64_t> levels(n);
  if (random_levels) {
    std::uniform_int_distribution<std::int64_t> coord(1, kGridSize - 1);
    std::set<std::int64_t> used;
    for (auto& y : levels) {
      do y = coord(rng);
      while (!used.insert(y).second);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) levels[i] = static_cast<std::int64_t>(i) + 1;
  }
  std::vector<Segment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [l, r] = random_span(rng);
    out.push_back(make_segment(static_cast<int>(i), Point(l, levels[i]), Point(r, levels[i])));
  }
  return out;
}

std::vector<Segment> crossing(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> coord(1, kGridSize - 1);
  for (;;) {
    std::vector<Segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Point a(coord(rng), coord(rng)), b(coord(rng), coord(rng));
      if (a == b) {
        --i;
        continue;
      }
      out.push_back(make_segment(static_cast<int>(i), a, b));
    }
    try {
      SegmentSet check(out);
      return out;
    } catch (const Error&) {
      // Degenerate draw; try again with the continuing stream.
    }
  }
}

std::vector<Site> uniform_sites(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> coord(1, kGridSize - 1);
  std::set<std::pair<std::int64_t, std::int64_t>> used;
  std::vector<Site> out;
  out.reserve(n);
  while (out.size() < n) {
    std::int64_t x = coord(rng), y = coord(rng);
    if (!used.insert({x, y}).second) continue;
    out.push_back(Site{static_cast<int>(out.size()), Point(x, y)});
  }
  return out;
}

}  // namespace

Instance generate(DatasetKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  std::mt19937_64 rng(seed);
  Instance inst;
  inst.kind = kind;
  switch (kind) {
    case DatasetKind::RndHor: inst.segments = horizontal(n, rng, false); break;
    case DatasetKind::RandomNoncrossing: inst.segments = horizontal(n, rng, true); break;
    case DatasetKind::RandomCrossing: inst.segments = crossing(n, rng); break;
    case DatasetKind::AdversarialDepth:
      inst.segments = adversarial_depth_segments(n);
      inst.ordered = true;
      break;
    case DatasetKind::UniformSites: inst.sites = uniform_sites(n, rng); break;
  }
  return inst;
}

}  // namespace ric
