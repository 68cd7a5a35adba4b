#pragma once

// Instance generators and frozen fixtures.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ric/delaunay.hpp"
#include "ric/geometry.hpp"

namespace ric {

enum class DatasetKind { RndHor, RandomNoncrossing, RandomCrossing, AdversarialDepth, UniformSites };

DatasetKind parse_dataset_kind(std::string_view name);
std::string to_string(DatasetKind kind);

/// Generated coordinates are integers in [0, kGridSize).
inline constexpr std::int64_t kGridSize = std::int64_t{1} << 20;

struct Instance {
  DatasetKind kind = DatasetKind::RndHor;
  std::vector<Segment> segments;  // segment kinds
  std::vector<Site> sites;        // uniform-sites
  // True when the file order is a meaningful insertion order.
  bool ordered = false;
};

/// Deterministic in (kind, n, seed).
Instance generate(DatasetKind kind, std::size_t n, std::uint64_t seed);

/// Four segments a, b, c, d (ids 0..3) where c and d share their left
/// endpoint. Inserted in id order the trapezoidation has 4, 7, 10 and 13
/// faces, with D = (4, 5, 6, 4).
std::vector<Segment> four_segment_fixture();

/// Nested horizontal segments interleaved with short central ones. In file
/// order the history DAG's depth grows linearly and the number of
/// root-to-leaf paths exponentially.
std::vector<Segment> adversarial_depth_segments(std::size_t n);

}  // namespace ric
