#pragma once

// History-based randomized incremental construction of the trapezoidal
// search DAG (TSD) over possibly crossing segments.
//
// Shared endpoints are resolved symbolically: an endpoint is moved an
// infinitesimal amount towards the interior of its segment, and the
// magnitudes are ordered by segment id (larger id, larger move). Coincident
// vertices therefore have a total x-order and well-defined vertical rays.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ric/geometry.hpp"

namespace ric {

struct VertexRef {
  enum class Kind : std::uint8_t { DomainLeft, DomainRight, LeftEndpoint, RightEndpoint, Crossing };
  Kind kind = Kind::DomainLeft;
  int a = -1;  // segment index (endpoints), smaller index (crossings)
  int b = -1;  // larger index (crossings)
  Point point;

  bool involves(int segment) const { return a == segment || b == segment; }
};

inline constexpr int kDomainTop = -1;
inline constexpr int kDomainBottom = -2;

struct Trapezoid {
  int top = kDomainTop;     // segment index or kDomainTop
  int bot = kDomainBottom;  // segment index or kDomainBottom
  int leftp = 0;            // vertex index
  int rightp = 1;           // vertex index
  int creation_step = 0;
};

struct TsdNode {
  enum class Kind : std::uint8_t { XNode, YNode, Leaf };
  Kind kind = Kind::Leaf;
  // Vertex index (XNode), segment index (YNode), trapezoid index (Leaf).
  int key = 0;
  // XNode: {left, right}; YNode: {above, below}.
  int child[2] = {-1, -1};
  int depth_from_root = 0;
  int creation_step = 0;
  // x-extent of the node's region as vertex indices; path independent.
  int lo = 0;
  int hi = 1;
};

/// Per-insertion statistics. Segment references are priorities (1-based).
struct StepStats {
  int j = 0;
  int D = 0;
  int E = 0;
  int O = 0;
  int C = 0;
  int nodes_created = 0;
  std::vector<int> adjacent;                         // priorities i < j, sorted
  std::vector<std::pair<int, int>> visible_crossings;  // priority pairs (h < i), sorted
  std::size_t faces = 0;
  std::size_t size_nodes = 0;
  int max_depth = 0;
};

struct Box {
  Point min;
  Point max;
};

/// Input bounding box expanded by one unit on every side.
Box default_bounds(const SegmentSet& set);

struct LocateResult {
  int leaf = -1;  // node index
  int comparisons = 0;
};

class Tsd {
 public:
  Tsd(std::shared_ptr<const SegmentSet> set, Box bounds);

  /// Inserts the segment with the given index as the next step.
  /// Throws OutOfBounds or DuplicateSegment.
  const StepStats& insert_segment(std::size_t segment_index);

  /// Point location from the root; throws DegenerateQuery / OutOfBounds.
  LocateResult locate(const Point& q) const;

  int depth() const { return max_depth_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t face_count() const { return active_.size(); }
  int steps() const { return static_cast<int>(trajectory_.size()); }
  /// Crossings among the segments inserted so far.
  std::size_t crossings_so_far() const { return crossing_vertex_.size(); }

  const std::vector<StepStats>& trajectory() const { return trajectory_; }
  std::span<const TsdNode> nodes() const { return nodes_; }
  std::span<const VertexRef> vertices() const { return vertices_; }
  const Trapezoid& trapezoid(const TsdNode& leaf) const { return traps_[static_cast<std::size_t>(leaf.key)]; }
  const Trapezoid& leaf_trapezoid(int node) const { return trapezoid(nodes_[static_cast<std::size_t>(node)]); }
  std::span<const int> active_leaves() const { return active_; }
  int root() const { return 0; }
  const Box& bounds() const { return bounds_; }
  const SegmentSet& segments() const { return *set_; }
  /// Priority (1-based step) of a segment index, 0 if not inserted.
  int priority(int segment_index) const { return priority_[static_cast<std::size_t>(segment_index)]; }
  int segment_at(int step) const { return order_[static_cast<std::size_t>(step - 1)]; }

  /// All root-to-leaf node paths; throws TooManyPaths past `limit`.
  std::vector<std::vector<int>> enumerate_paths(std::size_t limit) const;

  /// Longest root-to-leaf path realizable by a query point in general
  /// position. Exact, by region-pruned depth-first descent.
  int search_depth_exact() const;

  /// Whether some query point in general position follows the node path.
  bool is_search_path(std::span<const int> path) const;

  /// Exact containment of a general-position point in a leaf's trapezoid.
  bool leaf_contains(int node, const Point& q) const;

  /// Segments bounding a trapezoid (top, bot, and owners of leftp/rightp).
  std::vector<int> bounding_segments(const Trapezoid& t) const;

  // Symbolic predicates, exposed for tests.
  std::strong_ordering compare_vertices(int u, int w) const;
  /// Side of a vertex against a segment's supporting line, resolving
  /// shared endpoints symbolically. Never returns On.
  Side vertex_side(int vertex, int segment) const;

 private:
  struct Passage;

  int add_vertex(VertexRef v);
  int crossing_vertex(int s, int t);
  int endpoint_vertex(int segment, bool left);
  int new_node(TsdNode node);
  int new_leaf(const Trapezoid& t, int creation_step);
  std::optional<Passage> passage(int segment, int leaf_node) const;
  void collect_stabbed(int segment, std::vector<int>& out);
  std::strong_ordering compare_point_vertex(const Point& q, int vertex) const;

  std::shared_ptr<const SegmentSet> set_;
  Box bounds_;
  std::vector<VertexRef> vertices_;
  std::vector<TsdNode> nodes_;
  std::vector<Trapezoid> traps_;
  std::vector<int> active_;
  std::vector<int> active_pos_;  // node -> index in active_, or -1
  std::vector<int> visit_mark_;
  int visit_stamp_ = 0;
  std::vector<int> priority_;
  std::vector<int> order_;
  std::vector<int> left_vertex_;
  std::vector<int> right_vertex_;
  std::unordered_map<std::uint64_t, int> crossing_vertex_;
  std::vector<StepStats> trajectory_;
  int max_depth_ = 0;
};

/// Inserts the segments in priority order (segment indices, first = priority 1).
Tsd build(std::shared_ptr<const SegmentSet> set, std::span<const std::size_t> order,
          std::optional<Box> bounds = std::nullopt);

/// Identity order 0..n-1.
std::vector<std::size_t> identity_order(std::size_t n);

}  // namespace ric
