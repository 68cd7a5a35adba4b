#pragma once

// Randomized incremental Delaunay triangulation with its history DAG.
//
// The initial triangle has three symbolic vertices c+(-M,-M), c+(M,-M) and
// c+(0,M) with c = (1/2, 1/3) and M a formal variable tending to infinity.
// Predicates involving them are evaluated as polynomials in M.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ric/events.hpp"
#include "ric/geometry.hpp"

namespace ric {

struct Site {
  int id = 0;
  Point point;
};

/// +1 if d is strictly inside the circumcircle of triangle abc, -1 outside,
/// 0 on it. Throws CollinearBase.
int in_circle(const Point& a, const Point& b, const Point& c, const Point& d);

// Vertex references: >= 0 are site indices, negative are symbolic.
inline constexpr int kSymbolicA = -1;
inline constexpr int kSymbolicB = -2;
inline constexpr int kSymbolicC = -3;

struct DelaunayTriangle {
  std::array<int, 3> v{};        // CCW
  std::array<int, 3> nbr{-1, -1, -1};  // neighbor across the edge opposite v[i]
  std::array<int, 3> children{-1, -1, -1};
  int child_count = 0;
  int creation_step = 0;
  int destroyed_step = 0;  // 0 while alive
  bool final = false;      // part of the triangulation after its creation step
  int cost = 0;            // tracked maximum weighted root cost

  bool alive() const { return destroyed_step == 0; }
};

/// A site's incident triangles in the triangulation right after its insertion,
/// in CCW order, with the precomputed split ray of the radial search.
struct Star {
  int site = -1;
  std::vector<int> rays;       // rays[i] is the vertex between triangles[i-1] and triangles[i]
  std::vector<int> triangles;  // triangles[i] = (site, rays[i], rays[i+1])
  int split = 0;               // ray tested first
  int upper = 0;               // rays strictly counterclockwise of split within a half-turn
  int weight = 0;              // floor(log2 D) + 1
};

struct DelaunayStepStats {
  int j = 0;
  int D = 0;
  int flips = 0;
  // Neighbors of the new site in the triangulation: priorities 1..j-1, or
  // kSymbolicA..kSymbolicC for the bounding vertices. Sorted.
  std::vector<int> adjacent;
  int weighted_depth = 0;
  std::size_t size_triangles = 0;
};

struct TriangleLocation {
  int triangle = -1;
  int comparisons = 0;
};

class DelaunayHistory {
 public:
  /// Throws DuplicateSite.
  explicit DelaunayHistory(std::shared_ptr<const std::vector<Site>> sites);

  /// Inserts the site with the given index as the next step. A site on an
  /// existing edge splits both neighbors. Throws DuplicateSite (already
  /// inserted) or DegeneratePosition (co-circular flip test); the history is
  /// unusable after the latter.
  const DelaunayStepStats& insert_site(std::size_t site_index);

  /// Descends through all intermediate triangles; a comparison is one
  /// triangle containment test. Throws DegenerateQuery on a visited edge.
  TriangleLocation locate_v1(const Point& q) const;
  /// Descends by radial binary search in the stars; a comparison is one
  /// orientation test.
  TriangleLocation locate_v2(const Point& q) const;

  int weighted_depth() const { return weighted_depth_; }
  /// History size: every triangle ever created.
  std::size_t size() const { return triangles_.size(); }
  std::size_t alive_count() const { return alive_; }
  int steps() const { return static_cast<int>(trajectory_.size()); }

  const std::vector<DelaunayStepStats>& trajectory() const { return trajectory_; }
  std::span<const DelaunayTriangle> triangles() const { return triangles_; }
  std::vector<int> alive_triangles() const;
  const Star& star(int step) const { return stars_[static_cast<std::size_t>(step - 1)]; }
  const std::vector<Site>& sites() const { return *sites_; }
  int priority(int site_index) const { return priority_[static_cast<std::size_t>(site_index)]; }

  /// Exact containment of a general-position point (strict interior).
  bool contains(int triangle, const Point& q) const;
  /// Orientation with symbolic vertices.
  int orient(int a, int b, int c) const;
  int orient_point(int a, int b, const Point& q) const;
  int in_circle_vertices(int a, int b, int c, int d) const;

  /// Longest weighted root path recomputed from the child links. Edges into
  /// a triangle that is final at its creation step weigh that step's weight.
  int longest_weighted_path() const;

 private:
  int new_triangle(std::array<int, 3> v, int cost);
  void set_neighbor(int t, int old_nbr, int new_nbr);
  void add_child(int parent, int child);
  std::array<int, 2> flip(int t1, int p);
  int locate_insertion(const Point& q) const;
  int boundary_side(int triangle, const Point& q) const;
  void link(std::span<const int> fresh, std::span<const int> old);
  void legalize(int p, std::vector<int> stack, int& flips);
  void record_star(int p, int any_triangle);

  std::shared_ptr<const std::vector<Site>> sites_;
  std::vector<DelaunayTriangle> triangles_;
  std::vector<Star> stars_;
  std::vector<int> priority_;
  std::vector<DelaunayStepStats> trajectory_;
  std::size_t alive_ = 1;
  int weighted_depth_ = 0;
};

/// Inserts all sites in the given order (site indices).
DelaunayHistory build_delaunay(std::shared_ptr<const std::vector<Site>> sites, std::span<const std::size_t> order);

/// Every alive triangle's circumcircle is empty of inserted sites. Exhaustive.
bool empty_circumcircle_check(const DelaunayHistory& dag);

/// Row j holds the real neighbors of the step-j site; the three bounding
/// vertices are pseudo columns, so row sums equal D_j.
EventMatrix delaunay_events(std::span<const DelaunayStepStats> trajectory);

/// Four co-circular sites (indices), if any. Uses the pencil of circles
/// through each pair, O(n^3 log n).
std::optional<std::array<int, 4>> find_cocircular(std::span<const Site> sites);

}  // namespace ric
