#include <vector>

#include "ric/trapezoidation.hpp"

namespace ric {

namespace {

struct Vec {
  Rational x, y;
};

using Polygon = std::vector<Vec>;

// Half-plane a*x + b*y + c >= 0.
struct HalfPlane {
  Rational a, b, c;
  Rational eval(const Vec& p) const { return a * p.x + b * p.y + c; }
};

Polygon clip(const Polygon& poly, const HalfPlane& h) {
  Polygon out;
  const std::size_t m = poly.size();
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % m];
    Rational fp = h.eval(p), fq = h.eval(q);
    if (sgn(fp) >= 0) out.push_back(p);
    if ((sgn(fp) > 0 && sgn(fq) < 0) || (sgn(fp) < 0 && sgn(fq) > 0)) {
      Rational t = fp / (fp - fq);
      out.push_back(Vec{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

bool has_area(const Polygon& poly) {
  if (poly.size() < 3) return false;
  Rational twice_area = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % poly.size()];
    twice_area += p.x * q.y - q.x * p.y;
  }
  return sgn(twice_area) != 0;
}

// Supporting line of s oriented so that points above are non-negative.
HalfPlane above(const Segment& s) {
  const Rational dx = s.right.x() - s.left.x();
  const Rational dy = s.right.y() - s.left.y();
  // orientation(l, r, q) = dx*(qy-ly) - dy*(qx-lx)
  return HalfPlane{-dy, dx, dy * s.left.x() - dx * s.left.y()};
}

HalfPlane negate(const HalfPlane& h) { return HalfPlane{-h.a, -h.b, -h.c}; }

Polygon box_polygon(const Box& b) {
  return {{b.min.x(), b.min.y()}, {b.max.x(), b.min.y()}, {b.max.x(), b.max.y()}, {b.min.x(), b.max.y()}};
}

// Half-plane of the node's first child.
HalfPlane first_side(const TsdNode& n, std::span<const VertexRef> vertices, const SegmentSet& set) {
  if (n.kind == TsdNode::Kind::XNode) return HalfPlane{-1, 0, vertices[static_cast<std::size_t>(n.key)].point.x()};
  return above(set[static_cast<std::size_t>(n.key)]);
}

}  // namespace

bool Tsd::is_search_path(std::span<const int> path) const {
  Polygon region = box_polygon(bounds_);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const TsdNode& n = nodes_[static_cast<std::size_t>(path[i])];
    if (n.kind == TsdNode::Kind::Leaf) return false;
    HalfPlane h = first_side(n, vertices_, *set_);
    if (n.child[0] == path[i + 1])
      region = clip(region, h);
    else if (n.child[1] == path[i + 1])
      region = clip(region, negate(h));
    else
      return false;
    if (!has_area(region)) return false;
  }
  return true;
}

int Tsd::search_depth_exact() const {
  const Polygon box = box_polygon(bounds_);
  int best = 0;
  auto rec = [&](auto&& self, int id, const Polygon& region, int depth) -> void {
    const TsdNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.kind == TsdNode::Kind::Leaf) {
      best = std::max(best, depth);
      return;
    }
    // Child 0 is x <= v.x or above the segment; the vertical line itself has no area.
    const HalfPlane h = first_side(n, vertices_, *set_);
    for (int side = 0; side < 2; ++side) {
      Polygon sub = clip(region, side == 0 ? h : negate(h));
      if (has_area(sub)) self(self, n.child[side], sub, depth + 1);
    }
  };
  rec(rec, root(), box, 0);
  return best;
}

}  // namespace ric
