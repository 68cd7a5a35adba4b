#include "ric/trapezoidation.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace ric {

namespace {

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

int sign(const Rational& q) { return sgn(q); }

Side flip(Side s) { return static_cast<Side>(-static_cast<int>(s)); }

enum class Bound : std::uint8_t { Endpoint, Wall, Crossing };

}  // namespace

struct Tsd::Passage {
  int leaf = -1;
  int entry = -1;
  Bound entry_kind = Bound::Wall;
  int exit = -1;
  Bound exit_kind = Bound::Wall;
};

Box default_bounds(const SegmentSet& set) {
  auto [lo, hi] = set.bounding_box();
  return Box{Point(lo.x() - 1, lo.y() - 1), Point(hi.x() + 1, hi.y() + 1)};
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

Tsd::Tsd(std::shared_ptr<const SegmentSet> set, Box bounds) : set_(std::move(set)), bounds_(std::move(bounds)) {
  if (compare_sheared(bounds_.min, bounds_.max) >= 0 || bounds_.min.x() >= bounds_.max.x() ||
      bounds_.min.y() >= bounds_.max.y())
    throw Error(ErrorCode::InvalidArgument, "bounding rectangle must have positive area");
  const std::size_t n = set_->size();
  priority_.assign(n, 0);
  left_vertex_.assign(n, -1);
  right_vertex_.assign(n, -1);
  add_vertex(VertexRef{VertexRef::Kind::DomainLeft, -1, -1, bounds_.min});
  add_vertex(VertexRef{VertexRef::Kind::DomainRight, -1, -1, bounds_.max});
  new_leaf(Trapezoid{kDomainTop, kDomainBottom, 0, 1, 0}, 0);
}

int Tsd::add_vertex(VertexRef v) {
  vertices_.push_back(std::move(v));
  return static_cast<int>(vertices_.size()) - 1;
}

int Tsd::endpoint_vertex(int segment, bool left) {
  const Segment& s = (*set_)[static_cast<std::size_t>(segment)];
  return add_vertex(VertexRef{left ? VertexRef::Kind::LeftEndpoint : VertexRef::Kind::RightEndpoint, segment, -1,
                              left ? s.left : s.right});
}

int Tsd::crossing_vertex(int s, int t) {
  auto key = pair_key(s, t);
  auto it = crossing_vertex_.find(key);
  if (it != crossing_vertex_.end()) return it->second;
  auto point = set_->crossing_point(s, t);
  assert(point);
  int v = add_vertex(VertexRef{VertexRef::Kind::Crossing, std::min(s, t), std::max(s, t), *point});
  crossing_vertex_.emplace(key, v);
  return v;
}

int Tsd::new_node(TsdNode node) {
  nodes_.push_back(node);
  active_pos_.push_back(-1);
  visit_mark_.push_back(0);
  return static_cast<int>(nodes_.size()) - 1;
}

int Tsd::new_leaf(const Trapezoid& t, int creation_step) {
  traps_.push_back(t);
  TsdNode node;
  node.kind = TsdNode::Kind::Leaf;
  node.key = static_cast<int>(traps_.size()) - 1;
  node.creation_step = creation_step;
  node.lo = t.leftp;
  node.hi = t.rightp;
  int id = new_node(node);
  active_pos_[static_cast<std::size_t>(id)] = static_cast<int>(active_.size());
  active_.push_back(id);
  return id;
}

std::strong_ordering Tsd::compare_vertices(int u, int w) const {
  if (u == w) return std::strong_ordering::equal;
  const VertexRef& a = vertices_[static_cast<std::size_t>(u)];
  const VertexRef& b = vertices_[static_cast<std::size_t>(w)];
  using K = VertexRef::Kind;
  if (a.kind == K::DomainLeft || b.kind == K::DomainRight) return std::strong_ordering::less;
  if (a.kind == K::DomainRight || b.kind == K::DomainLeft) return std::strong_ordering::greater;
  auto c = compare_sheared(a.point, b.point);
  if (c != 0) return c;
  if (a.kind == K::Crossing || b.kind == K::Crossing)
    throw std::logic_error("crossing coincides with another vertex");

  // Coincident endpoints: compare the infinitesimal moves towards the interior.
  auto direction = [&](const VertexRef& v) {
    const Segment& s = (*set_)[static_cast<std::size_t>(v.a)];
    const Point& other = v.kind == K::LeftEndpoint ? s.right : s.left;
    return std::pair{sign(other.x() - v.point.x()), sign(other.y() - v.point.y())};
  };
  auto [ax, ay] = direction(a);
  auto [bx, by] = direction(b);
  int id_a = (*set_)[static_cast<std::size_t>(a.a)].id;
  int id_b = (*set_)[static_cast<std::size_t>(b.a)].id;
  auto dominant = [&](int dir) {
    // The larger id moves farther.
    bool a_dominates = id_a > id_b;
    return (a_dominates == (dir > 0)) ? std::strong_ordering::greater : std::strong_ordering::less;
  };
  if (ax != bx) return ax <=> bx;
  if (ax != 0) return dominant(ax);
  if (ay != by) return ay <=> by;
  return dominant(ay);
}

Side Tsd::vertex_side(int vertex, int segment) const {
  const VertexRef& v = vertices_[static_cast<std::size_t>(vertex)];
  const Segment& s = (*set_)[static_cast<std::size_t>(segment)];
  int o = orientation(s.left, s.right, v.point);
  if (o != 0) return static_cast<Side>(o);
  if (v.kind != VertexRef::Kind::LeftEndpoint && v.kind != VertexRef::Kind::RightEndpoint)
    throw std::logic_error("vertex on segment line has no symbolic side");
  if (v.a == segment) throw std::logic_error("vertex_side against its own segment");
  const Segment& t = (*set_)[static_cast<std::size_t>(v.a)];
  const Point& other = v.kind == VertexRef::Kind::LeftEndpoint ? t.right : t.left;
  o = orientation(s.left, s.right, other);
  if (o == 0) throw std::logic_error("collinear touching segments");
  return static_cast<Side>(o);
}

std::strong_ordering Tsd::compare_point_vertex(const Point& q, int vertex) const {
  const VertexRef& v = vertices_[static_cast<std::size_t>(vertex)];
  if (v.kind == VertexRef::Kind::DomainLeft) return std::strong_ordering::greater;
  if (v.kind == VertexRef::Kind::DomainRight) return std::strong_ordering::less;
  auto c = compare_sheared(q, v.point);
  if (c == 0) throw Error(ErrorCode::DegenerateQuery, "query coincides with vertex " + to_string(q));
  return c;
}

std::vector<int> Tsd::bounding_segments(const Trapezoid& t) const {
  std::vector<int> out;
  if (t.top >= 0) out.push_back(t.top);
  if (t.bot >= 0) out.push_back(t.bot);
  for (int v : {t.leftp, t.rightp}) {
    const VertexRef& r = vertices_[static_cast<std::size_t>(v)];
    if (r.a >= 0) out.push_back(r.a);
    if (r.b >= 0) out.push_back(r.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Side of segment s relative to t over their common x-range; they must not cross.
template <class TsdT>
Side segment_side(const TsdT& tsd, int s_left, int s, int t_left, int t) {
  if (tsd.compare_vertices(s_left, t_left) > 0) return tsd.vertex_side(s_left, t);
  return flip(tsd.vertex_side(t_left, s));
}

}  // namespace

std::optional<Tsd::Passage> Tsd::passage(int segment, int leaf_node) const {
  const Trapezoid& d = leaf_trapezoid(leaf_node);
  const Segment& s = (*set_)[static_cast<std::size_t>(segment)];
  Passage p;
  p.leaf = leaf_node;
  p.entry = left_vertex_[static_cast<std::size_t>(segment)];
  p.entry_kind = Bound::Endpoint;
  p.exit = right_vertex_[static_cast<std::size_t>(segment)];
  p.exit_kind = Bound::Endpoint;
  auto raise_entry = [&](int v, Bound kind) {
    if (compare_vertices(v, p.entry) > 0) {
      p.entry = v;
      p.entry_kind = kind;
    }
  };
  auto lower_exit = [&](int v, Bound kind) {
    if (compare_vertices(v, p.exit) < 0) {
      p.exit = v;
      p.exit_kind = kind;
    }
  };
  raise_entry(d.leftp, Bound::Wall);
  lower_exit(d.rightp, Bound::Wall);
  if (compare_vertices(p.entry, p.exit) >= 0) return std::nullopt;

  // want: +1 means s must lie above the boundary (bot), -1 below (top).
  auto clip = [&](int boundary, int want) -> bool {
    if (boundary < 0) return true;
    auto it = crossing_vertex_.find(pair_key(segment, boundary));
    const Segment& t = (*set_)[static_cast<std::size_t>(boundary)];
    if (it != crossing_vertex_.end()) {
      int left_side = orientation(t.left, t.right, s.left);
      if (left_side == want)
        lower_exit(it->second, Bound::Crossing);
      else
        raise_entry(it->second, Bound::Crossing);
      return true;
    }
    Side side = segment_side(*this, left_vertex_[static_cast<std::size_t>(segment)], segment,
                             left_vertex_[static_cast<std::size_t>(boundary)], boundary);
    return static_cast<int>(side) == want;
  };
  if (!clip(d.top, -1) || !clip(d.bot, +1)) return std::nullopt;
  if (compare_vertices(p.entry, p.exit) >= 0) return std::nullopt;
  return p;
}

void Tsd::collect_stabbed(int segment, std::vector<int>& out) {
  const int lv = left_vertex_[static_cast<std::size_t>(segment)];
  const int rv = right_vertex_[static_cast<std::size_t>(segment)];
  const Segment& s = (*set_)[static_cast<std::size_t>(segment)];
  ++visit_stamp_;
  std::vector<int> stack{root()};
  visit_mark_[0] = visit_stamp_;
  auto push = [&](int node) {
    if (visit_mark_[static_cast<std::size_t>(node)] == visit_stamp_) return;
    visit_mark_[static_cast<std::size_t>(node)] = visit_stamp_;
    stack.push_back(node);
  };
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const TsdNode& node = nodes_[static_cast<std::size_t>(id)];
    switch (node.kind) {
      case TsdNode::Kind::Leaf:
        if (passage(segment, id)) out.push_back(id);
        break;
      case TsdNode::Kind::XNode:
        if (compare_vertices(lv, node.key) < 0) push(node.child[0]);
        if (compare_vertices(rv, node.key) > 0) push(node.child[1]);
        break;
      case TsdNode::Kind::YNode: {
        const int t_index = node.key;
        auto it = crossing_vertex_.find(pair_key(segment, t_index));
        auto child_for = [&](Side side) { return side == Side::Above ? node.child[0] : node.child[1]; };
        if (it == crossing_vertex_.end()) {
          push(child_for(segment_side(*this, lv, segment, left_vertex_[static_cast<std::size_t>(t_index)], t_index)));
        } else {
          const Segment& t = (*set_)[static_cast<std::size_t>(t_index)];
          Side left_side = static_cast<Side>(orientation(t.left, t.right, s.left));
          if (compare_vertices(it->second, node.lo) > 0) push(child_for(left_side));
          if (compare_vertices(it->second, node.hi) < 0) push(child_for(flip(left_side)));
        }
        break;
      }
    }
  }
}

const StepStats& Tsd::insert_segment(std::size_t segment_index) {
  if (segment_index >= set_->size()) throw Error(ErrorCode::InvalidArgument, "segment index out of range");
  const int seg = static_cast<int>(segment_index);
  if (priority_[segment_index] != 0)
    throw Error(ErrorCode::DuplicateSegment, "segment " + std::to_string((*set_)[segment_index].id));
  const Segment& s = (*set_)[segment_index];
  for (const Point* p : {&s.left, &s.right}) {
    if (!(bounds_.min.x() < p->x() && p->x() < bounds_.max.x() && bounds_.min.y() < p->y() &&
          p->y() < bounds_.max.y()))
      throw Error(ErrorCode::OutOfBounds, "segment " + std::to_string(s.id) + " endpoint " + to_string(*p));
  }
  const int j = steps() + 1;
  priority_[segment_index] = j;
  order_.push_back(seg);
  left_vertex_[segment_index] = endpoint_vertex(seg, true);
  right_vertex_[segment_index] = endpoint_vertex(seg, false);
  const std::size_t first_new_vertex = vertices_.size();
  for (auto [a, b] : set_->crossings()) {
    if (a == seg && priority_[static_cast<std::size_t>(b)] != 0) crossing_vertex(a, b);
    if (b == seg && priority_[static_cast<std::size_t>(a)] != 0) crossing_vertex(a, b);
  }
  (void)first_new_vertex;

  std::vector<int> stabbed;
  collect_stabbed(seg, stabbed);
  std::vector<Passage> passages;
  passages.reserve(stabbed.size());
  for (int leaf : stabbed) passages.push_back(*passage(seg, leaf));
  std::sort(passages.begin(), passages.end(),
            [&](const Passage& a, const Passage& b) { return compare_vertices(a.entry, b.entry) < 0; });

  const std::size_t nodes_before = nodes_.size();
  const int lv = left_vertex_[segment_index];

  // New pieces per destroyed leaf.
  struct Pieces {
    int left = -1, upper = -1, lower = -1, right = -1;
  };
  std::vector<Pieces> pieces(passages.size());
  std::vector<int> new_leaves;
  int open_upper = -1, open_lower = -1;
  auto open_piece = [&](int top, int bot, int leftp) {
    int id = new_leaf(Trapezoid{top, bot, leftp, -1, j}, j);
    new_leaves.push_back(id);
    return id;
  };
  auto close_piece = [&](int node, int rightp) {
    traps_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(node)].key)].rightp = rightp;
    nodes_[static_cast<std::size_t>(node)].hi = rightp;
  };

  for (std::size_t k = 0; k < passages.size(); ++k) {
    const Passage& p = passages[k];
    const Trapezoid d = leaf_trapezoid(p.leaf);
    Pieces& out = pieces[k];
    if (p.entry_kind != Bound::Wall) {
      if (k > 0 && (open_upper != -1 || open_lower != -1)) throw std::logic_error("unclosed piece");
      out.left = open_piece(d.top, d.bot, d.leftp);
      close_piece(out.left, p.entry);
      open_upper = open_piece(d.top, seg, p.entry);
      open_lower = open_piece(seg, d.bot, p.entry);
    } else {
      if (k == 0) throw std::logic_error("first stabbed face entered through a wall");
      if (open_upper == -1)
        open_upper = open_piece(d.top, seg, p.entry);
      else if (leaf_trapezoid(open_upper).top != d.top)
        throw std::logic_error("upper merge with mismatched top");
      if (open_lower == -1)
        open_lower = open_piece(seg, d.bot, p.entry);
      else if (leaf_trapezoid(open_lower).bot != d.bot)
        throw std::logic_error("lower merge with mismatched bottom");
    }
    out.upper = open_upper;
    out.lower = open_lower;
    if (p.exit_kind != Bound::Wall) {
      close_piece(open_upper, p.exit);
      close_piece(open_lower, p.exit);
      open_upper = open_lower = -1;
      out.right = open_piece(d.top, d.bot, p.exit);
      close_piece(out.right, d.rightp);
    } else if (vertex_side(p.exit, seg) == Side::Above) {
      // The wall's lower ray is cut by the new segment; upper pieces stay apart.
      close_piece(open_upper, p.exit);
      open_upper = -1;
    } else {
      close_piece(open_lower, p.exit);
      open_lower = -1;
    }
  }
  if (open_upper != -1 || open_lower != -1) throw std::logic_error("pieces left open after last face");
  (void)lv;

  // Rewire destroyed leaves into local search structures.
  std::vector<int> leaf_depth(nodes_.size(), 0);
  auto attach = [&](int parent, int which, int child) {
    nodes_[static_cast<std::size_t>(parent)].child[which] = child;
    const TsdNode& c = nodes_[static_cast<std::size_t>(child)];
    if (c.kind == TsdNode::Kind::Leaf && c.creation_step == j) {
      auto& slot = leaf_depth[static_cast<std::size_t>(child)];
      slot = std::max(slot, nodes_[static_cast<std::size_t>(parent)].depth_from_root + 1);
    }
  };
  auto internal = [&](TsdNode::Kind kind, int key, int parent_depth, int lo, int hi) {
    TsdNode n;
    n.kind = kind;
    n.key = key;
    n.depth_from_root = parent_depth + 1;
    n.creation_step = j;
    n.lo = lo;
    n.hi = hi;
    int id = new_node(n);
    leaf_depth.push_back(0);
    max_depth_ = std::max(max_depth_, n.depth_from_root);
    return id;
  };
  for (std::size_t k = 0; k < passages.size(); ++k) {
    const Passage& p = passages[k];
    const Pieces& pc = pieces[k];
    const int old = p.leaf;
    const Trapezoid d = leaf_trapezoid(old);
    {
      // Deactivate.
      int pos = active_pos_[static_cast<std::size_t>(old)];
      int last = active_.back();
      active_[static_cast<std::size_t>(pos)] = last;
      active_pos_[static_cast<std::size_t>(last)] = pos;
      active_.pop_back();
      active_pos_[static_cast<std::size_t>(old)] = -1;
    }
    const int base_depth = nodes_[static_cast<std::size_t>(old)].depth_from_root;
    auto make_y = [&](int node) {
      nodes_[static_cast<std::size_t>(node)].kind = TsdNode::Kind::YNode;
      nodes_[static_cast<std::size_t>(node)].key = seg;
      attach(node, 0, pc.upper);
      attach(node, 1, pc.lower);
    };
    TsdNode& o = nodes_[static_cast<std::size_t>(old)];
    o.lo = d.leftp;
    o.hi = d.rightp;
    if (pc.left != -1 && pc.right != -1) {
      o.kind = TsdNode::Kind::XNode;
      o.key = p.entry;
      int xb = internal(TsdNode::Kind::XNode, p.exit, base_depth, p.entry, d.rightp);
      int y = internal(TsdNode::Kind::YNode, seg, base_depth + 1, p.entry, p.exit);
      attach(old, 0, pc.left);
      attach(old, 1, xb);
      attach(xb, 0, y);
      attach(xb, 1, pc.right);
      make_y(y);
    } else if (pc.left != -1) {
      o.kind = TsdNode::Kind::XNode;
      o.key = p.entry;
      int y = internal(TsdNode::Kind::YNode, seg, base_depth, p.entry, d.rightp);
      attach(old, 0, pc.left);
      attach(old, 1, y);
      make_y(y);
    } else if (pc.right != -1) {
      o.kind = TsdNode::Kind::XNode;
      o.key = p.exit;
      int y = internal(TsdNode::Kind::YNode, seg, base_depth, d.leftp, p.exit);
      attach(old, 0, y);
      attach(old, 1, pc.right);
      make_y(y);
    } else {
      make_y(old);
    }
  }
  for (int leaf : new_leaves) {
    int depth = leaf_depth[static_cast<std::size_t>(leaf)];
    nodes_[static_cast<std::size_t>(leaf)].depth_from_root = depth;
    max_depth_ = std::max(max_depth_, depth);
  }

  StepStats st;
  st.j = j;
  st.D = static_cast<int>(new_leaves.size());
  st.nodes_created = static_cast<int>(nodes_.size() - nodes_before);
  std::vector<int> adjacent;
  std::vector<std::pair<int, int>> visible;
  for (int leaf : new_leaves) {
    const Trapezoid& t = leaf_trapezoid(leaf);
    const VertexRef& l = vertices_[static_cast<std::size_t>(t.leftp)];
    if (l.kind == VertexRef::Kind::Crossing) {
      if (l.involves(seg)) {
        ++st.C;
      } else {
        ++st.O;
        int h = priority_[static_cast<std::size_t>(l.a)], i = priority_[static_cast<std::size_t>(l.b)];
        visible.emplace_back(std::min(h, i), std::max(h, i));
      }
      continue;
    }
    ++st.E;
    for (int other : bounding_segments(t))
      if (other != seg) adjacent.push_back(priority_[static_cast<std::size_t>(other)]);
  }
  std::sort(adjacent.begin(), adjacent.end());
  adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
  std::sort(visible.begin(), visible.end());
  visible.erase(std::unique(visible.begin(), visible.end()), visible.end());
  st.adjacent = std::move(adjacent);
  st.visible_crossings = std::move(visible);
  st.faces = active_.size();
  st.size_nodes = nodes_.size();
  st.max_depth = max_depth_;
  trajectory_.push_back(std::move(st));
  return trajectory_.back();
}

LocateResult Tsd::locate(const Point& q) const {
  if (!(bounds_.min.x() < q.x() && q.x() < bounds_.max.x() && bounds_.min.y() < q.y() && q.y() < bounds_.max.y()))
    throw Error(ErrorCode::OutOfBounds, "query " + to_string(q));
  LocateResult r;
  int id = root();
  while (nodes_[static_cast<std::size_t>(id)].kind != TsdNode::Kind::Leaf) {
    const TsdNode& n = nodes_[static_cast<std::size_t>(id)];
    ++r.comparisons;
    if (n.kind == TsdNode::Kind::XNode) {
      id = compare_point_vertex(q, n.key) < 0 ? n.child[0] : n.child[1];
    } else {
      Side side = is_above(q, (*set_)[static_cast<std::size_t>(n.key)]);
      if (side == Side::On) throw Error(ErrorCode::DegenerateQuery, "query on segment " + to_string(q));
      id = side == Side::Above ? n.child[0] : n.child[1];
    }
  }
  r.leaf = id;
  return r;
}

bool Tsd::leaf_contains(int node, const Point& q) const {
  const Trapezoid& t = leaf_trapezoid(node);
  if (compare_point_vertex(q, t.leftp) <= 0 || compare_point_vertex(q, t.rightp) >= 0) return false;
  if (t.top >= 0 && is_above(q, (*set_)[static_cast<std::size_t>(t.top)]) != Side::Below) return false;
  if (t.bot >= 0 && is_above(q, (*set_)[static_cast<std::size_t>(t.bot)]) != Side::Above) return false;
  return true;
}

std::vector<std::vector<int>> Tsd::enumerate_paths(std::size_t limit) const {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  auto rec = [&](auto&& self, int id) -> void {
    path.push_back(id);
    const TsdNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.kind == TsdNode::Kind::Leaf) {
      if (out.size() >= limit) throw Error(ErrorCode::TooManyPaths, "more than " + std::to_string(limit) + " paths");
      out.push_back(path);
    } else {
      self(self, n.child[0]);
      self(self, n.child[1]);
    }
    path.pop_back();
  };
  rec(rec, root());
  return out;
}

Tsd build(std::shared_ptr<const SegmentSet> set, std::span<const std::size_t> order, std::optional<Box> bounds) {
  Box box = bounds ? *bounds : default_bounds(*set);
  if (order.size() != set->size()) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
  Tsd tsd(std::move(set), std::move(box));
  for (std::size_t index : order) tsd.insert_segment(index);
  return tsd;
}

}  // namespace ric
