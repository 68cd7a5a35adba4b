#include "ric/delaunay.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace ric {

namespace {

// Polynomial in the symbolic scale M, degree <= 4.
struct Poly {
  std::array<Rational, 5> c;

  static Poly constant(const Rational& v) {
    Poly p;
    p.c[0] = v;
    return p;
  }
  static Poly linear(const Rational& m, const Rational& v) {
    Poly p;
    p.c[0] = v;
    p.c[1] = m;
    return p;
  }
  int sign() const {
    for (int d = 4; d >= 0; --d)
      if (int s = sgn(c[static_cast<std::size_t>(d)])) return s;
    return 0;
  }
};

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  for (std::size_t d = 0; d < 5; ++d) r.c[d] = a.c[d] + b.c[d];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r;
  for (std::size_t d = 0; d < 5; ++d) r.c[d] = a.c[d] - b.c[d];
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (std::size_t i = 0; i < 5; ++i) {
    if (sgn(a.c[i]) == 0) continue;
    for (std::size_t k = 0; i + k < 5; ++k) r.c[i + k] += a.c[i] * b.c[k];
  }
  return r;
}

struct SymPoint {
  Poly x, y;
};

const Rational& center_x() {
  static const Rational v(1, 2);
  return v;
}
const Rational& center_y() {
  static const Rational v(1, 3);
  return v;
}

SymPoint symbolic(int v) {
  // Directions of the three bounding vertices away from the center.
  static constexpr int dir[3][2] = {{-1, -1}, {1, -1}, {0, 1}};
  const auto& d = dir[-v - 1];
  return SymPoint{Poly::linear(d[0], center_x()), Poly::linear(d[1], center_y())};
}

int orient_poly(const SymPoint& p, const SymPoint& q, const SymPoint& r) {
  return ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)).sign();
}

int in_circle_poly(const SymPoint& a, const SymPoint& b, const SymPoint& c, const SymPoint& d) {
  const Poly adx = a.x - d.x, ady = a.y - d.y, bdx = b.x - d.x, bdy = b.y - d.y, cdx = c.x - d.x, cdy = c.y - d.y;
  const Poly al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  const Poly det = adx * (bdy * cl - cdy * bl) - ady * (bdx * cl - cdx * bl) + al * (bdx * cdy - cdx * bdy);
  return det.sign();
}

constexpr std::int64_t kFastLimit = std::int64_t{1} << 29;

bool fast(const Point& p) {
  return p.is_small() && p.small_x() > -kFastLimit && p.small_x() < kFastLimit && p.small_y() > -kFastLimit &&
         p.small_y() < kFastLimit;
}

int in_circle_ccw(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (fast(a) && fast(b) && fast(c) && fast(d)) {
    using I = __int128;
    const I adx = a.small_x() - d.small_x(), ady = a.small_y() - d.small_y();
    const I bdx = b.small_x() - d.small_x(), bdy = b.small_y() - d.small_y();
    const I cdx = c.small_x() - d.small_x(), cdy = c.small_y() - d.small_y();
    const I al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    const I det = adx * (bdy * cl - cdy * bl) - ady * (bdx * cl - cdx * bl) + al * (bdx * cdy - cdx * bdy);
    return (det > 0) - (det < 0);
  }
  auto lift = [](const Point& p) { return SymPoint{Poly::constant(p.x()), Poly::constant(p.y())}; };
  return in_circle_poly(lift(a), lift(b), lift(c), lift(d));
}

}  // namespace

int in_circle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o = orientation(a, b, c);
  if (o == 0) throw Error(ErrorCode::CollinearBase, "in-circle base triangle is degenerate");
  return o * in_circle_ccw(a, b, c, d);
}

DelaunayHistory::DelaunayHistory(std::shared_ptr<const std::vector<Site>> sites) : sites_(std::move(sites)) {
  std::vector<std::size_t> idx(sites_->size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return compare_sheared((*sites_)[a].point, (*sites_)[b].point) < 0;
  });
  for (std::size_t k = 1; k < idx.size(); ++k)
    if ((*sites_)[idx[k - 1]].point == (*sites_)[idx[k]].point)
      throw Error(ErrorCode::DuplicateSite, "sites " + std::to_string((*sites_)[idx[k - 1]].id) + " and " +
                                                std::to_string((*sites_)[idx[k]].id) + " coincide");
  priority_.assign(sites_->size(), 0);
  DelaunayTriangle root;
  root.v = {kSymbolicA, kSymbolicB, kSymbolicC};
  root.final = true;
  triangles_.push_back(root);
}

int DelaunayHistory::orient(int a, int b, int c) const {
  if (a >= 0 && b >= 0 && c >= 0)
    return orientation((*sites_)[static_cast<std::size_t>(a)].point, (*sites_)[static_cast<std::size_t>(b)].point,
                       (*sites_)[static_cast<std::size_t>(c)].point);
  auto sp = [&](int v) {
    if (v < 0) return symbolic(v);
    const Point& p = (*sites_)[static_cast<std::size_t>(v)].point;
    return SymPoint{Poly::constant(p.x()), Poly::constant(p.y())};
  };
  return orient_poly(sp(a), sp(b), sp(c));
}

int DelaunayHistory::orient_point(int a, int b, const Point& q) const {
  if (a >= 0 && b >= 0)
    return orientation((*sites_)[static_cast<std::size_t>(a)].point, (*sites_)[static_cast<std::size_t>(b)].point, q);
  auto sp = [&](int v) {
    if (v < 0) return symbolic(v);
    const Point& p = (*sites_)[static_cast<std::size_t>(v)].point;
    return SymPoint{Poly::constant(p.x()), Poly::constant(p.y())};
  };
  return orient_poly(sp(a), sp(b), SymPoint{Poly::constant(q.x()), Poly::constant(q.y())});
}

int DelaunayHistory::in_circle_vertices(int a, int b, int c, int d) const {
  if (a >= 0 && b >= 0 && c >= 0 && d >= 0)
    return in_circle_ccw((*sites_)[static_cast<std::size_t>(a)].point, (*sites_)[static_cast<std::size_t>(b)].point,
                         (*sites_)[static_cast<std::size_t>(c)].point, (*sites_)[static_cast<std::size_t>(d)].point);
  auto sp = [&](int v) {
    if (v < 0) return symbolic(v);
    const Point& p = (*sites_)[static_cast<std::size_t>(v)].point;
    return SymPoint{Poly::constant(p.x()), Poly::constant(p.y())};
  };
  return in_circle_poly(sp(a), sp(b), sp(c), sp(d));
}

// +1 strictly inside, 0 on the boundary, -1 outside.
int DelaunayHistory::boundary_side(int triangle, const Point& q) const {
  const auto& v = triangles_[static_cast<std::size_t>(triangle)].v;
  int result = 1;
  for (int k = 0; k < 3; ++k) {
    const int o = orient_point(v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % 3)], q);
    if (o < 0) return -1;
    if (o == 0) result = 0;
  }
  return result;
}

bool DelaunayHistory::contains(int triangle, const Point& q) const { return boundary_side(triangle, q) > 0; }

int DelaunayHistory::new_triangle(std::array<int, 3> v, int cost) {
  DelaunayTriangle t;
  t.v = v;
  t.creation_step = steps() + 1;
  t.cost = cost;
  triangles_.push_back(t);
  ++alive_;
  return static_cast<int>(triangles_.size()) - 1;
}

void DelaunayHistory::add_child(int parent, int child) {
  auto& t = triangles_[static_cast<std::size_t>(parent)];
  if (t.alive()) {
    t.destroyed_step = steps() + 1;
    --alive_;
  }
  t.children[static_cast<std::size_t>(t.child_count++)] = child;
}

void DelaunayHistory::set_neighbor(int t, int old_nbr, int new_nbr) {
  if (t < 0) return;
  for (int& n : triangles_[static_cast<std::size_t>(t)].nbr)
    if (n == old_nbr) n = new_nbr;
}

// Wires neighbor links of freshly created triangles that replace `old`.
void DelaunayHistory::link(std::span<const int> fresh, std::span<const int> old) {
  for (int f : fresh) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& fv = triangles_[static_cast<std::size_t>(f)].v;
      const int u = fv[(i + 1) % 3], w = fv[(i + 2) % 3];
      int found = -1;
      for (int g : fresh) {
        if (g == f) continue;
        const auto& gv = triangles_[static_cast<std::size_t>(g)].v;
        for (std::size_t k = 0; k < 3; ++k)
          if (gv[(k + 1) % 3] == w && gv[(k + 2) % 3] == u) found = g;
      }
      if (found >= 0) {
        triangles_[static_cast<std::size_t>(f)].nbr[i] = found;
        continue;
      }
      for (int o : old) {
        const auto& ot = triangles_[static_cast<std::size_t>(o)];
        for (std::size_t k = 0; k < 3; ++k) {
          if (ot.v[(k + 1) % 3] == u && ot.v[(k + 2) % 3] == w) {
            const int outer = ot.nbr[k];
            triangles_[static_cast<std::size_t>(f)].nbr[i] = outer;
            set_neighbor(outer, o, f);
          }
        }
      }
    }
  }
}

std::array<int, 2> DelaunayHistory::flip(int t1, int p) {
  // t1 = (x, y, p) with neighbor t2 across xy holding d.
  const DelaunayTriangle a = triangles_[static_cast<std::size_t>(t1)];
  const auto ip = static_cast<std::size_t>(std::find(a.v.begin(), a.v.end(), p) - a.v.begin());
  const int x = a.v[(ip + 1) % 3], y = a.v[(ip + 2) % 3];
  const int t2 = a.nbr[ip];
  const DelaunayTriangle& b = triangles_[static_cast<std::size_t>(t2)];
  int d = -100;
  for (int v : b.v)
    if (v != x && v != y) d = v;
  const int cost = std::max(a.cost, b.cost);
  const int na = new_triangle({x, d, p}, cost);
  const int nb = new_triangle({d, y, p}, cost);
  const std::array<int, 2> fresh{na, nb}, old{t1, t2};
  link(fresh, old);
  for (int o : old) {
    add_child(o, na);
    add_child(o, nb);
  }
  return fresh;
}

void DelaunayHistory::legalize(int p, std::vector<int> stack, int& flips) {
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    const DelaunayTriangle& tr = triangles_[static_cast<std::size_t>(t)];
    if (!tr.alive()) continue;
    const auto ip = static_cast<std::size_t>(std::find(tr.v.begin(), tr.v.end(), p) - tr.v.begin());
    const int opp = tr.nbr[ip];
    if (opp < 0) continue;
    const int x = tr.v[(ip + 1) % 3], y = tr.v[(ip + 2) % 3];
    int d = -100;
    for (int v : triangles_[static_cast<std::size_t>(opp)].v)
      if (v != x && v != y) d = v;
    const int s = in_circle_vertices(x, y, p, d);
    if (s == 0)
      throw Error(ErrorCode::DegeneratePosition,
                  "co-circular sites while inserting site " + std::to_string((*sites_)[static_cast<std::size_t>(p)].id));
    if (s < 0) continue;
    const auto fresh = flip(t, p);
    ++flips;
    stack.push_back(fresh[0]);
    stack.push_back(fresh[1]);
  }
}

int DelaunayHistory::locate_insertion(const Point& q) const {
  int t = 0;
  while (!triangles_[static_cast<std::size_t>(t)].alive()) {
    const auto& tr = triangles_[static_cast<std::size_t>(t)];
    int next = -1;
    for (int k = 0; k < tr.child_count && next < 0; ++k)
      if (boundary_side(tr.children[static_cast<std::size_t>(k)], q) >= 0) next = tr.children[static_cast<std::size_t>(k)];
    t = next;
  }
  return t;
}

void DelaunayHistory::record_star(int p, int any_triangle) {
  Star star;
  star.site = p;
  int t = any_triangle;
  do {
    auto& tr = triangles_[static_cast<std::size_t>(t)];
    const auto ip = static_cast<std::size_t>(std::find(tr.v.begin(), tr.v.end(), p) - tr.v.begin());
    star.triangles.push_back(t);
    star.rays.push_back(tr.v[(ip + 1) % 3]);
    t = tr.nbr[(ip + 1) % 3];  // across (p, next ray)
  } while (t != any_triangle);
  const int D = static_cast<int>(star.triangles.size());
  star.weight = std::bit_width(static_cast<unsigned>(D));
  // Split ray: fewest sectors left on the worse side of the first test.
  int best = D + 1;
  for (int r = 0; r < D; ++r) {
    int a = 0;
    while (a + 1 < D && orient(p, star.rays[static_cast<std::size_t>(r)],
                               star.rays[static_cast<std::size_t>((r + a + 1) % D)]) > 0)
      ++a;
    const int worst = std::max(a + 1, D - a);
    if (worst < best) {
      best = worst;
      star.split = r;
      star.upper = a;
    }
  }
  for (int tri : star.triangles) {
    auto& tr = triangles_[static_cast<std::size_t>(tri)];
    tr.final = true;
    tr.cost += star.weight;
    weighted_depth_ = std::max(weighted_depth_, tr.cost);
  }
  stars_.push_back(std::move(star));
}

const DelaunayStepStats& DelaunayHistory::insert_site(std::size_t site_index) {
  if (site_index >= sites_->size()) throw Error(ErrorCode::InvalidArgument, "site index out of range");
  if (priority_[site_index] != 0)
    throw Error(ErrorCode::DuplicateSite, "site " + std::to_string((*sites_)[site_index].id) + " already inserted");
  const int p = static_cast<int>(site_index);
  const Point& q = (*sites_)[site_index].point;
  const int t = locate_insertion(q);
  const DelaunayTriangle tr = triangles_[static_cast<std::size_t>(t)];
  int on_edge = -1;
  for (std::size_t k = 0; k < 3; ++k)
    if (orient_point(tr.v[(k + 1) % 3], tr.v[(k + 2) % 3], q) == 0) on_edge = static_cast<int>(k);

  std::vector<int> fresh;
  if (on_edge < 0) {
    const auto [a, b, c] = tr.v;
    fresh = {new_triangle({a, b, p}, tr.cost), new_triangle({b, c, p}, tr.cost), new_triangle({c, a, p}, tr.cost)};
    const std::array<int, 1> old{t};
    link(fresh, old);
    for (int f : fresh) add_child(t, f);
  } else {
    const auto k = static_cast<std::size_t>(on_edge);
    const int z = tr.v[k], x = tr.v[(k + 1) % 3], y = tr.v[(k + 2) % 3];
    const int t2 = tr.nbr[k];
    const DelaunayTriangle other = triangles_[static_cast<std::size_t>(t2)];
    int w = -100;
    for (int v : other.v)
      if (v != x && v != y) w = v;
    fresh = {new_triangle({x, p, z}, tr.cost), new_triangle({p, y, z}, tr.cost), new_triangle({y, p, w}, other.cost),
             new_triangle({p, x, w}, other.cost)};
    const std::array<int, 2> old{t, t2};
    link(fresh, old);
    add_child(t, fresh[0]);
    add_child(t, fresh[1]);
    add_child(t2, fresh[2]);
    add_child(t2, fresh[3]);
  }
  const std::size_t first_new = triangles_.size() - fresh.size();
  int flips = 0;
  legalize(p, fresh, flips);

  int any = -1;
  for (std::size_t i = first_new; i < triangles_.size() && any < 0; ++i)
    if (triangles_[i].alive()) any = static_cast<int>(i);
  priority_[site_index] = steps() + 1;
  record_star(p, any);

  DelaunayStepStats st;
  st.j = steps() + 1;
  const Star& star = stars_.back();
  st.D = static_cast<int>(star.triangles.size());
  st.flips = flips;
  for (int r : star.rays) st.adjacent.push_back(r >= 0 ? priority_[static_cast<std::size_t>(r)] : r);
  std::sort(st.adjacent.begin(), st.adjacent.end());
  st.weighted_depth = weighted_depth_;
  st.size_triangles = triangles_.size();
  trajectory_.push_back(std::move(st));
  return trajectory_.back();
}

TriangleLocation DelaunayHistory::locate_v1(const Point& q) const {
  TriangleLocation loc{0, 0};
  while (!triangles_[static_cast<std::size_t>(loc.triangle)].alive()) {
    const auto& tr = triangles_[static_cast<std::size_t>(loc.triangle)];
    int next = -1;
    for (int k = 0; k < tr.child_count; ++k) {
      const int c = tr.children[static_cast<std::size_t>(k)];
      ++loc.comparisons;
      const int side = boundary_side(c, q);
      if (side == 0) throw Error(ErrorCode::DegenerateQuery, "query lies on a triangle edge");
      if (side > 0) {
        next = c;
        break;
      }
    }
    if (next < 0) throw Error(ErrorCode::DegenerateQuery, "query not covered by children");
    loc.triangle = next;
  }
  return loc;
}

TriangleLocation DelaunayHistory::locate_v2(const Point& q) const {
  TriangleLocation loc{0, 0};
  while (!triangles_[static_cast<std::size_t>(loc.triangle)].alive()) {
    const Star& star = stars_[static_cast<std::size_t>(triangles_[static_cast<std::size_t>(loc.triangle)].destroyed_step - 1)];
    const int D = static_cast<int>(star.rays.size());
    auto test = [&](int offset) {
      ++loc.comparisons;
      const int o = orient_point(star.site, star.rays[static_cast<std::size_t>((star.split + offset) % D)], q);
      if (o == 0) throw Error(ErrorCode::DegenerateQuery, "query collinear with a star edge");
      return o > 0;
    };
    // Sector offsets relative to the split ray; sector k lies between rays k and k+1.
    int lo, hi;
    if (test(0)) {
      lo = 0;
      hi = star.upper;
    } else {
      lo = star.upper;
      hi = D - 1;
    }
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (test(mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    loc.triangle = star.triangles[static_cast<std::size_t>((star.split + lo) % D)];
  }
  return loc;
}

std::vector<int> DelaunayHistory::alive_triangles() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < triangles_.size(); ++i)
    if (triangles_[i].alive()) out.push_back(static_cast<int>(i));
  return out;
}

int DelaunayHistory::longest_weighted_path() const {
  std::vector<int> best(triangles_.size(), 0);
  int result = 0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tr = triangles_[t];
    result = std::max(result, best[t]);
    for (int k = 0; k < tr.child_count; ++k) {
      const auto c = static_cast<std::size_t>(tr.children[static_cast<std::size_t>(k)]);
      const auto& ct = triangles_[c];
      const int w = ct.final ? stars_[static_cast<std::size_t>(ct.creation_step - 1)].weight : 0;
      best[c] = std::max(best[c], best[t] + w);
    }
  }
  return result;
}

DelaunayHistory build_delaunay(std::shared_ptr<const std::vector<Site>> sites, std::span<const std::size_t> order) {
  DelaunayHistory dag(std::move(sites));
  for (std::size_t i : order) dag.insert_site(i);
  return dag;
}

bool empty_circumcircle_check(const DelaunayHistory& dag) {
  std::vector<int> inserted;
  for (std::size_t i = 0; i < dag.sites().size(); ++i)
    if (dag.priority(static_cast<int>(i)) > 0) inserted.push_back(static_cast<int>(i));
  for (int t : dag.alive_triangles()) {
    const auto& v = dag.triangles()[static_cast<std::size_t>(t)].v;
    for (int s : inserted) {
      if (s == v[0] || s == v[1] || s == v[2]) continue;
      if (dag.in_circle_vertices(v[0], v[1], v[2], s) >= 0) return false;
    }
  }
  return true;
}

EventMatrix delaunay_events(std::span<const DelaunayStepStats> trajectory) {
  EventMatrix m(static_cast<int>(trajectory.size()), 3);
  for (const DelaunayStepStats& st : trajectory) {
    for (int a : st.adjacent) {
      if (a > 0)
        m.set(a, st.j);
      else
        m.set_pseudo(-a - 1, st.j);
    }
  }
  return m;
}

namespace {

// Pencil parameter of the circle through a, b and p: num / den with den > 0.
struct Pencil {
  __int128 num, den;
};

}  // namespace

std::optional<std::array<int, 4>> find_cocircular(std::span<const Site> sites) {
  const auto n = static_cast<int>(sites.size());
  const bool all_fast =
      std::all_of(sites.begin(), sites.end(), [](const Site& s) { return fast(s.point); });
  if (all_fast) {
    std::vector<std::pair<Pencil, int>> vals;
    for (int a = 0; a < n; ++a) {
      const Point& pa = sites[static_cast<std::size_t>(a)].point;
      for (int b = a + 1; b < n; ++b) {
        const Point& pb = sites[static_cast<std::size_t>(b)].point;
        const __int128 ux = pb.small_x() - pa.small_x(), uy = pb.small_y() - pa.small_y();
        vals.clear();
        for (int c = b + 1; c < n; ++c) {
          const Point& pc = sites[static_cast<std::size_t>(c)].point;
          const __int128 px = pc.small_x() - pa.small_x(), py = pc.small_y() - pa.small_y();
          __int128 den = 2 * (ux * py - uy * px);
          if (den == 0) continue;
          __int128 num = px * px + py * py - (ux * px + uy * py);
          if (den < 0) {
            den = -den;
            num = -num;
          }
          vals.push_back({Pencil{num, den}, c});
        }
        std::sort(vals.begin(), vals.end(),
                  [](const auto& l, const auto& r) { return l.first.num * r.first.den < r.first.num * l.first.den; });
        for (std::size_t k = 1; k < vals.size(); ++k)
          if (vals[k - 1].first.num * vals[k].first.den == vals[k].first.num * vals[k - 1].first.den)
            return std::array<int, 4>{a, b, vals[k - 1].second, vals[k].second};
      }
    }
    return std::nullopt;
  }
  std::map<Rational, int> seen;
  for (int a = 0; a < n; ++a) {
    const Point& pa = sites[static_cast<std::size_t>(a)].point;
    for (int b = a + 1; b < n; ++b) {
      const Point& pb = sites[static_cast<std::size_t>(b)].point;
      const Rational ux = pb.x() - pa.x(), uy = pb.y() - pa.y();
      seen.clear();
      for (int c = b + 1; c < n; ++c) {
        const Point& pc = sites[static_cast<std::size_t>(c)].point;
        const Rational px = pc.x() - pa.x(), py = pc.y() - pa.y();
        const Rational den = 2 * (ux * py - uy * px);
        if (sgn(den) == 0) continue;
        const Rational t = (px * px + py * py - (ux * px + uy * py)) / den;
        auto [it, inserted] = seen.emplace(t, c);
        if (!inserted) return std::array<int, 4>{a, b, it->second, c};
      }
    }
  }
  return std::nullopt;
}

}  // namespace ric
