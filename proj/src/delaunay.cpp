#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "spacespec/errors.hpp"

namespace spacespec::detail {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return ad * (bdx * cdy - cdx * bdy) - bd * (adx * cdy - cdx * ady) + cd * (adx * bdy - bdx * ady);
}

namespace {

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // nb[i] lies across the edge opposite v[i]
};

class Triangulator {
public:
  explicit Triangulator(std::vector<Vec2> pts) : p_(std::move(pts)) {}

  void add_super(int a, int b, int c) { tris_.push_back(Tri{{a, b, c}, {-1, -1, -1}}); }

  void insert(int pi) {
    const Vec2& p = p_[static_cast<std::size_t>(pi)];
    const int t = locate(p);
    const Tri tri = tris_[static_cast<std::size_t>(t)];
    int on_edge = -1;
    for (int i = 0; i < 3; ++i) {
      if (side(tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], p) <= 0.0) {
        if (on_edge >= 0) throw MeshError("duplicate point in triangulation input");
        on_edge = i;
      }
    }
    if (on_edge < 0)
      split_interior(t, pi);
    else
      split_edge(t, on_edge, pi);
    while (!stack_.empty()) {
      const int s = stack_.back();
      stack_.pop_back();
      legalize(s);
    }
  }

  std::vector<std::array<int, 3>> result(int real_count) const {
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_)
      if (t.v[0] < real_count && t.v[1] < real_count && t.v[2] < real_count) out.push_back(t.v);
    return out;
  }

private:
  const Vec2& pt(int i) const { return p_[static_cast<std::size_t>(i)]; }

  // Sine of the angle of p off the directed line a->b, snapped to zero when it
  // is below roundoff, so points on an edge are seen from both sides.
  double side(int a, int b, const Vec2& p) const {
    const double o = orient2d(pt(a), pt(b), p);
    const double scale = (pt(b) - pt(a)).norm() * (p - pt(a)).norm();
    if (std::abs(o) <= 1e-12 * scale) return 0.0;
    return o / scale;
  }
  Tri& tri(int i) { return tris_[static_cast<std::size_t>(i)]; }

  int locate(const Vec2& p) {
    int t = last_;
    for (std::size_t guard = 0; guard < 4 * tris_.size() + 16; ++guard) {
      const Tri& tr = tri(t);
      walk_state_ ^= walk_state_ << 13;
      walk_state_ ^= walk_state_ >> 7;
      walk_state_ ^= walk_state_ << 17;
      const int r = static_cast<int>(walk_state_ % 3);
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = (k + r) % 3;
        if (side(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p) < 0.0 && tr.nb[i] >= 0) {
          t = tr.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    // Roundoff can trap the walk in a cycle; fall back to the best scan hit.
    int best = -1;
    double best_side = -1.0;
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      const Tri& tr = tris_[k];
      double m = 1.0;
      for (int i = 0; i < 3; ++i) m = std::min(m, side(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p));
      if (m >= 0.0) return static_cast<int>(k);
      if (best < 0 || m > best_side) {
        best = static_cast<int>(k);
        best_side = m;
      }
    }
    if (best >= 0 && best_side > -1e-9) return best;
    throw MeshError("point location failed");
  }

  void replace_neighbor(int t, int old_nb, int new_nb) {
    if (t < 0) return;
    for (int& n : tri(t).nb)
      if (n == old_nb) {
        n = new_nb;
        return;
      }
  }

  void split_interior(int t, int p) {
    const Tri old = tri(t);
    const int a = old.v[0], b = old.v[1], c = old.v[2];
    const int na = old.nb[0], nbb = old.nb[1], nc = old.nb[2];
    const int t1 = static_cast<int>(tris_.size());
    const int t2 = t1 + 1;
    tri(t) = Tri{{p, b, c}, {na, t1, t2}};
    tris_.push_back(Tri{{p, c, a}, {nbb, t2, t}});
    tris_.push_back(Tri{{p, a, b}, {nc, t, t1}});
    replace_neighbor(nbb, t, t1);
    replace_neighbor(nc, t, t2);
    stack_.insert(stack_.end(), {t, t1, t2});
    last_ = t;
  }

  void split_edge(int t, int i, int p) {
    const Tri old = tri(t);
    const int a = old.v[i], b = old.v[(i + 1) % 3], c = old.v[(i + 2) % 3];
    const int bt = old.nb[(i + 1) % 3];  // across (c, a)
    const int ct = old.nb[(i + 2) % 3];  // across (a, b)
    const int n = old.nb[i];
    if (n < 0) throw MeshError("point on the outer hull edge");
    const Tri on = tri(n);
    int j = 0;
    while (on.nb[j] != t) ++j;
    const int d = on.v[j];
    // on = (d, c, b) up to rotation
    const int nb_opp_b = on.nb[(j + 2) % 3];  // across (d, c)
    const int nb_opp_c = on.nb[(j + 1) % 3];  // across (b, d)
    const int t2 = static_cast<int>(tris_.size());
    const int n2 = t2 + 1;
    tri(t) = Tri{{p, a, b}, {ct, n2, t2}};
    tris_.push_back(Tri{{p, c, a}, {bt, t, n}});
    tri(n) = Tri{{p, d, c}, {nb_opp_b, t2, n2}};
    tris_.push_back(Tri{{p, b, d}, {nb_opp_c, n, t}});
    replace_neighbor(bt, t, t2);
    replace_neighbor(nb_opp_c, n, n2);
    stack_.insert(stack_.end(), {t, t2, n, n2});
    last_ = t;
  }

  // Triangle s has the new point at v[0]; flip its opposite edge if needed.
  void legalize(int s) {
    const Tri t = tri(s);
    const int n = t.nb[0];
    if (n < 0) return;
    const Tri on = tri(n);
    int j = 0;
    while (on.nb[j] != s) ++j;
    const int d = on.v[j];
    if (!(incircle(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]), pt(d)) > 0.0)) return;
    const int p = t.v[0], x = t.v[1], y = t.v[2];
    const int A = t.nb[1], B = t.nb[2];
    const int C = on.nb[(j + 1) % 3], D = on.nb[(j + 2) % 3];
    tri(s) = Tri{{p, x, d}, {C, n, B}};
    tri(n) = Tri{{p, d, y}, {D, A, s}};
    replace_neighbor(A, s, n);
    replace_neighbor(C, n, s);
    stack_.push_back(s);
    stack_.push_back(n);
  }

  std::vector<Vec2> p_;
  std::vector<Tri> tris_;
  std::vector<int> stack_;
  int last_ = 0;
  std::uint64_t walk_state_ = 0x9e3779b97f4a7c15ULL;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw MeshError("need at least three points to triangulate");
  Vec2 lo = points[0], hi = points[0];
  for (const Vec2& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 center = 0.5 * (lo + hi);
  const double scale = std::max((hi - lo).maxCoeff(), 1e-300);
  std::vector<Vec2> q;
  q.reserve(static_cast<std::size_t>(n) + 3);
  for (const Vec2& p : points) q.push_back((p - center) / scale);
  const double big = 1e4;
  q.emplace_back(-big, -big);
  q.emplace_back(big, -big);
  q.emplace_back(0.0, big);

  // Insert in serpentine row order so consecutive points are close.
  const int bins = std::max(1, static_cast<int>(std::sqrt(n / 4.0)));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    const Vec2& p = q[static_cast<std::size_t>(i)];
    const int row = std::min(bins - 1, static_cast<int>((p.y() + 0.5) * bins));
    const double x = row % 2 == 0 ? p.x() : -p.x();
    return std::make_pair(row, x);
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });

  Triangulator tr(std::move(q));
  tr.add_super(n, n + 1, n + 2);
  for (int i : order) tr.insert(i);
  return tr.result(n);
}

}  // namespace spacespec::detail
