#include "spacespec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "delaunay.hpp"
#include "spacespec/errors.hpp"

namespace spacespec {

namespace {

using Edge = std::pair<int, int>;

Edge edge_key(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::map<Edge, int> edge_counts(const std::vector<std::array<int, 3>>& tris) {
  std::map<Edge, int> counts;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) ++counts[edge_key(t[i], t[(i + 1) % 3])];
  return counts;
}

struct BoundaryNode {
  Vec2 c;  // conformal coordinates
  Vec2 s;  // straight-chart coordinates
  int side;
};

Vec2 to_chart(ChartKind from, ChartKind to, const Vec2& x) {
  if (from == to) return x;
  return chart_convert(ModelPoint{from, x}, to).coords;
}

// Conformal points that the straight chart can also represent.
bool convertible(ChartKind conf, const Vec2& c) {
  if (conf == ChartKind::stereographic) return c.squaredNorm() < 1.0 - 1e-12;
  return in_chart_region(conf, c);
}

std::vector<BoundaryNode> boundary_nodes(const ConvexBody& body, ChartKind conf, double spacing) {
  const ChartKind straight = body.chart();
  std::vector<BoundaryNode> nodes;
  const int samples = 64;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Vec2 p = body.vertices()[i];
    const Vec2 q = body.vertices()[(i + 1) % body.size()];
    std::vector<double> cum(samples + 1, 0.0);
    Vec2 prev = to_chart(straight, conf, p);
    for (int k = 1; k <= samples; ++k) {
      const Vec2 c = to_chart(straight, conf, p + (static_cast<double>(k) / samples) * (q - p));
      cum[static_cast<std::size_t>(k)] = cum[static_cast<std::size_t>(k - 1)] + (c - prev).norm();
      prev = c;
    }
    const double len = cum.back();
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
    for (int j = 0; j < pieces; ++j) {
      const double target = len * j / pieces;
      const auto it = std::upper_bound(cum.begin(), cum.end(), target);
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), samples);
      const double c0 = cum[k - 1], c1 = cum[k];
      const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
      const double s = (static_cast<double>(k - 1) + frac) / samples;
      const Vec2 xs = j == 0 ? p : Vec2(p + s * (q - p));
      nodes.push_back(BoundaryNode{to_chart(straight, conf, xs), xs, static_cast<int>(i)});
    }
  }
  return nodes;
}

std::vector<Vec2> interior_lattice(const ConvexBody& body, ChartKind conf, double a,
                                   const std::vector<BoundaryNode>& bnd) {
  Vec2 lo = bnd[0].c, hi = bnd[0].c;
  for (const auto& n : bnd) {
    lo = lo.cwiseMin(n.c);
    hi = hi.cwiseMax(n.c);
  }
  const Vec2 origin = to_chart(body.chart(), conf, body.base().coords);
  const double dy = a * std::sqrt(3.0) / 2.0;
  const int j0 = static_cast<int>(std::floor((lo.y() - origin.y()) / dy)) - 1;
  const int j1 = static_cast<int>(std::ceil((hi.y() - origin.y()) / dy)) + 1;
  std::vector<Vec2> pts;
  for (int j = j0; j <= j1; ++j) {
    const double y = origin.y() + j * dy;
    const double shift = 0.5 * a * j;
    const int i0 = static_cast<int>(std::floor((lo.x() - origin.x() - shift) / a)) - 1;
    const int i1 = static_cast<int>(std::ceil((hi.x() - origin.x() - shift) / a)) + 1;
    for (int i = i0; i <= i1; ++i) {
      const Vec2 c(origin.x() + shift + i * a, y);
      if (!convertible(conf, c)) continue;
      const ModelPoint mp{conf, c};
      const double d = body.boundary_distance(mp);
      if (d <= 0.0) continue;
      // Geodesic clearance converted to chart length.
      if (d / std::sqrt(conformal_factor(mp)) < 0.45 * a) continue;
      pts.push_back(c);
    }
  }
  return pts;
}

double polyline_area(const std::vector<BoundaryNode>& bnd) {
  double area = 0.0;
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    const Vec2& p = bnd[i].c;
    const Vec2& q = bnd[(i + 1) % bnd.size()].c;
    area += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * area;
}

}  // namespace

std::size_t TriMesh::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), 0));
}

double TriMesh::max_edge() const {
  double m = 0.0;
  for (const auto& t : triangles)
    for (int i = 0; i < 3; ++i)
      m = std::max(m, (vertices[static_cast<std::size_t>(t[i])] - vertices[static_cast<std::size_t>(t[(i + 1) % 3])]).norm());
  return m;
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * detail::orient2d(vertices[static_cast<std::size_t>(tri[0])], vertices[static_cast<std::size_t>(tri[1])],
                                vertices[static_cast<std::size_t>(tri[2])]);
}

Vec2 TriMesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (vertices[static_cast<std::size_t>(tri[0])] + vertices[static_cast<std::size_t>(tri[1])] +
          vertices[static_cast<std::size_t>(tri[2])]) /
         3.0;
}

TriMesh triangulate(const ConvexBody& body, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("mesh size must be positive");
  const ChartKind conf = conformal_chart(body.delta());
  const double a = lattice_fraction * h;
  std::vector<BoundaryNode> bnd = boundary_nodes(body, conf, a);
  const std::vector<Vec2> inner = interior_lattice(body, conf, a, bnd);
  if (inner.size() < 3) throw MeshError("mesh size too large: fewer than 3 interior vertices");

  for (int round = 0; round < 30; ++round) {
    const int nb = static_cast<int>(bnd.size());
    std::vector<Vec2> pts;
    pts.reserve(bnd.size() + inner.size());
    for (const auto& n : bnd) pts.push_back(n.c);
    pts.insert(pts.end(), inner.begin(), inner.end());
    const auto all = detail::delaunay(pts);

    std::vector<std::array<int, 3>> kept;
    for (const auto& t : all) {
      // Pockets between a concave boundary chain and its hull fall outside.
      const Vec2 c = (pts[static_cast<std::size_t>(t[0])] + pts[static_cast<std::size_t>(t[1])] +
                      pts[static_cast<std::size_t>(t[2])]) /
                     3.0;
      if (!convertible(conf, c) || !body.contains(ModelPoint{conf, c})) continue;
      kept.push_back(t);
    }

    const auto counts = edge_counts(kept);
    std::vector<BoundaryNode> next;
    bool missing = false;
    for (int i = 0; i < nb; ++i) {
      const int j = (i + 1) % nb;
      next.push_back(bnd[static_cast<std::size_t>(i)]);
      if (!counts.count(edge_key(i, j))) {
        missing = true;
        const auto& p = bnd[static_cast<std::size_t>(i)];
        const auto& q = bnd[static_cast<std::size_t>(j)];
        // The segment belongs to side p.side; split it on the true geodesic.
        const Vec2 qs = q.side == p.side ? q.s : body.vertices()[(static_cast<std::size_t>(p.side) + 1) % body.size()];
        const Vec2 ms = 0.5 * (p.s + qs);
        next.push_back(BoundaryNode{to_chart(body.chart(), conf, ms), ms, p.side});
      }
    }
    if (missing) {
      bnd = std::move(next);
      continue;
    }

    TriMesh mesh;
    mesh.delta = body.delta();
    mesh.chart = conf;
    mesh.vertices = std::move(pts);
    mesh.triangles = std::move(kept);
    mesh.boundary.assign(mesh.vertices.size(), 0);
    std::fill(mesh.boundary.begin(), mesh.boundary.begin() + nb, 1);
    mesh.h = h;

    std::vector<char> used(mesh.vertices.size(), 0);
    for (const auto& t : mesh.triangles)
      for (int v : t) used[static_cast<std::size_t>(v)] = 1;
    if (std::find(used.begin(), used.end(), 0) != used.end()) throw MeshError("triangulation left orphan vertices");
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) area += mesh.triangle_area(t);
    const double expected = polyline_area(bnd);
    if (std::abs(area - expected) > 1e-9 * expected) throw MeshError("triangulation does not tile the domain");
    return mesh;
  }
  throw MeshError("boundary recovery did not converge");
}

TriMesh refine_uniform(const TriMesh& mesh, const ConvexBody& body) {
  if (conformal_chart(body.delta()) != mesh.chart) throw ChartError("mesh and body belong to different geometries");
  const auto counts = edge_counts(mesh.triangles);
  TriMesh out;
  out.delta = mesh.delta;
  out.chart = mesh.chart;
  out.vertices = mesh.vertices;
  out.boundary = mesh.boundary;
  out.h = 0.5 * mesh.h;
  std::map<Edge, int> mid;
  auto midpoint = [&](int a, int b) {
    const Edge key = edge_key(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const Vec2& pa = mesh.vertices[static_cast<std::size_t>(a)];
    const Vec2& pb = mesh.vertices[static_cast<std::size_t>(b)];
    const bool on_boundary = counts.at(key) == 1;
    Vec2 m = 0.5 * (pa + pb);
    if (on_boundary) {
      // Midpoint in the straight chart stays on the geodesic side.
      const Vec2 sa = to_chart(mesh.chart, body.chart(), pa);
      const Vec2 sb = to_chart(mesh.chart, body.chart(), pb);
      m = to_chart(body.chart(), mesh.chart, 0.5 * (sa + sb));
    }
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(m);
    out.boundary.push_back(on_boundary ? 1 : 0);
    mid.emplace(key, idx);
    return idx;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]);
    const int bc = midpoint(t[1], t[2]);
    const int ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

TriMesh restrict_mesh(const TriMesh& mesh, const std::function<bool(std::size_t)>& keep) {
  std::vector<std::array<int, 3>> tris;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (keep(t)) tris.push_back(mesh.triangles[t]);
  const auto counts = edge_counts(tris);
  std::vector<int> index(mesh.vertices.size(), -1);
  TriMesh out;
  out.delta = mesh.delta;
  out.chart = mesh.chart;
  out.h = mesh.h;
  for (auto& t : tris)
    for (int& v : t) {
      if (index[static_cast<std::size_t>(v)] < 0) {
        index[static_cast<std::size_t>(v)] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
        out.boundary.push_back(mesh.boundary[static_cast<std::size_t>(v)]);
      }
      v = index[static_cast<std::size_t>(v)];
    }
  for (const auto& [e, c] : counts)
    if (c == 1) {
      const int a = index[static_cast<std::size_t>(e.first)];
      const int b = index[static_cast<std::size_t>(e.second)];
      out.boundary[static_cast<std::size_t>(a)] = 1;
      out.boundary[static_cast<std::size_t>(b)] = 1;
    }
  out.triangles = std::move(tris);
  return out;
}

void validate_mesh(const TriMesh& mesh, const ConvexBody& body) {
  if (mesh.interior_count() < 1) throw MeshError("mesh has no interior vertices");
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (!(mesh.triangle_area(t) > 1e-14)) throw MeshError("degenerate or inverted triangle");
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.boundary[v]) continue;
    const ModelPoint p = mesh.point(v);
    const double off = std::abs(body.boundary_distance(p)) / std::sqrt(conformal_factor(p));
    if (off > mesh.h * mesh.h) throw MeshError("boundary vertex off the polygon boundary");
  }
}

std::string mesh_to_json(const TriMesh& mesh) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const Vec2& v : mesh.vertices) j["vertices"].push_back({v.x(), v.y()});
  j["triangles"] = mesh.triangles;
  j["boundary"] = nlohmann::ordered_json::array();
  for (char b : mesh.boundary) j["boundary"].push_back(b != 0);
  return j.dump() + "\n";
}

}  // namespace spacespec
