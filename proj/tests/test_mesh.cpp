#include <doctest.h>

#include <cmath>
#include <set>

#include <json.hpp>

#include "spacespec/convexbody.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/laplace2d.hpp"
#include "spacespec/mesh.hpp"

using namespace spacespec;

namespace {

double chart_area(const TriMesh& m) {
  double a = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) a += m.triangle_area(t);
  return a;
}

// Shoelace area of the body in conformal-chart coordinates, valid for the
// flat plane where the two charts coincide.
double flat_area(const ConvexBody& b) { return polygon_area(b); }

void check_well_formed(const TriMesh& m) {
  std::vector<int> used(m.vertex_count(), 0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    CHECK(m.triangle_area(t) > 0.0);
    for (int v : m.triangles[t]) ++used[static_cast<std::size_t>(v)];
  }
  for (int u : used) CHECK(u > 0);
  CHECK(m.max_edge() < m.h);
}

}  // namespace

TEST_CASE("square mesh tiles the square") {
  const ConvexBody sq(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
  for (double h : {0.2, 0.1, 0.05}) {
    const TriMesh m = triangulate(sq, h);
    check_well_formed(m);
    CHECK(chart_area(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW(validate_mesh(m, sq));
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
      const Vec2 p = m.vertices[v];
      const bool on_edge = std::min({p.x(), p.y(), 1.0 - p.x(), 1.0 - p.y()}) < 1e-12;
      CHECK(static_cast<bool>(m.boundary[v]) == on_edge);
    }
  }
}

TEST_CASE("meshes of curved bodies live in the conformal chart") {
  for (Curvature d : {Curvature::hyperbolic, Curvature::spherical}) {
    const ConvexBody b = random_body(d, 21, RandomBodyParams{8, 0.5, 1.1});
    const TriMesh m = triangulate(b, default_h_list(b).front());
    CHECK(m.chart == conformal_chart(d));
    check_well_formed(m);
    CHECK_NOTHROW(validate_mesh(m, b));
    // Boundary vertices sit on the geodesic boundary.
    for (std::size_t v = 0; v < m.vertex_count(); ++v)
      if (m.boundary[v]) CHECK(std::abs(b.boundary_distance(m.point(v))) < 1e-9);
  }
}

TEST_CASE("weighted mesh area converges to the body area") {
  for (Curvature d : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    const ConvexBody b = random_body(d, 5, RandomBodyParams{7, 0.5, 1.0});
    const TriMesh m0 = triangulate(b, default_h_list(b).front());
    const TriMesh m1 = refine_uniform(m0, b);
    const double e0 = std::abs(assemble(m0).total_mass() - polygon_area(b));
    const double e1 = std::abs(assemble(m1).total_mass() - polygon_area(b));
    CHECK(e1 < 1e-2 * polygon_area(b));
    if (d != Curvature::flat) CHECK(e1 < e0);
    else CHECK(e1 < 1e-12);
  }
}

TEST_CASE("uniform refinement splits every triangle into four") {
  const ConvexBody b = random_body(Curvature::flat, 2, RandomBodyParams{6, 0.5, 1.0});
  const TriMesh m0 = triangulate(b, 0.3);
  const TriMesh m1 = refine_uniform(m0, b);
  CHECK(m1.triangles.size() == 4 * m0.triangles.size());
  CHECK(m1.h == doctest::Approx(m0.h / 2));
  CHECK(chart_area(m1) == doctest::Approx(flat_area(b)).epsilon(1e-12));
  // Every coarse vertex survives with its boundary flag.
  for (std::size_t v = 0; v < m0.vertex_count(); ++v) {
    CHECK((m1.vertices[v] - m0.vertices[v]).norm() == 0.0);
    CHECK(m1.boundary[v] == m0.boundary[v]);
  }
  check_well_formed(m1);
}

TEST_CASE("restriction keeps selected triangles and marks the cut") {
  const ConvexBody sq(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
  const TriMesh m = triangulate(sq, 0.1);
  const TriMesh left = restrict_mesh(m, [&](std::size_t t) { return m.centroid(t).x() < 0.5; });
  CHECK(left.triangles.size() < m.triangles.size());
  CHECK(left.vertex_count() < m.vertex_count());
  for (std::size_t v = 0; v < left.vertex_count(); ++v) {
    // Interior vertices of the piece have all their neighbours kept, so they
    // are strictly inside the square.
    if (!left.boundary[v]) {
      CHECK(left.vertices[v].x() > 0.0);
      CHECK(left.vertices[v].y() > 0.0);
    }
  }
  const TriMesh none = restrict_mesh(m, [](std::size_t) { return false; });
  CHECK(none.triangles.empty());
  CHECK(none.vertex_count() == 0);
}

TEST_CASE("too coarse a mesh size is rejected") {
  const ConvexBody sq(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
  CHECK_THROWS_AS(triangulate(sq, 5.0), MeshError);
  CHECK_THROWS_AS(triangulate(sq, -1.0), DomainError);
}

TEST_CASE("meshes are deterministic") {
  const ConvexBody b = random_body(Curvature::hyperbolic, 8, RandomBodyParams{9, 0.6, 1.4});
  const TriMesh a = triangulate(b, 0.1), c = triangulate(b, 0.1);
  CHECK(a.vertices == c.vertices);
  CHECK(a.triangles == c.triangles);
}

TEST_CASE("mesh json") {
  const ConvexBody sq(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
  const TriMesh m = triangulate(sq, 0.25);
  const auto j = nlohmann::json::parse(mesh_to_json(m));
  CHECK(j["vertices"].size() == m.vertex_count());
  CHECK(j["triangles"].size() == m.triangles.size());
  CHECK(j["boundary"].size() == m.vertex_count());
}

TEST_CASE("triangle count grows like h^-2") {
  const ConvexBody sq(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
  for (double h : {0.2, 0.1, 0.05}) {
    const double ratio = static_cast<double>(triangulate(sq, h / 2).triangles.size()) /
                         static_cast<double>(triangulate(sq, h).triangles.size());
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 6.0);
  }
}
