#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spacespec/convexbody.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/laplace2d.hpp"
#include "spacespec/rearrange.hpp"

using namespace spacespec;

namespace {

ConvexBody unit_square() {
  return ConvexBody(Curvature::flat, ChartKind::plane, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
}

AssembledSystem system_of(const ConvexBody& b, double h) { return assemble(triangulate(b, h)); }

// Values of a function of the distance to the chart origin at the mesh vertices.
template <class F>
Eigen::VectorXd radial_values(const TriMesh& m, F f) {
  const ModelPoint o{m.chart, Vec2::Zero()};
  Eigen::VectorXd u(m.vertex_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v)
    u(static_cast<Eigen::Index>(v)) = f(geodesic_distance(o, m.point(v)));
  return u;
}

double interpolate(const RadialProfile& p, double t) {
  for (std::size_t i = 1; i < p.radii.size(); ++i)
    if (t <= p.radii[i]) {
      const double w = (t - p.radii[i - 1]) / (p.radii[i] - p.radii[i - 1]);
      return (1 - w) * p.values[i - 1] + w * p.values[i];
    }
  return p.values.back();
}

}  // namespace

TEST_CASE("level measure of a constant function") {
  const AssembledSystem sys = system_of(unit_square(), 0.2);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(sys.mesh->vertex_count());
  const DistributionFn d = distribution_function(one, sys);
  CHECK(d.total_volume == doctest::Approx(1.0));
  CHECK(d.measure(0.5) == doctest::Approx(1.0));
  CHECK(d.measure(1.0) == 0.0);
  const RadialProfile p = decreasing_rearrangement(d, Curvature::flat);
  // The profile is 1 on the open ball and drops to 0 at its edge.
  for (std::size_t i = 0; i + 1 < p.values.size(); ++i) CHECK(p.values[i] == doctest::Approx(1.0));
  CHECK(p.values.back() == 0.0);
  CHECK(p.radii.back() == doctest::Approx(std::sqrt(1.0 / oracle::pi)));
}

TEST_CASE("distribution function is nonincreasing and exact for linear functions") {
  const ConvexBody sq = unit_square();
  const TriMesh m = triangulate(sq, 0.1);
  const AssembledSystem sys = assemble(m);
  Eigen::VectorXd x(m.vertex_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) x(static_cast<Eigen::Index>(v)) = m.vertices[v].x();
  const DistributionFn d = distribution_function(x, sys);
  // mu(s) = |{x > s}| = 1 - s on the unit square.
  for (double s : {0.0, 0.13, 0.5, 0.77}) CHECK(d.measure(s) == doctest::Approx(1.0 - s).epsilon(1e-12));
  for (std::size_t i = 1; i < d.measures.size(); ++i) CHECK(d.measures[i] >= d.measures[i - 1] - 1e-15);
  CHECK(d.measure.inverse(0.25) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK_THROWS_AS(distribution_function(x, sys, 8), DomainError);
}

TEST_CASE("radial decreasing functions are their own rearrangement") {
  for (Curvature delta : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    const ConvexBody disk = geodesic_ball(delta, 1.0, 128);
    const TriMesh m = triangulate(disk, default_h_list(disk)[2]);
    const AssembledSystem sys = assemble(m);
    const Eigen::VectorXd u = radial_values(m, [](double r) { return 1.0 - r * r; });
    const RadialProfile p = decreasing_rearrangement(distribution_function(u, sys, 128), delta);
    // The 128-gon is a little smaller than the disk; its profile is the
    // original one up to that radial shift.
    for (std::size_t i = 0; i < p.radii.size(); ++i)
      CHECK(std::abs(p.values[i] - (1.0 - p.radii[i] * p.radii[i])) < 5e-3);
    CHECK(p.radii.back() == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("rearrangement of a rearrangement is itself") {
  const ConvexBody sq = unit_square();
  const TriMesh m = triangulate(sq, 0.05);
  const AssembledSystem sys = assemble(m);
  Eigen::VectorXd u(m.vertex_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    const Vec2 p = m.vertices[v];
    u(static_cast<Eigen::Index>(v)) = std::sin(oracle::pi * p.x()) * std::sin(oracle::pi * p.y());
  }
  const RadialProfile once = decreasing_rearrangement(distribution_function(u, sys), Curvature::flat);
  const ConvexBody disk = geodesic_ball(Curvature::flat, once.radii.back(), 128);
  const TriMesh dm = triangulate(disk, 0.03);
  const Eigen::VectorXd w = radial_values(dm, [&](double r) { return interpolate(once, r); });
  const RadialProfile twice = decreasing_rearrangement(distribution_function(w, assemble(dm)), Curvature::flat);
  for (double t : {0.0, 0.1, 0.2, 0.4, 0.5}) CHECK(std::abs(interpolate(once, t) - interpolate(twice, t)) < 0.02);
}

TEST_CASE("equimeasurability and L2 isometry on a square eigenfunction") {
  const StudyResult s = convergence_study(unit_square(), {0.2, 0.1, 0.05});
  const Eigen::VectorXd u = s.finest.vectors[0].cwiseAbs();
  const VerificationReport e = check_equimeasurability(u, s.system);
  CHECK(e.pass);
  CHECK(e.lhs <= e.rhs);
  const VerificationReport l = check_l2_isometry(u, s.system);
  CHECK(l.pass);
  CHECK(l.lhs < 0.01);
  CHECK_THROWS_AS(check_l2_isometry(u, s.system, 0.0), DomainError);
}

TEST_CASE("Hardy-Littlewood") {
  const ConvexBody b = random_body(Curvature::hyperbolic, 4, RandomBodyParams{8, 0.5, 1.2});
  const StudyResult s = convergence_study(b);
  const Eigen::VectorXd u = s.finest.vectors[0].cwiseAbs();
  const TriMesh& m = *s.system.mesh;

  SUBCASE("f = g makes the upper bound an equality") {
    const VerificationReport r = check_hardy_littlewood(u, u, s.system);
    CHECK(r.pass);
    const double middle = r.context["middle"];
    CHECK(std::abs(r.rhs - middle) <= r.tolerance + 1e-3 * middle);
  }
  SUBCASE("constant f gives equality on both sides") {
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.vertex_count());
    const VerificationReport r = check_hardy_littlewood(one, u, s.system);
    CHECK(r.pass);
    CHECK(r.rhs - r.lhs < 1e-2 * r.rhs);
  }
  SUBCASE("unrelated pair") {
    Eigen::VectorXd g(m.vertex_count());
    for (std::size_t v = 0; v < m.vertex_count(); ++v)
      g(static_cast<Eigen::Index>(v)) = 1.0 + m.vertices[v].x() - 0.5 * m.vertices[v].y();
    g = g.cwiseMax(0.0);
    const VerificationReport r = check_hardy_littlewood(u, g, s.system);
    CHECK(r.pass);
    CHECK(r.lhs < r.rhs);
  }
  SUBCASE("negative input is rejected") {
    CHECK_THROWS_AS(check_hardy_littlewood(-u - Eigen::VectorXd::Ones(u.size()), u, s.system), DomainError);
  }
}

TEST_CASE("Polya-Szego") {
  SUBCASE("ball eigenfunctions are already symmetric") {
    const ConvexBody disk = geodesic_ball(Curvature::flat, 1.0, 128);
    const StudyResult s = convergence_study(disk);
    const VerificationReport r = check_polya_szego(s.finest.vectors[0], s.system, disk, 0.02);
    CHECK(r.pass);
    CHECK(std::abs(r.rhs - r.lhs) < 0.02 * r.rhs);
  }
  SUBCASE("the square loses energy strictly") {
    const ConvexBody sq = unit_square();
    const StudyResult s = convergence_study(sq, {0.2, 0.1, 0.05});
    const VerificationReport r = check_polya_szego(s.finest.vectors[0], s.system, sq, 0.02);
    CHECK(r.pass);
    CHECK(r.slack > 0.05 * r.rhs);
    // The radial Rayleigh quotient is at least the disk eigenvalue.
    CHECK(double(r.context["rayleigh_radial"]) >= double(r.context["lambda1_star"]) * (1 - 1e-2));
  }
  SUBCASE("functions not vanishing on the boundary are rejected") {
    const ConvexBody sq = unit_square();
    const AssembledSystem sys = system_of(sq, 0.2);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(sys.mesh->vertex_count());
    CHECK_THROWS_AS(check_polya_szego(one, sys, sq), DomainError);
  }
}

TEST_CASE("increasing rearrangement mirrors the decreasing one") {
  const AssembledSystem sys = system_of(unit_square(), 0.1);
  const TriMesh& m = *sys.mesh;
  Eigen::VectorXd x(m.vertex_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) x(static_cast<Eigen::Index>(v)) = m.vertices[v].x();
  const DistributionFn d = distribution_function(x, sys);
  const RadialProfile dec = decreasing_rearrangement(d, Curvature::flat);
  const RadialProfile inc = increasing_rearrangement(d, Curvature::flat, d.total_volume);
  CHECK(inc.increasing);
  CHECK(inc.values.front() == doctest::Approx(dec.values.back()).epsilon(1e-9));
  CHECK(inc.values.back() == doctest::Approx(dec.values.front()).epsilon(1e-9));
  CHECK_THROWS_AS(increasing_rearrangement(d, Curvature::flat, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("profile csv") {
  const AssembledSystem sys = system_of(unit_square(), 0.25);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(sys.mesh->vertex_count());
  const std::string csv = profile_csv(decreasing_rearrangement(distribution_function(one, sys), Curvature::flat, 17));
  CHECK(csv.rfind("t,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);
}
