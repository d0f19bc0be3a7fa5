#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/rng.hpp"
#include "spacespec/spaceform.hpp"

using namespace spacespec;

namespace {

const Curvature all_deltas[] = {Curvature::hyperbolic, Curvature::flat, Curvature::spherical};

std::vector<ChartKind> charts_of(Curvature d) {
  switch (d) {
    case Curvature::hyperbolic: return {ChartKind::poincare_disk, ChartKind::klein_disk};
    case Curvature::flat: return {ChartKind::plane};
    case Curvature::spherical: return {ChartKind::stereographic, ChartKind::gnomonic};
  }
  return {};
}

// Random point within distance rmax of the straight-chart origin.
ModelPoint random_point(Curvature d, Rng& rng, double rmax = 1.2) {
  const ModelPoint o{straight_chart(d), Vec2::Zero()};
  TangentVec t = unit_direction(o, rng.uniform(0.0, 2.0 * oracle::pi));
  t.components *= rng.uniform(0.0, rmax);
  return exp_map(t);
}

}  // namespace

TEST_CASE("curvature parsing accepts only -1, 0, 1") {
  CHECK(curvature_from_int(-1) == Curvature::hyperbolic);
  CHECK(curvature_from_int(0) == Curvature::flat);
  CHECK(curvature_from_int(1) == Curvature::spherical);
  CHECK_THROWS_AS(curvature_from_int(2), DomainError);
}

TEST_CASE("chart names round trip") {
  for (ChartKind c : {ChartKind::plane, ChartKind::poincare_disk, ChartKind::klein_disk, ChartKind::stereographic,
                      ChartKind::gnomonic})
    CHECK(chart_from_name(chart_name(c)) == c);
  CHECK_FALSE(chart_from_name("mercator").has_value());
}

TEST_CASE("ModelPoint::make rejects points outside the chart") {
  CHECK_THROWS_AS(ModelPoint::make(ChartKind::poincare_disk, Vec2(1.0, 0.1)), ChartError);
  CHECK_NOTHROW(ModelPoint::make(ChartKind::klein_disk, Vec2(0.5, 0.5)));
}

TEST_CASE("chart conversions are inverse to each other") {
  Rng rng(11);
  for (Curvature d : all_deltas)
    for (int i = 0; i < 50; ++i) {
      const ModelPoint p = random_point(d, rng);
      for (ChartKind c : charts_of(d)) {
        const ModelPoint q = chart_convert(chart_convert(p, c), p.chart);
        CHECK((q.coords - p.coords).norm() < 1e-12);
        // The embedding does not depend on the chart.
        CHECK((embed(chart_convert(p, c)) - embed(p)).norm() < 1e-11);
      }
    }
}

TEST_CASE("embedded points lie on the model surface") {
  Rng rng(12);
  for (Curvature d : all_deltas)
    for (int i = 0; i < 20; ++i) {
      const Vec3 x = embed(random_point(d, rng));
      if (d == Curvature::flat)
        CHECK(x.z() == doctest::Approx(1.0));
      else
        CHECK(ambient_inner(d, x, x) == doctest::Approx(to_int(d)).epsilon(1e-12));
    }
}

TEST_CASE("distance is a metric") {
  Rng rng(13);
  for (Curvature d : all_deltas)
    for (int i = 0; i < 40; ++i) {
      const ModelPoint a = random_point(d, rng), b = random_point(d, rng), c = random_point(d, rng);
      CHECK(geodesic_distance(a, a) < 1e-7);
      CHECK(geodesic_distance(a, b) == doctest::Approx(geodesic_distance(b, a)).epsilon(1e-12));
      CHECK(geodesic_distance(a, c) <= geodesic_distance(a, b) + geodesic_distance(b, c) + 1e-12);
    }
}

TEST_CASE("distance from the origin matches closed forms") {
  // Klein: tanh d = |x|; gnomonic: tan d = |x|; Poincare: tanh(d/2) = |x|.
  CHECK(geodesic_distance(ModelPoint{ChartKind::klein_disk, Vec2::Zero()},
                          ModelPoint{ChartKind::klein_disk, Vec2(0.6, 0.0)}) ==
        doctest::Approx(std::atanh(0.6)).epsilon(1e-13));
  CHECK(geodesic_distance(ModelPoint{ChartKind::gnomonic, Vec2::Zero()},
                          ModelPoint{ChartKind::gnomonic, Vec2(0.0, 2.0)}) ==
        doctest::Approx(std::atan(2.0)).epsilon(1e-13));
  CHECK(geodesic_distance(ModelPoint{ChartKind::poincare_disk, Vec2::Zero()},
                          ModelPoint{ChartKind::poincare_disk, Vec2(0.3, 0.4)}) ==
        doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-13));
}

TEST_CASE("exp and log are inverse") {
  Rng rng(14);
  for (Curvature d : all_deltas)
    for (ChartKind c : charts_of(d))
      for (int i = 0; i < 30; ++i) {
        const ModelPoint x = chart_convert(random_point(d, rng, 0.7), c);
        const ModelPoint y = chart_convert(random_point(d, rng, 0.7), c);
        const TangentVec v = log_map(x, y);
        CHECK(tangent_norm(v) == doctest::Approx(geodesic_distance(x, y)).epsilon(1e-10));
        CHECK(geodesic_distance(exp_map(v), y) < 1e-9);
      }
}

TEST_CASE("conformal charts carry a scalar metric") {
  Rng rng(15);
  for (ChartKind c : {ChartKind::plane, ChartKind::poincare_disk, ChartKind::stereographic}) {
    const Curvature d = curvature_of(c);
    for (int i = 0; i < 10; ++i) {
      const ModelPoint p = chart_convert(random_point(d, rng), c);
      const Eigen::Matrix2d g = metric_tensor(p);
      const double phi = conformal_factor(p);
      CHECK(g(0, 0) == doctest::Approx(phi).epsilon(1e-12));
      CHECK(g(1, 1) == doctest::Approx(phi).epsilon(1e-12));
      CHECK(std::abs(g(0, 1)) < 1e-12 * phi);
    }
  }
  CHECK(conformal_factor(ModelPoint{ChartKind::poincare_disk, Vec2(0.5, 0.0)}) ==
        doctest::Approx(4.0 / std::pow(1.0 - 0.25, 2)));
}

TEST_CASE("ball volume against closed forms and its inverse") {
  for (Curvature d : all_deltas)
    for (double r : {0.1, 0.7, 1.3}) {
      const double v = ball_volume(d, 2, r);
      CHECK(v == doctest::Approx(oracle::disk_area(to_int(d), r)).epsilon(1e-13));
      CHECK(ball_radius_for_volume(d, 2, v) == doctest::Approx(r).epsilon(1e-11));
    }
  CHECK(ball_volume(Curvature::flat, 3, 1.0) == doctest::Approx(4.0 * oracle::pi / 3.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * oracle::pi));
}

TEST_CASE("isometries preserve distance and compose") {
  Rng rng(16);
  for (Curvature d : all_deltas) {
    const ModelPoint target = random_point(d, rng, 0.8);
    const Isometry T = Isometry::translation(target).then(Isometry::rotation(d, 0.7));
    CHECK(geodesic_distance(Isometry::translation(target).apply(ModelPoint{straight_chart(d), Vec2::Zero()}),
                            target) < 1e-12);
    for (int i = 0; i < 20; ++i) {
      const ModelPoint a = random_point(d, rng, 0.6), b = random_point(d, rng, 0.6);
      CHECK(geodesic_distance(T.apply(a), T.apply(b)) ==
            doctest::Approx(geodesic_distance(a, b)).epsilon(1e-10));
      CHECK(geodesic_distance(T.inverse().apply(T.apply(a)), a) < 1e-7);
    }
  }
}

TEST_CASE("dilation scales distances from the center") {
  Rng rng(17);
  for (Curvature d : all_deltas)
    for (int i = 0; i < 20; ++i) {
      const ModelPoint x0 = random_point(d, rng, 0.5), p = random_point(d, rng, 0.5);
      const double lam = rng.uniform(0.2, 1.0);
      CHECK(geodesic_distance(x0, dilation(x0, lam, p)) ==
            doctest::Approx(lam * geodesic_distance(x0, p)).epsilon(1e-9));
    }
}

TEST_CASE("signed distance to a geodesic line") {
  const ModelPoint a{ChartKind::plane, Vec2(0, 0)}, b{ChartKind::plane, Vec2(1, 0)};
  CHECK(signed_distance_to_line(ModelPoint{ChartKind::plane, Vec2(0.3, 0.5)}, a, b) == doctest::Approx(0.5));
  CHECK(signed_distance_to_line(ModelPoint{ChartKind::plane, Vec2(0.3, -0.5)}, a, b) == doctest::Approx(-0.5));
  CHECK(distance_to_segment(ModelPoint{ChartKind::plane, Vec2(2, 0)}, a, b) == doctest::Approx(1.0));
  // In the Klein chart the horizontal diameter is a geodesic; the distance of
  // (0, y) to it is atanh(y).
  const ModelPoint ka{ChartKind::klein_disk, Vec2(-0.5, 0)}, kb{ChartKind::klein_disk, Vec2(0.5, 0)};
  CHECK(signed_distance_to_line(ModelPoint{ChartKind::klein_disk, Vec2(0, 0.4)}, ka, kb) ==
        doctest::Approx(std::atanh(0.4)).epsilon(1e-12));
}

TEST_CASE("s_delta and c_delta") {
  CHECK(s_delta(Curvature::spherical, 0.3) == doctest::Approx(std::sin(0.3)));
  CHECK(s_delta(Curvature::hyperbolic, 0.3) == doctest::Approx(std::sinh(0.3)));
  CHECK(c_delta(Curvature::hyperbolic, 0.3) == doctest::Approx(std::cosh(0.3)));
  CHECK(s_delta(Curvature::flat, 0.3) == doctest::Approx(0.3));
}

TEST_CASE("seeded streams are reproducible and distinct") {
  Rng a(derive_seed(5, "bodies", 1)), b(derive_seed(5, "bodies", 1)), c(derive_seed(5, "bodies", 2));
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK((v >= 0.0 && v < 1.0));
  }
}
