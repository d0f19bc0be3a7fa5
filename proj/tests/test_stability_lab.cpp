#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "spacespec/ballspec.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/rng.hpp"
#include "spacespec/stability_lab.hpp"

using namespace spacespec;

namespace {

ConvexBody rectangle(double a, double b) {
  return ConvexBody(Curvature::flat, ChartKind::plane, {{0, 0}, {a, 0}, {a, b}, {0, b}}, {a / 2, b / 2});
}

RadialWeight constant_weight() {
  return [](double) { return 1.0; };
}

}  // namespace

TEST_CASE("report make and settle") {
  VerificationReport r = VerificationReport::make("x", 1.0, 2.0, 0.1);
  CHECK(r.slack == 1.0);
  CHECK(r.pass);
  r.lhs = 2.2;
  r.slack = r.rhs - r.lhs;
  r.settle();
  CHECK_FALSE(r.pass);
  CHECK_THROWS_AS(VerificationReport::make("x", 1.0, 2.0, 0.0), DomainError);
  const auto j = r.to_json();
  for (const char* key : {"name", "lhs", "rhs", "slack", "tolerance", "pass", "context"}) CHECK(j.contains(key));
  CHECK(reports_to_csv({r}).rfind("name,lhs,rhs,slack,tolerance,pass\n", 0) == 0);
}

TEST_CASE("center of mass") {
  SUBCASE("Euclidean barycenter for g = 1 is the zero of the unit-vector sum") {
    // With g = 1 the field is the sum of unit vectors, so the center of a
    // symmetric configuration is its center of symmetry.
    std::vector<ModelPoint> pts;
    for (int i = 0; i < 6; ++i)
      pts.push_back({ChartKind::plane, Vec2(1 + std::cos(i * oracle::pi / 3), 2 + std::sin(i * oracle::pi / 3))});
    const CenterResult c = center_of_mass(pts, std::vector<double>(6, 1.0), constant_weight());
    CHECK((c.point.coords - Vec2(1, 2)).norm() < 1e-6);
    CHECK(c.residual <= c.threshold);
  }
  SUBCASE("linear weight gives the ordinary barycenter") {
    const std::vector<ModelPoint> pts{{ChartKind::plane, Vec2(0, 0)}, {ChartKind::plane, Vec2(3, 0)},
                                      {ChartKind::plane, Vec2(0, 3)}};
    const CenterResult c = center_of_mass(pts, {1, 1, 1}, [](double s) { return s; });
    CHECK((c.point.coords - Vec2(1, 1)).norm() < 1e-6);
  }
  SUBCASE("symmetric mesh weights center the square") {
    const SolvedBody sb = SolvedBody::solve(rectangle(1, 1), {0.2, 0.1, 0.05});
    const CenterResult c = center_of_mass(sb.system(), sb.eigen().vectors[0], ramp_weight(0.3));
    CHECK((c.point.coords - Vec2(0.5, 0.5)).norm() < 1e-6);
  }
  SUBCASE("equivariance under isometries") {
    Rng rng(3);
    for (Curvature d : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
      const ChartKind ch = conformal_chart(d);
      std::vector<ModelPoint> pts;
      std::vector<double> w;
      for (int i = 0; i < 12; ++i) {
        const Vec2 x(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        pts.push_back({ch, x});
        w.push_back(rng.uniform(0.5, 2.0));
      }
      const Isometry T = Isometry::translation(ModelPoint{straight_chart(d), Vec2(0.3, -0.2)})
                             .then(Isometry::rotation(d, 0.4));
      std::vector<ModelPoint> moved;
      for (const ModelPoint& p : pts) moved.push_back(chart_convert(T.apply(p), ch));
      const RadialWeight g = ramp_weight(0.4);
      const CenterResult a = center_of_mass(pts, w, g), b = center_of_mass(moved, w, g);
      CHECK(geodesic_distance(T.apply(a.point), b.point) < 1e-6);
    }
  }
  SUBCASE("ramp weight") {
    const RadialWeight g = ramp_weight(2.0);
    CHECK(g(1.0) == 0.5);
    CHECK(g(3.0) == 1.0);
  }
}

TEST_CASE("Faber-Krahn") {
  const SolvedBody sq = SolvedBody::solve(rectangle(1, 1));
  const VerificationReport r = verify_faber_krahn(sq);
  CHECK(r.pass);
  const double expected = 2 * oracle::pi * oracle::pi - oracle::pi * std::pow(oracle::bessel_zero(0, 1), 2);
  CHECK(r.slack == doctest::Approx(expected).epsilon(0.02));
  for (Curvature d : {Curvature::hyperbolic, Curvature::spherical}) {
    const VerificationReport b = verify_faber_krahn(SolvedBody::solve(geodesic_ball(d, 1.0, 128)));
    CHECK(b.pass);
    CHECK(std::abs(b.slack) < 5e-3 * b.rhs);
  }
}

TEST_CASE("PPW") {
  const SolvedBody rect = SolvedBody::solve(rectangle(2, 1));
  const VerificationReport r = verify_ppw(rect);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.6).epsilon(1e-4));
  CHECK(r.rhs == doctest::Approx(2.53873).epsilon(1e-4));
  CHECK_THROWS_AS(verify_ppw(SolvedBody::solve(geodesic_ball(Curvature::hyperbolic, 1.0, 64))), DomainError);
}

TEST_CASE("generalized PPW") {
  const SolvedBody rect = SolvedBody::solve(rectangle(2, 1));
  const VerificationReport r = verify_gen_ppw(rect);
  CHECK(r.pass);
  // lambda2* at lambda1 = 5pi^2/4 is (j11/j01)^2 5pi^2/4.
  const double j = std::pow(oracle::bessel_zero(1, 1) / oracle::bessel_zero(0, 1), 2);
  CHECK(r.rhs == doctest::Approx(j * 5 * oracle::pi * oracle::pi / 4).epsilon(1e-4));
  CHECK(r.lhs == doctest::Approx(2 * oracle::pi * oracle::pi).epsilon(1e-4));
  const VerificationReport h = verify_gen_ppw(SolvedBody::solve(geodesic_ball(Curvature::hyperbolic, 1.0, 128)));
  CHECK(h.pass);
  CHECK(std::abs(h.slack) < 1e-2 * h.rhs);
}

TEST_CASE("inradius and Li-Yau") {
  const SolvedBody rect = SolvedBody::solve(rectangle(2, 1));
  const VerificationReport in = verify_inradius(rect);
  CHECK(in.pass);
  CHECK(in.rhs == doctest::Approx(0.5));
  CHECK(in.lhs == doctest::Approx(oracle::pi / (2 * std::sqrt(5 * oracle::pi * oracle::pi / 4 + 1))).epsilon(1e-5));
  const VerificationReport ly = verify_li_yau(rect);
  CHECK(ly.pass);
  CHECK(ly.lhs <= 1.0 + ly.tolerance);
}

TEST_CASE("gap bound and concentration on a hyperbolic body") {
  const SolvedBody sb = SolvedBody::solve(suite_body(Curvature::hyperbolic, 1));
  const double R = inner_radius(sb.body);
  const VerificationReport g = verify_gap_bound(sb, R);
  CHECK(g.pass);
  CHECK(g.lhs == doctest::Approx(sb.lambda(1) - sb.lambda(0)));
  const double gap = sb.lambda(1) - sb.lambda(0);
  const VerificationReport c = verify_concentration(sb, 2.5 / std::sqrt(gap));
  CHECK(c.pass);
  CHECK(c.context.contains("second_skipped"));
  CHECK_THROWS_AS(verify_concentration(SolvedBody::solve(rectangle(1, 1), {0.2, 0.1, 0.05}), 1.0), DomainError);
  CHECK_THROWS_AS(verify_gap_bound(sb, 0.0), DomainError);
}

TEST_CASE("continuity equality on Euclidean dilates") {
  const ConvexBody b = random_body(Curvature::flat, 7, RandomBodyParams{8, 0.5, 1.0});
  const double lam = 0.85;
  const SolvedBody a = SolvedBody::solve(b), c = SolvedBody::solve(dilate_body(b, lam));
  const double R = outer_radius(b);
  for (int k : {1, 2}) {
    const VerificationReport r = verify_continuity(a, c, R, k);
    CHECK(r.pass);
    // The eigenvalue side of the bound is 2d exactly for dilates.
    const double d = r.context["d"];
    CHECK(d == doctest::Approx(-std::log(lam)).epsilon(1e-9));
    CHECK(double(r.context["eigen_rhs"]) == doctest::Approx(2 * d).epsilon(1e-6));
    CHECK(double(r.context["eigen_lhs"]) == doctest::Approx(2 * d).epsilon(1e-6));
  }
  CHECK_THROWS_AS(verify_continuity(a, c, 0.5 * R, 1), DomainError);
  CHECK_THROWS_AS(verify_continuity(a, c, R, 3), DomainError);
}

TEST_CASE("intersect_ball") {
  const ConvexBody sq = rectangle(1, 1);
  const ModelPoint c{ChartKind::plane, Vec2(0.5, 0.5)};
  CHECK(intersect_ball(sq, c, 5.0)->vertices() == sq.vertices());
  const auto piece = intersect_ball(sq, c, 0.3);
  REQUIRE(piece.has_value());
  CHECK(polygon_area(*piece) == doctest::Approx(polygon_area(geodesic_ball(Curvature::flat, 0.3, 128))).epsilon(1e-9));
  CHECK_FALSE(intersect_ball(sq, ModelPoint{ChartKind::plane, Vec2(3, 3)}, 0.5).has_value());
  const ConvexBody s = geodesic_ball(Curvature::spherical, 0.5, 32);
  CHECK_THROWS_AS(intersect_ball(s, ModelPoint{ChartKind::gnomonic, Vec2(2.0, 0)}, 1.0), ChartError);
}

TEST_CASE("splitting lemma edge cases") {
  const SolvedBody sb = SolvedBody::solve(suite_body(Curvature::hyperbolic, 2));
  const ModelPoint y0 = sb.body.base();
  SUBCASE("ball covering everything leaves an empty outer piece") {
    const VerificationReport r = verify_splitting(sb, y0, 50.0, 0.5, 0.5);
    CHECK(r.pass);
    CHECK(r.context["inside_piece"] == "whole");
    CHECK(r.context["lambda_outside"] == "inf");
  }
  SUBCASE("gamma near one makes the bound vacuous") {
    const VerificationReport r = verify_splitting(sb, y0, 1.0, 0.5, 0.99);
    CHECK(r.pass);
    CHECK(r.context["vacuous"] == true);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(verify_splitting(sb, y0, 0.5, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(verify_splitting(sb, y0, 2.0, 1.0, 0.5), DomainError);
  }
}

TEST_CASE("lemma constants") {
  const Lemma52Constants k = lemma52_constants(oracle::pi);
  CHECK(k.r > 0.0);
  CHECK(k.C > 0.0);
  CHECK(k.R > k.r);
  CHECK(k.lambda_reduced > k.lambda_v0);
  CHECK(k.half_ball_volume == doctest::Approx(ball_volume(Curvature::hyperbolic, 2, k.r / 2)));
  CHECK(k.lambda_v0 == doctest::Approx(lambda1_star(Curvature::hyperbolic, 2, oracle::pi)).epsilon(1e-9));
  CHECK_THROWS_AS(lemma52_constants(-1.0), DomainError);
}

TEST_CASE("rectangle chain") {
  for (double a : {4.0, 8.0, 16.0, 32.0}) {
    const VerificationReport r = rectangle_chain(a, 1.0);
    CHECK(r.pass);
    const double gap = r.context["gap"];
    CHECK(gap == doctest::Approx(3 * oracle::pi * oracle::pi / (a * a)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rectangle_chain(3.0, 1.0), DomainError);
  CHECK_THROWS_AS(rectangle_chain(4.0, 5.0), DomainError);
  const auto rows = rectangle_trend({8, 16, 32, 64}, 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].diameter_quantity < rows[i - 1].diameter_quantity);
  CHECK(rectangle_trend_csv(rows).rfind("a,lambda1,lambda2,gap,diameter_quantity\n", 0) == 0);
}

TEST_CASE("small stability sweep") {
  const SweepResult s = stability_sweep(Curvature::flat, SweepFamily{1.0, PerturbationMode::ellipse, 64}, {0.0, 0.1, 0.2});
  CHECK(s.points.size() == 3);
  CHECK(s.vanish_at_zero);
  CHECK(s.monotone);
  CHECK(s.points[2].lambda1_excess > s.points[1].lambda1_excess);
  // At eps = 0 only the polygon-versus-disk distance remains.
  const double rv = ball_radius_for_volume(Curvature::flat, 2, polygon_area(geodesic_ball(Curvature::flat, 1.0, 64)));
  CHECK(s.points[0].d_hausdorff ==
        doctest::Approx(std::max(1.0 - rv, rv - std::cos(oracle::pi / 64))).epsilon(1e-3));
  CHECK(sweep_csv(s).rfind("eps,d_hausdorff,d_metric,lambda1_excess,lambda2_deficit,ppw_deficit\n", 0) == 0);
  CHECK_THROWS_AS(stability_sweep(Curvature::flat, SweepFamily{}, {0.2, 0.1}), DomainError);
}

TEST_CASE("suite bodies are reproducible") {
  for (Curvature d : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
    CHECK(suite_body(d, 5).vertices() == suite_body(d, 5).vertices());
    CHECK(suite_body(d, 5).vertices() != suite_body(d, 6).vertices());
  }
}
