#include <algorithm>
#include <cmath>
#include <sstream>

#include "spacespec/ballspec.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"
#include "spacespec/stability_lab.hpp"

namespace spacespec {

namespace {

double lam1(Curvature delta, double r) { return lambda1_ball(BallSpec::make(delta, 2, r)); }
double lam2(Curvature delta, double r) { return lambda2_ball(BallSpec::make(delta, 2, r)); }

bool nondecreasing(const std::vector<SweepPoint>& pts, double SweepPoint::*value, double SweepPoint::*tol) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].*value < pts[i - 1].*value - (pts[i].*tol + pts[i - 1].*tol)) return false;
  return true;
}

}  // namespace

SweepResult stability_sweep(Curvature delta, const SweepFamily& family, const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw DomainError("empty eps grid");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > eps_grid[i - 1])) throw DomainError("eps grid must be increasing");

  SweepResult out;
  out.delta = delta;
  for (double eps : eps_grid) {
    const ConvexBody body = perturbed_ball(delta, family.radius, eps, family.mode, family.m);
    const SolvedBody sb = SolvedBody::solve(body);
    const double l1 = sb.lambda(0), l2 = sb.lambda(1);
    const double t1 = sb.tolerance(0), t2 = sb.tolerance(1);

    // Same-volume ball about the mass center of u1^2 with g = 1.
    const CenterResult c = center_of_mass(sb.system(), sb.eigen().vectors[0], [](double) { return 1.0; });
    const ModelPoint center = chart_convert(c.point, body.chart());
    const double r = ball_radius_for_volume(delta, 2, sb.volume);
    const ConvexBody ball = geodesic_ball(center, r, family.m);

    SweepPoint p;
    p.eps = eps;
    p.d_hausdorff = hausdorff_distance(body, ball).value;
    p.d_metric = body_metric(support_of(body.with_base(center.coords), 256), support_of(ball, 256));

    const double l1s = lam1(delta, r), l2s = lam2(delta, r);
    p.lambda1_excess = l1 - l1s;
    p.tol_excess = t1 + 1e-9 * l1s;

    const double matched = lambda2_star(delta, 2, l1);
    const double dl = 1e-4 * l1;
    const double slope = (lambda2_star(delta, 2, l1 + dl) - matched) / dl;
    p.lambda2_deficit = matched - l2;
    p.tol_lambda2 = t2 + std::abs(slope) * t1 + 1e-9 * matched;

    const double ratio = l2 / l1;
    p.ppw_deficit = l2s / l1s - ratio;
    p.tol_ppw = ratio * (t1 / l1 + t2 / l2) + 1e-8;
    out.points.push_back(p);
  }

  // The unperturbed polygon is not the ball. It contains the inscribed ball
  // and lies inside the circumscribed one, which bounds each column at eps = 0.
  const ConvexBody polygon = perturbed_ball(delta, family.radius, 0.0, family.mode, family.m);
  const double r_in = inner_radius(polygon), r_out = outer_radius(polygon);
  const double r_v = ball_radius_for_volume(delta, 2, polygon_area(polygon));
  out.polygon_excess = lam1(delta, r_in) - lam1(delta, r_v);
  out.polygon_lambda2 = lam2(delta, r_in) - lam2(delta, r_out);
  out.polygon_ppw = lam2(delta, r_v) / lam1(delta, r_v) - lam2(delta, r_out) / lam1(delta, r_in);

  out.vanish_at_zero = false;
  if (eps_grid.front() == 0.0) {
    const SweepPoint& z = out.points.front();
    out.vanish_at_zero = z.lambda1_excess >= -z.tol_excess && z.lambda1_excess <= out.polygon_excess + z.tol_excess &&
                         z.lambda2_deficit >= -z.tol_lambda2 &&
                         z.lambda2_deficit <= out.polygon_lambda2 + z.tol_lambda2;
    if (delta != Curvature::hyperbolic)
      out.vanish_at_zero = out.vanish_at_zero && z.ppw_deficit >= -z.tol_ppw &&
                           z.ppw_deficit <= out.polygon_ppw + z.tol_ppw;
  }
  out.monotone = nondecreasing(out.points, &SweepPoint::lambda1_excess, &SweepPoint::tol_excess) &&
                 nondecreasing(out.points, &SweepPoint::lambda2_deficit, &SweepPoint::tol_lambda2);
  if (delta != Curvature::hyperbolic)
    out.monotone = out.monotone && nondecreasing(out.points, &SweepPoint::ppw_deficit, &SweepPoint::tol_ppw);
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "eps,d_hausdorff,d_metric,lambda1_excess,lambda2_deficit,ppw_deficit\n";
  for (const auto& p : result.points)
    os << format_sig(p.eps) << ',' << format_sig(p.d_hausdorff) << ',' << format_sig(p.d_metric) << ','
       << format_sig(p.lambda1_excess) << ',' << format_sig(p.lambda2_deficit) << ',' << format_sig(p.ppw_deficit)
       << '\n';
  return os.str();
}

}  // namespace spacespec
