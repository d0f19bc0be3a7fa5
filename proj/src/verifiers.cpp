#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "spacespec/ballspec.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"
#include "spacespec/rng.hpp"
#include "spacespec/stability_lab.hpp"

namespace spacespec {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double lambda1_of_ball(Curvature delta, double r) { return lambda1_ball(BallSpec::make(delta, 2, r)); }
double lambda2_of_ball(Curvature delta, double r) { return lambda2_ball(BallSpec::make(delta, 2, r)); }

// Longest geodesic length of a mesh edge, bounded through the conformal
// factor (at most 4 on the stereographic chart, largest at a vertex elsewhere).
double geodesic_mesh_size(const TriMesh& mesh) {
  double phi = mesh.delta == Curvature::spherical ? 4.0 : 1.0;
  if (mesh.delta == Curvature::hyperbolic)
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) phi = std::max(phi, conformal_factor(mesh.point(v)));
  return mesh.max_edge() * std::sqrt(phi);
}

// A sub-check of a report with two inequalities.
struct Part {
  double lhs, rhs, tolerance;
  double margin() const {
    if (std::isinf(rhs) && rhs > 0) return inf;
    return (rhs - lhs) / tolerance;
  }
};

void put_part(nlohmann::ordered_json& ctx, const std::string& prefix, const Part& p) {
  ctx[prefix + "_lhs"] = number(p.lhs);
  ctx[prefix + "_rhs"] = number(p.rhs);
  ctx[prefix + "_tolerance"] = number(p.tolerance);
  ctx[prefix + "_pass"] = std::isinf(p.lhs) && p.lhs == p.rhs ? true : p.rhs - p.lhs >= -p.tolerance;
}

// The report carries whichever part is closer to failing, so pass means
// both parts pass.
VerificationReport binding(const std::string& name, const Part& first, const Part& second, bool use_second) {
  const bool take_second = use_second && second.margin() < first.margin();
  const Part& p = take_second ? second : first;
  VerificationReport r = VerificationReport::make(name, p.lhs, p.rhs, p.tolerance);
  r.context["binding"] = take_second ? "second" : "first";
  return r;
}

SolvedBody solve_piece(const ConvexBody& body) { return SolvedBody::solve(body); }

}  // namespace

SolvedBody SolvedBody::solve(const ConvexBody& body, const std::vector<double>& h_list) {
  const std::vector<double> h = h_list.empty() ? default_h_list(body) : h_list;
  return SolvedBody{body, convergence_study(body, h, 2), polygon_area(body)};
}

nlohmann::ordered_json SolvedBody::context() const {
  nlohmann::ordered_json c;
  std::ostringstream hash;
  hash << std::hex << body.hash();
  c["body_hash"] = hash.str();
  c["delta"] = to_int(body.delta());
  c["volume"] = volume;
  c["mass_volume"] = system().total_mass();
  c["vertices"] = eigen().mesh->vertex_count();
  if (const auto& ex = eigen().extrapolated) {
    c["h"] = ex->h;
    c["levels"] = ex->levels;
    c["lambda_errors"] = ex->errors;
    nlohmann::ordered_json order = nlohmann::ordered_json::array();
    for (double p : ex->order) order.push_back(number(p));
    c["order"] = order;
    c["monotone"] = ex->monotone;
    c["order_in_range"] = ex->order_in_range;
  }
  c["lambda1"] = lambda(0);
  c["lambda2"] = lambda(1);
  c["tolerance1"] = tolerance(0);
  c["tolerance2"] = tolerance(1);
  return c;
}

VerificationReport verify_faber_krahn(const SolvedBody& sb) {
  const double star = lambda1_star(sb.body.delta(), 2, sb.volume);
  VerificationReport r =
      VerificationReport::make("faber_krahn", star, sb.lambda(0), sb.tolerance(0) + 1e-9 * star);
  r.context = sb.context();
  r.context["lambda1_star"] = star;
  r.context["ball_radius"] = ball_radius_for_volume(sb.body.delta(), 2, sb.volume);
  return r;
}

VerificationReport verify_ppw(const SolvedBody& sb) {
  if (sb.body.delta() == Curvature::hyperbolic)
    throw DomainError("the PPW inequality is false in hyperbolic space; use gen_ppw");
  const Curvature delta = sb.body.delta();
  const double r = ball_radius_for_volume(delta, 2, sb.volume);
  const double l1s = lambda1_of_ball(delta, r), l2s = lambda2_of_ball(delta, r);
  const double ratio = sb.lambda(1) / sb.lambda(0);
  const double tol = ratio * (sb.tolerance(0) / sb.lambda(0) + sb.tolerance(1) / sb.lambda(1)) + 1e-8;
  VerificationReport rep = VerificationReport::make("ppw", ratio, l2s / l1s, tol);
  rep.context = sb.context();
  rep.context["ball_radius"] = r;
  rep.context["lambda1_star"] = l1s;
  rep.context["lambda2_star"] = l2s;
  return rep;
}

VerificationReport verify_gen_ppw(const SolvedBody& sb) {
  const Curvature delta = sb.body.delta();
  const double l1 = sb.lambda(0);
  if (!(l1 > spectral_floor(delta, 2))) throw DomainError("lambda1 is not above the spectral floor");
  const double star = lambda2_star(delta, 2, l1);
  const double dl = 1e-4 * l1;
  double slope = 0.0;
  if (l1 - dl > spectral_floor(delta, 2))
    slope = (lambda2_star(delta, 2, l1 + dl) - lambda2_star(delta, 2, l1 - dl)) / (2.0 * dl);
  else
    slope = (lambda2_star(delta, 2, l1 + dl) - star) / dl;
  VerificationReport r = VerificationReport::make("gen_ppw", sb.lambda(1), star,
                                                  sb.tolerance(1) + std::abs(slope) * sb.tolerance(0) + 1e-9 * star);
  r.context = sb.context();
  r.context["matched_radius"] = radius_from_lambda1(delta, 2, l1);
  r.context["lambda2_star_slope"] = slope;
  return r;
}

VerificationReport verify_gap_bound(const SolvedBody& sb, double R) {
  if (!(R > 0.0)) throw DomainError("gap bound radius must be positive");
  const Curvature delta = sb.body.delta();
  const AssembledSystem& sys = sb.system();
  const Eigen::VectorXd& u = sb.eigen().vectors[0];
  const CenterResult c = center_of_mass(sys, u, ramp_weight(R));
  double num = 0.0, den = 0.0;
  for (std::size_t v = 0; v < sys.mesh->vertex_count(); ++v) {
    const double w = sys.vertex_mass(static_cast<Eigen::Index>(v)) * u(static_cast<Eigen::Index>(v)) *
                     u(static_cast<Eigen::Index>(v));
    if (w <= 0.0) continue;
    const double d = geodesic_distance(c.point, sys.mesh->point(v));
    const double g = std::min(d / R, 1.0);
    const double gp = d < R ? 1.0 / R : 0.0;
    // g / s_delta(d) tends to 1 / R at the center.
    const double q = d < 1e-12 ? 1.0 / R : g / s_delta(delta, d);
    num += w * (gp * gp + q * q);
    den += w * g * g;
  }
  const double gap = sb.lambda(1) - sb.lambda(0);
  const double rhs = num / den;
  const double h_rel = geodesic_mesh_size(*sys.mesh) / inradius(sb.body).radius;
  VerificationReport r = VerificationReport::make("gap_bound", gap, rhs,
                                                  sb.tolerance(0) + sb.tolerance(1) + rhs * h_rel * h_rel);
  r.context = sb.context();
  r.context["R"] = R;
  r.context["center"] = {c.point.coords.x(), c.point.coords.y()};
  r.context["center_chart"] = std::string(chart_name(c.point.chart));
  r.context["center_residual"] = c.residual;
  r.context["vacuous"] = rhs > 10.0 * gap;
  return r;
}

VerificationReport verify_concentration(const SolvedBody& sb, double R) {
  if (sb.body.delta() != Curvature::hyperbolic)
    throw DomainError("the concentration lemma is stated for hyperbolic bodies");
  if (!(R > 0.0)) throw DomainError("concentration radius must be positive");
  const AssembledSystem& sys = sb.system();
  const Eigen::VectorXd& u = sb.eigen().vectors[0];
  const double l1 = sb.lambda(0), gap = sb.lambda(1) - sb.lambda(0);
  if (!(gap > 0.0)) throw DomainError("no spectral gap");
  const double band = geodesic_mesh_size(*sys.mesh);

  // First estimate, lumped masses of u^2 inside, outside and near the sphere.
  const CenterResult c = center_of_mass(sys, u, ramp_weight(R));
  double inside = 0.0, outside = 0.0, near = 0.0;
  for (std::size_t v = 0; v < sys.mesh->vertex_count(); ++v) {
    const double uv = u(static_cast<Eigen::Index>(v));
    const double w = sys.vertex_mass(static_cast<Eigen::Index>(v)) * uv * uv;
    if (w <= 0.0) continue;
    const double d = geodesic_distance(c.point, sys.mesh->point(v));
    (d < R ? inside : outside) += w;
    if (std::abs(d - R) <= band) near += w;
  }
  const double coef = gap - 1.0 / std::pow(std::sinh(R), 2);
  const double dcoef = sb.tolerance(0) + sb.tolerance(1);
  const Part first{coef * outside, 2.0 / (R * R) * inside,
                   (std::abs(coef) + dcoef + 2.0 / (R * R)) * near + dcoef * outside + 1e-12};

  // Second estimate, about the center taken with the ramp at R / 2.
  const double threshold = 2.0 * std::sqrt(1.0 / gap);
  const bool skipped = R < threshold;
  Part second{0.0, 0.0, 1.0};
  nlohmann::ordered_json ctx = sb.context();
  if (!skipped) {
    const CenterResult c2 = center_of_mass(sys, u, ramp_weight(R / 2.0));
    const ModelPoint x2 = chart_convert(c2.point, sb.body.chart());
    const double q = 8.0 / (gap * R * R + 4.0);
    const double bound = (1.0 + 1.0 / (R * R)) / (1.0 - q) * (l1 + q);
    const double dbound = (1.0 + 1.0 / (R * R)) / (1.0 - q) * sb.tolerance(0);
    const std::optional<ConvexBody> piece = intersect_ball(sb.body, x2, R);
    if (!piece) throw GeometryError("the ball about the mass center misses the body");
    const SolvedBody ps = solve_piece(*piece);
    second = Part{ps.lambda(0), bound, ps.tolerance(0) + dbound + 1e-12};
    ctx["second_center"] = {x2.coords.x(), x2.coords.y()};
    ctx["second_q"] = q;
    ctx["second_piece_volume"] = ps.volume;
  }
  VerificationReport r = binding("concentration", first, second, !skipped);
  r.context.update(ctx);
  r.context["R"] = R;
  r.context["center"] = {c.point.coords.x(), c.point.coords.y()};
  r.context["mass_inside"] = inside;
  r.context["mass_outside"] = outside;
  r.context["mass_near_sphere"] = near;
  put_part(r.context, "first", first);
  r.context["second_threshold"] = threshold;
  r.context["second_skipped"] = skipped;
  if (!skipped) put_part(r.context, "second", second);
  return r;
}

VerificationReport verify_inradius(const SolvedBody& sb) {
  const double l1 = sb.lambda(0);
  const double lhs = pi / (2.0 * std::sqrt(l1 + 1.0));
  const double slope = pi / 4.0 * std::pow(l1 + 1.0, -1.5);
  const InradiusResult in = inradius(sb.body);
  VerificationReport r = VerificationReport::make("inradius", lhs, in.radius, slope * sb.tolerance(0) + 1e-9);
  r.context = sb.context();
  r.context["incenter"] = {in.center.coords.x(), in.center.coords.y()};
  return r;
}

VerificationReport verify_li_yau(const SolvedBody& sb) {
  const EigenResult& e = sb.eigen();
  const TriMesh& mesh = *e.mesh;
  const Eigen::VectorXd& f = e.vectors[0];
  const double fmax = f.maxCoeff();
  const double lam = sb.lambda(0) + (sb.body.delta() == Curvature::hyperbolic ? 1.0 : 0.0);
  const GradientField grad = gradient_field(mesh, f);
  double worst = 0.0;
  std::size_t excluded = 0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double fc = (f(tri[0]) + f(tri[1]) + f(tri[2])) / 3.0;
    const double room = lam * (fmax * fmax - fc * fc);
    if (!(room > 0.0)) {
      ++excluded;
      continue;
    }
    worst = std::max(worst, grad.metric_sq[t] / room);
  }
  // P1 gradients are first order accurate; the allowance scales with h.
  const double h_rel = geodesic_mesh_size(mesh) / inradius(sb.body).radius;
  VerificationReport r =
      VerificationReport::make("li_yau", worst, 1.0, sb.tolerance(0) / sb.lambda(0) + h_rel);
  r.context = sb.context();
  r.context["lambda_used"] = lam;
  r.context["sup_f"] = fmax;
  r.context["excluded_centroids"] = excluded;
  return r;
}

namespace {

double continuity_lambda(Curvature delta, double s, double t) {
  const double e2 = std::exp(2.0 * s);
  if (delta == Curvature::flat) return 2.0 * s;
  const double inner = e2 * s_delta(delta, t / e2) / s_delta(delta, t);
  return 2.0 * s + to_int(delta) * std::log(inner);
}

double continuity_volume(Curvature delta, double s, double t) {
  if (delta != Curvature::hyperbolic) return 2.0 * s;
  const double es = std::exp(-s);
  return 2.0 * s + std::log(es * std::sinh(t) / std::sinh(es * t));
}

}  // namespace

VerificationReport verify_continuity(const SolvedBody& a, const SolvedBody& b, double R, int k, int grid) {
  if (k != 1 && k != 2) throw DomainError("continuity is checked for lambda_1 and lambda_2");
  if (a.body.delta() != b.body.delta()) throw DomainError("bodies of different geometries");
  const SupportFunction sa = support_of(a.body, grid), sb = support_of(b.body, grid);
  const double d = body_metric(sa, sb);  // checks base and grid
  if (sa.max() > R * (1.0 + 1e-12) || sb.max() > R * (1.0 + 1e-12)) throw DomainError("bodies must lie in the ball B(base, R)");
  const Curvature delta = a.body.delta();

  // The sup over the circle exceeds the grid maximum by at most half a cell
  // times the Lipschitz constants of ln rho.
  const double la = lipschitz_bound(delta, sa.min(), sa.max()) / sa.min();
  const double lb = lipschitz_bound(delta, sb.min(), sb.max()) / sb.min();
  const double allowance = pi / grid * (la + lb);

  const std::size_t j = static_cast<std::size_t>(k - 1);
  const double lam_lhs = std::abs(std::log(a.lambda(j) / b.lambda(j)));
  const double lam_rhs = continuity_lambda(delta, d, R);
  const double lam_tol = a.tolerance(j) / a.lambda(j) + b.tolerance(j) / b.lambda(j) +
                         (continuity_lambda(delta, d + allowance, R) - lam_rhs) + 1e-12;
  const Part eig{lam_lhs, lam_rhs, lam_tol};

  const double vol_lhs = std::abs(std::log(a.volume / b.volume));
  const double vol_rhs = continuity_volume(delta, d, R);
  const Part vol{vol_lhs, vol_rhs, (continuity_volume(delta, d + allowance, R) - vol_rhs) + 1e-12};

  VerificationReport r = binding("continuity", eig, vol, true);
  r.context["k"] = k;
  r.context["R"] = R;
  r.context["d"] = d;
  r.context["grid"] = grid;
  r.context["grid_allowance"] = allowance;
  r.context["hash_a"] = a.context()["body_hash"];
  r.context["hash_b"] = b.context()["body_hash"];
  put_part(r.context, "eigen", eig);
  put_part(r.context, "volume", vol);
  return r;
}

std::optional<ConvexBody> intersect_ball(const ConvexBody& body, const ModelPoint& center, double R, int m) {
  if (!(R > 0.0)) throw DomainError("ball radius must be positive");
  const ModelPoint c = chart_convert(center, body.chart());
  bool all_inside = true;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (geodesic_distance(c, body.vertex(i)) > R) all_inside = false;
  if (all_inside) return body;
  if (body.delta() == Curvature::spherical && geodesic_distance(c, ModelPoint{body.chart(), Vec2::Zero()}) + R >=
                                                  pi / 2.0)
    throw ChartError("ball leaves the hemisphere of the gnomonic chart");
  const ConvexBody ball = geodesic_ball(c, R, m);

  // Sutherland-Hodgman against the ball polygon; geodesics are chart lines.
  std::vector<Vec2> poly = body.vertices();
  const auto& bv = ball.vertices();
  for (std::size_t i = 0; i < bv.size() && !poly.empty(); ++i) {
    const Vec2 p = bv[i], q = bv[(i + 1) % bv.size()];
    const Vec2 e = q - p;
    auto side = [&](const Vec2& x) { return e.x() * (x.y() - p.y()) - e.y() * (x.x() - p.x()); };
    std::vector<Vec2> out;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const Vec2 s = poly[j], t = poly[(j + 1) % poly.size()];
      const double fs = side(s), ft = side(t);
      if (fs >= 0.0) out.push_back(s);
      if ((fs >= 0.0) != (ft >= 0.0)) out.push_back(s + fs / (fs - ft) * (t - s));
    }
    poly = std::move(out);
  }
  // Drop short edges and flat corners left by the clip. An edge far shorter
  // than the ball polygon's would leave slivers in the mesh. Removing a vertex
  // of a convex polygon only shrinks it, so the piece stays inside both sets.
  double ball_edge = 0.0;
  for (std::size_t i = 0; i < bv.size(); ++i) ball_edge = std::max(ball_edge, (bv[(i + 1) % bv.size()] - bv[i]).norm());
  const double min_edge = 0.02 * ball_edge;
  bool changed = true;
  while (changed && poly.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& prev = poly[(i + poly.size() - 1) % poly.size()];
      const Vec2& cur = poly[i];
      const Vec2& next = poly[(i + 1) % poly.size()];
      const Vec2 a = cur - prev, b = next - cur;
      const double turn = a.x() * b.y() - a.y() * b.x();
      if (a.norm() < min_edge || turn <= 1e-12 * a.norm() * b.norm()) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (poly.size() < 3) return std::nullopt;
  Vec2 mid = Vec2::Zero();
  for (const Vec2& p : poly) mid += p;
  mid /= static_cast<double>(poly.size());
  try {
    return ConvexBody(body.delta(), body.chart(), poly, mid);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

VerificationReport verify_splitting(const SolvedBody& sb, const ModelPoint& y0, double R, double alpha, double gamma) {
  if (!(R >= 1.0)) throw DomainError("splitting needs R >= 1");
  if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0 && gamma < 1.0))
    throw DomainError("alpha and gamma must lie in (0, 1)");
  const ModelPoint y = chart_convert(y0, sb.body.chart());
  const double l1 = sb.lambda(0);

  // Inner piece: Omega cut by the inscribed ball polygon, a subset of the
  // true intersection, so its eigenvalue errs upward.
  double lam_in = inf, tol_in = 0.0;
  std::string in_kind = "empty";
  if (const auto piece = intersect_ball(sb.body, y, R)) {
    if (piece->vertices() == sb.body.vertices()) {
      lam_in = l1;
      tol_in = sb.tolerance(0);
      in_kind = "whole";
    } else {
      const SolvedBody ps = solve_piece(*piece);
      lam_in = ps.lambda(0);
      tol_in = ps.tolerance(0);
      in_kind = "clipped";
    }
  }

  // Outer piece: finest-mesh triangles that stay a full edge length outside
  // B(y, gamma R). The raw P1 eigenvalue bounds that subdomain from above.
  const TriMesh& mesh = *sb.eigen().mesh;
  const ModelPoint yc = chart_convert(y, mesh.chart);
  std::vector<double> dist(mesh.vertex_count());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) dist[v] = geodesic_distance(yc, mesh.point(v));
  const double margin = geodesic_mesh_size(mesh);
  const TriMesh outer = restrict_mesh(mesh, [&](std::size_t t) {
    for (int v : mesh.triangles[t])
      if (dist[static_cast<std::size_t>(v)] < gamma * R + margin) return false;
    return true;
  });
  double lam_out = inf;
  std::size_t outer_unknowns = 0;
  if (!outer.triangles.empty() && outer.interior_count() > 0) {
    const AssembledSystem os = assemble(outer);
    outer_unknowns = os.size();
    lam_out = solve_lowest(os, 1).lambdas[0];
  }

  const double factor = 1.0 / std::pow(1.0 - std::pow(R, -alpha), 2);
  const double rhs = factor * (l1 + 8.0 / (std::pow(1.0 - gamma, 2) * std::pow(R, 2.0 * (1.0 - alpha))));
  const double lhs = std::min(lam_in, lam_out);
  const double tol = (lam_in <= lam_out ? tol_in : 0.0) + (std::isfinite(factor) ? factor : 0.0) * sb.tolerance(0) +
                     1e-9 * (std::isfinite(lhs) ? lhs : l1);
  VerificationReport r = VerificationReport::make("splitting", lhs, rhs, tol);
  r.context = sb.context();
  r.context["y0"] = {y.coords.x(), y.coords.y()};
  r.context["R"] = R;
  r.context["alpha"] = alpha;
  r.context["gamma"] = gamma;
  r.context["lambda_inside"] = number(lam_in);
  r.context["inside_piece"] = in_kind;
  r.context["lambda_outside"] = number(lam_out);
  r.context["outside_unknowns"] = outer_unknowns;
  r.context["vacuous"] = !std::isfinite(rhs) || rhs > 10.0 * l1;
  return r;
}

Lemma52Constants lemma52_constants(double V0, int n, Curvature delta) {
  if (!(V0 > 0.0)) throw DomainError("volume must be positive");
  Lemma52Constants k;
  k.lambda_v0 = lambda1_star(delta, n, V0);
  k.r = pi / std::sqrt(2.0 * k.lambda_v0 + n - 1);
  k.half_ball_volume = ball_volume(delta, n, k.r / 2.0);
  if (!(V0 > k.half_ball_volume)) throw DomainError("volume does not exceed Vol B(r/2)");
  k.lambda_reduced = lambda1_star(delta, n, V0 - k.half_ball_volume);
  k.C = std::min(2.0 * k.lambda_v0, 0.5 * (k.lambda_v0 + k.lambda_reduced));
  // alpha = 1/2: (1 - R^{-1/2})^{-2} [C + 32 / R] decreases to C < target.
  const double target = k.lambda_reduced;
  auto f = [&](double R) { return (k.C + 32.0 / R) / std::pow(1.0 - 1.0 / std::sqrt(R), 2) - target; };
  double lo = 1.0, hi = 2.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw SolverError("no radius satisfies the lemma condition");
  }
  if (lo == 1.0) lo = 1.0 + 1e-12;
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  k.R = root.second;
  return k;
}

VerificationReport rectangle_chain(double a, double b) {
  if (!(b > 0.0 && a >= b)) throw DomainError("rectangle needs a >= b > 0");
  if (!(a >= 4.0)) throw DomainError("the convexity chain needs a >= 4");
  const double pi2 = pi * pi;
  const double l1 = pi2 * (1.0 / (a * a) + 1.0 / (b * b));
  const double l2 = pi2 * (4.0 / (a * a) + 1.0 / (b * b));
  const double half = std::pow(a / 2.0, -2.0 / 3.0);
  const double rhs = l1 / std::pow(1.0 - half, 2) + 2.0 * pi2 * half;
  VerificationReport r = VerificationReport::make("rectangle_chain", l2, rhs, 1e-12 * rhs);
  r.context["a"] = a;
  r.context["b"] = b;
  r.context["lambda1"] = l1;
  r.context["lambda2"] = l2;
  r.context["gap"] = l2 - l1;
  r.context["volume"] = a * b;
  r.context["volume_bound"] = 4.0 * a * b;  // L_n^{n-1} n^n L_1 with n = 2
  r.context["diameter_quantity"] = (l2 - l1) * std::pow(std::hypot(a, b), 2.0 / 3.0) / (1.0 + l1);
  return r;
}

std::vector<RectangleTrendRow> rectangle_trend(const std::vector<double>& a_grid, double b) {
  std::vector<RectangleTrendRow> rows;
  for (double a : a_grid) {
    if (!(a >= b && b > 0.0)) throw DomainError("rectangle needs a >= b > 0");
    RectangleTrendRow row;
    row.a = a;
    row.lambda1 = pi * pi * (1.0 / (a * a) + 1.0 / (b * b));
    row.lambda2 = pi * pi * (4.0 / (a * a) + 1.0 / (b * b));
    row.gap = row.lambda2 - row.lambda1;
    row.diameter_quantity = row.gap * std::pow(std::hypot(a, b), 2.0 / 3.0) / (1.0 + row.lambda1);
    rows.push_back(row);
  }
  return rows;
}

std::string rectangle_trend_csv(const std::vector<RectangleTrendRow>& rows) {
  std::ostringstream os;
  os << "a,lambda1,lambda2,gap,diameter_quantity\n";
  for (const auto& r : rows)
    os << format_sig(r.a) << ',' << format_sig(r.lambda1) << ',' << format_sig(r.lambda2) << ','
       << format_sig(r.gap) << ',' << format_sig(r.diameter_quantity) << '\n';
  return os.str();
}

ConvexBody suite_body(Curvature delta, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "suite_body", static_cast<std::uint64_t>(to_int(delta) + 1)));
  RandomBodyParams p;
  p.nv = rng.uniform_int(5, 12);
  switch (delta) {
    case Curvature::flat: p.r_min = 0.5, p.r_max = 1.5; break;
    case Curvature::hyperbolic: p.r_min = 0.4, p.r_max = 1.5; break;
    case Curvature::spherical: p.r_min = 0.3, p.r_max = 1.2; break;
  }
  return random_body(delta, rng.next(), p);
}

}  // namespace spacespec
