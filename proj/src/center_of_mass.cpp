#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "spacespec/errors.hpp"
#include "spacespec/stability_lab.hpp"

namespace spacespec {

namespace {

struct Balance {
  Vec2 F = Vec2::Zero();
  double norm = 0.0;
  double gmax = 0.0;
  double stiffness = 0.0;  // sum of w g(d) / d, the scale of a fixed-point step
};

Balance balance(const std::vector<ModelPoint>& pts, const std::vector<double>& w, const RadialWeight& g,
                const ModelPoint& x) {
  Balance b;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const TangentVec l = log_map(x, pts[i]);
    const double d = tangent_norm(l);
    const double gd = g(d);
    b.gmax = std::max(b.gmax, gd);
    if (d < 1e-14) continue;
    b.F += w[i] * gd / d * l.components;
    b.stiffness += w[i] * gd / d;
  }
  b.norm = tangent_norm(TangentVec{x, b.F});
  return b;
}

bool usable(ChartKind chart, const Vec2& c) {
  if (chart == ChartKind::stereographic) return c.squaredNorm() < 1.0 - 1e-9;
  return in_chart_region(chart, c);
}

}  // namespace

RadialWeight ramp_weight(double R) {
  if (!(R > 0.0)) throw DomainError("ramp radius must be positive");
  return [R](double s) { return std::min(s / R, 1.0); };
}

CenterResult center_of_mass(const std::vector<ModelPoint>& points, const std::vector<double>& weights,
                            const RadialWeight& g, std::optional<ModelPoint> start) {
  if (points.empty() || points.size() != weights.size()) throw DomainError("center of mass needs weighted points");
  const ChartKind chart = points.front().chart;
  if (!is_conformal(chart)) throw ChartError("center of mass works in a conformal chart");
  double total = 0.0;
  Vec2 mean = Vec2::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] < 0.0) throw DomainError("center of mass needs nonnegative weights");
    if (points[i].chart != chart) throw ChartError("points must share one chart");
    total += weights[i];
    mean += weights[i] * points[i].coords;
  }
  if (!(total > 0.0)) throw DomainError("center of mass needs a nonzero weight");
  Vec2 x = start ? chart_convert(*start, chart).coords : Vec2(mean / total);

  double spread = 0.0;
  for (const auto& p : points) spread = std::max(spread, (p.coords - x).norm());
  const double fd = 1e-6 * std::max(spread, 1e-3);

  CenterResult out;
  Balance b = balance(points, weights, g, ModelPoint{chart, x});
  for (int it = 0; it < 200; ++it) {
    out.iterations = it;
    const double threshold = 1e-8 * b.gmax * total;
    if (b.norm <= threshold) {
      out.point = ModelPoint{chart, x};
      out.residual = b.norm;
      out.threshold = threshold;
      return out;
    }
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
      Vec2 e = Vec2::Zero();
      e(k) = fd;
      J.col(k) = (balance(points, weights, g, ModelPoint{chart, x + e}).F -
                  balance(points, weights, g, ModelPoint{chart, x - e}).F) /
                 (2.0 * fd);
    }
    bool moved = false;
    const Vec2 step = J.fullPivLu().isInvertible() ? Vec2(-J.fullPivLu().solve(b.F)) : Vec2::Zero();
    for (double alpha = 1.0; alpha > 1e-6 && step.allFinite() && step.norm() > 0.0; alpha *= 0.5) {
      const Vec2 trial = x + alpha * step;
      if (!usable(chart, trial)) continue;
      const Balance bt = balance(points, weights, g, ModelPoint{chart, trial});
      if (bt.norm < b.norm) {
        x = trial;
        b = bt;
        moved = true;
        break;
      }
    }
    if (!moved && b.stiffness > 0.0) {
      // Fixed-point step along the field.
      const ModelPoint next = exp_map(TangentVec{ModelPoint{chart, x}, b.F / b.stiffness});
      const Balance bt = balance(points, weights, g, next);
      if (bt.norm < b.norm) {
        x = next.coords;
        b = bt;
        moved = true;
      }
    }
    if (!moved) break;
  }
  throw SolverError("center of mass did not converge, residual " + std::to_string(b.norm));
}

CenterResult center_of_mass(const AssembledSystem& sys, const Eigen::VectorXd& u, const RadialWeight& g) {
  std::vector<ModelPoint> pts;
  std::vector<double> w;
  for (std::size_t v = 0; v < sys.mesh->vertex_count(); ++v) {
    const double uv = u(static_cast<Eigen::Index>(v));
    const double wv = sys.vertex_mass(static_cast<Eigen::Index>(v)) * uv * uv;
    if (wv <= 0.0) continue;
    pts.push_back(sys.mesh->point(v));
    w.push_back(wv);
  }
  return center_of_mass(pts, w, g);
}

}  // namespace spacespec
