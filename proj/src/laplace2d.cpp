#include "spacespec/laplace2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eigensolve.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"

namespace spacespec {

Eigen::VectorXd AssembledSystem::extend(const Eigen::VectorXd& x) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknown_of.size()));
  for (std::size_t i = 0; i < interior.size(); ++i)
    full(interior[i]) = x(static_cast<Eigen::Index>(i));
  return full;
}

Eigen::VectorXd AssembledSystem::restrict_to_interior(const Eigen::VectorXd& full) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t i = 0; i < interior.size(); ++i) x(static_cast<Eigen::Index>(i)) = full(interior[i]);
  return x;
}

AssembledSystem assemble(std::shared_ptr<const TriMesh> mesh) {
  AssembledSystem sys;
  const std::size_t nv = mesh->vertex_count();
  sys.unknown_of.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v)
    if (!mesh->boundary[v]) {
      sys.unknown_of[v] = static_cast<int>(sys.interior.size());
      sys.interior.push_back(static_cast<int>(v));
    }
  if (sys.interior.empty()) throw MeshError("mesh has no interior vertices");

  std::vector<Eigen::Triplet<double>> ta, tm, tf;
  sys.vertex_mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    const auto& tri = mesh->triangles[t];
    const double area = mesh->triangle_area(t);
    if (!(area > 1e-14)) throw MeshError("degenerate triangle in assembly");
    std::array<Vec2, 3> p;
    for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = mesh->vertices[static_cast<std::size_t>(tri[i])];
    std::array<double, 3> b, c, phi;
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      b[i] = pj.y() - pk.y();
      c[i] = pk.x() - pj.x();
      // phi[i] sits at the midpoint of the edge opposite vertex i.
      phi[i] = conformal_factor(ModelPoint{mesh->chart, 0.5 * (pj + pk)});
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double kij = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        // Midpoint rule: basis i is 1/2 at the two midpoints adjacent to it.
        double w = 0.0;
        for (std::size_t q = 0; q < 3; ++q)
          if (q != i && q != j) w += phi[q];
        const double mij = area / 12.0 * (i == j ? w : phi[3 - i - j]);
        const int vi = tri[i], vj = tri[j];
        sys.vertex_mass(vi) += mij;
        tf.emplace_back(vi, vj, mij);
        const int ui = sys.unknown_of[static_cast<std::size_t>(vi)];
        const int uj = sys.unknown_of[static_cast<std::size_t>(vj)];
        if (ui < 0 || uj < 0) continue;
        ta.emplace_back(ui, uj, kij);
        tm.emplace_back(ui, uj, mij);
      }
  }
  const auto n = static_cast<Eigen::Index>(sys.interior.size());
  sys.A.resize(n, n);
  sys.M.resize(n, n);
  sys.A.setFromTriplets(ta.begin(), ta.end());
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.M_full.resize(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv));
  sys.M_full.setFromTriplets(tf.begin(), tf.end());
  sys.mesh = std::move(mesh);
  return sys;
}

AssembledSystem assemble(const TriMesh& mesh) { return assemble(std::make_shared<const TriMesh>(mesh)); }

double EigenResult::lambda(std::size_t k) const {
  if (extrapolated) return extrapolated->lambdas.at(k);
  return lambdas.at(k);
}

double EigenResult::error(std::size_t k) const {
  if (extrapolated) return extrapolated->errors.at(k);
  return 0.0;
}

double EigenResult::tolerance(std::size_t k) const { return std::max(error(k), 1e-6 * std::abs(lambda(k))); }

EigenResult solve_lowest(const AssembledSystem& sys, int k, const SolveOptions& opts) {
  const auto ge = detail::lowest_generalized(sys.A, sys.M, k, opts.dense_threshold, opts.residual_tol,
                                             opts.max_iterations);
  EigenResult r;
  r.mesh = sys.mesh;
  r.h = sys.mesh->h;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = ge.vectors.col(i);
    // Ground state positive; other modes signed by their largest entry.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const double sign = i == 0 ? v.sum() : v(imax);
    if (sign < 0.0) v = -v;
    r.lambdas.push_back(ge.values(i));
    r.residuals.push_back(ge.residuals(i));
    r.vectors.push_back(sys.extend(v));
  }
  return r;
}

std::vector<double> default_h_list(const ConvexBody& body) {
  const InradiusResult in = inradius(body);
  const ModelPoint c = chart_convert(in.center, conformal_chart(body.delta()));
  const double r_chart = in.radius / std::sqrt(conformal_factor(c));
  // Keep the coarse level near 600 vertices on elongated bodies.
  const double area_chart = polygon_area(body) / conformal_factor(c);
  const double h0 = std::max(r_chart / 4.0, std::sqrt(3.2 * area_chart / 600.0));
  return {h0, h0 / 2.0, h0 / 4.0};
}

namespace {

bool halves(double a, double b) { return std::abs(a / b - 2.0) < 1e-9; }

Extrapolation extrapolate(const std::vector<double>& h, const std::vector<std::vector<double>>& levels) {
  Extrapolation ex;
  ex.h = h;
  ex.levels = levels;
  const std::size_t L = h.size();
  const double ha = h[L - 3], hb = h[L - 2], hc = h[L - 1];
  const std::size_t k = levels.back().size();
  for (std::size_t j = 0; j < k; ++j) {
    const double la = levels[L - 3][j], lb = levels[L - 2][j], lc = levels[L - 1][j];
    const double ext = lc + (lc - lb) / ((hb / hc) * (hb / hc) - 1.0);
    const double ext_coarse = lb + (lb - la) / ((ha / hb) * (ha / hb) - 1.0);
    double err = std::abs(ext - ext_coarse);
    const double ratio = (la - lb) / (lb - lc);
    double p = std::numeric_limits<double>::quiet_NaN();
    if (ratio > 0.0 && std::isfinite(ratio)) {
      p = std::log(ratio) / std::log(std::sqrt((ha / hb) * (hb / hc)));
      if (p > 0.5 && p < 6.0) {
        const double ext_p = lc + (lc - lb) / (std::pow(hb / hc, p) - 1.0);
        err = std::max(err, std::abs(ext_p - ext));
      } else {
        err = std::max(err, std::abs(lc - ext));
      }
    } else {
      err = std::max(err, std::abs(lc - ext));
    }
    bool mono = true;
    for (std::size_t l = 1; l < L; ++l)
      if (levels[l][j] > levels[l - 1][j]) mono = false;
    ex.monotone = ex.monotone && mono;
    ex.order_in_range = ex.order_in_range && p >= 1.5 && p <= 2.5;
    ex.lambdas.push_back(ext);
    ex.errors.push_back(err);
    ex.order.push_back(p);
  }
  return ex;
}

}  // namespace

StudyResult convergence_study(const ConvexBody& body, const std::vector<double>& h_list, int k,
                              const SolveOptions& opts) {
  if (h_list.size() < 3) throw DomainError("need >= 3 levels for a convergence study");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1])) throw DomainError("mesh sizes must be strictly decreasing");

  std::vector<std::vector<double>> levels;
  std::shared_ptr<const TriMesh> mesh;
  std::optional<AssembledSystem> sys;
  EigenResult last;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (i > 0 && halves(h_list[i - 1], h_list[i]))
      mesh = std::make_shared<const TriMesh>(refine_uniform(*mesh, body));
    else
      mesh = std::make_shared<const TriMesh>(triangulate(body, h_list[i]));
    sys = assemble(mesh);
    last = solve_lowest(*sys, k, opts);
    levels.push_back(last.lambdas);
  }
  last.extrapolated = extrapolate(h_list, levels);
  return StudyResult{std::move(last), std::move(*sys)};
}

StudyResult convergence_study(const ConvexBody& body, int k) {
  return convergence_study(body, default_h_list(body), k);
}

GradientField gradient_field(const TriMesh& mesh, const Eigen::VectorXd& f) {
  GradientField g;
  g.flat.reserve(mesh.triangles.size());
  g.metric_sq.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    Vec2 grad = Vec2::Zero();
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = mesh.vertices[static_cast<std::size_t>(tri[(i + 1) % 3])];
      const Vec2& pk = mesh.vertices[static_cast<std::size_t>(tri[(i + 2) % 3])];
      grad += f(tri[i]) * Vec2(pj.y() - pk.y(), pk.x() - pj.x());
    }
    grad /= 2.0 * area;
    g.flat.push_back(grad);
    g.metric_sq.push_back(grad.squaredNorm() / conformal_factor(ModelPoint{mesh.chart, mesh.centroid(t)}));
  }
  return g;
}

GradientField gradient_field(const EigenResult& result, int which) {
  if (which < 1 || static_cast<std::size_t>(which) > result.vectors.size())
    throw DomainError("eigenvector index out of range");
  return gradient_field(*result.mesh, result.vectors[static_cast<std::size_t>(which - 1)]);
}

std::string eigen_csv(const EigenResult& result) {
  std::ostringstream os;
  os << "vertex_index,x,y,u1,u2\n";
  const TriMesh& m = *result.mesh;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    const auto idx = static_cast<Eigen::Index>(v);
    os << v << ',' << format_sig(m.vertices[v].x()) << ',' << format_sig(m.vertices[v].y()) << ','
       << format_sig(result.vectors.at(0)(idx)) << ','
       << (result.vectors.size() > 1 ? format_sig(result.vectors[1](idx)) : std::string("0")) << '\n';
  }
  return os.str();
}

}  // namespace spacespec
