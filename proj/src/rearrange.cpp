#include "spacespec/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spacespec/ballspec.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"

namespace spacespec {

LevelMeasure::LevelMeasure(const TriMesh& mesh, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != mesh.vertex_count())
    throw DomainError("function size does not match the mesh");
  pieces_.reserve(mesh.triangles.size());
  weights_.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    double phi = 0.0;
    std::array<double, 3> val;
    for (int i = 0; i < 3; ++i) {
      const Vec2& p = mesh.vertices[static_cast<std::size_t>(tri[(i + 1) % 3])];
      const Vec2& q = mesh.vertices[static_cast<std::size_t>(tri[(i + 2) % 3])];
      phi += conformal_factor(ModelPoint{mesh.chart, 0.5 * (p + q)}) / 3.0;
      val[static_cast<std::size_t>(i)] = u(tri[i]);
    }
    std::sort(val.begin(), val.end());
    const double w = phi * mesh.triangle_area(t);
    pieces_.push_back(Piece{val[0], val[1], val[2], w});
    weights_.push_back(w);
    total_ += w;
  }
  max_ = std::max(0.0, u.size() > 0 ? u.maxCoeff() : 0.0);
}

double LevelMeasure::operator()(double s) const {
  double mu = 0.0;
  for (const Piece& p : pieces_) {
    if (s < p.a) {
      mu += p.weight;
    } else if (s >= p.c) {
      continue;
    } else if (s < p.b) {
      mu += p.weight * (1.0 - (s - p.a) * (s - p.a) / ((p.b - p.a) * (p.c - p.a)));
    } else {
      mu += p.weight * (p.c - s) * (p.c - s) / ((p.c - p.a) * (p.c - p.b));
    }
  }
  return mu;
}

double LevelMeasure::inverse(double v, bool strict) const {
  const auto below = [&](double s) { return strict ? (*this)(s) < v : (*this)(s) <= v; };
  if (below(0.0)) return 0.0;
  if (!below(max_)) return max_;
  double lo = 0.0, hi = max_;
  for (int it = 0; it < 80 && hi - lo > 1e-15 * max_; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double LevelMeasure::integral_product(const TriMesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& w) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    double uw = 0.0, su = 0.0, sw = 0.0;
    for (int i = 0; i < 3; ++i) {
      uw += u(tri[i]) * w(tri[i]);
      su += u(tri[i]);
      sw += w(tri[i]);
    }
    sum += weights_[t] / 12.0 * (uw + su * sw);
  }
  return sum;
}

namespace {

DistributionFn build_distribution(const Eigen::VectorXd& u, const AssembledSystem& sys, int levels) {
  DistributionFn d;
  d.measure = LevelMeasure(*sys.mesh, u);
  d.total_volume = d.measure.total();
  d.max_value = d.measure.max_value();
  for (int j = 0; j <= levels; ++j) {
    const double s = d.max_value * (levels - j) / levels;
    d.thresholds.push_back(s);
    d.measures.push_back(d.measure(s));
  }
  return d;
}

double volume_of(Curvature delta, double t) { return ball_volume(delta, 2, t); }

// Value of a piecewise-linear curve just right (or left) of x.
double eval(const VolumeCurve& c, double x, bool right) {
  const auto& v = c.v;
  const auto it = right ? std::upper_bound(v.begin(), v.end(), x) : std::lower_bound(v.begin(), v.end(), x);
  if (it == v.begin()) return c.s.front();
  if (it == v.end()) return c.s.back();
  const auto i = static_cast<std::size_t>(it - v.begin()) - 1;
  const double w = (x - v[i]) / (v[i + 1] - v[i]);
  return c.s[i] + w * (c.s[i + 1] - c.s[i]);
}

}  // namespace

DistributionFn distribution_function(const Eigen::VectorXd& u, const AssembledSystem& sys, int levels) {
  if (levels < 32) throw DomainError("distribution function needs at least 32 levels");
  return build_distribution(u, sys, levels);
}

RadialProfile decreasing_rearrangement(const DistributionFn& dist, Curvature delta, int samples) {
  if (!(dist.total_volume > 0.0) || !std::isfinite(dist.total_volume))
    throw DomainError("rearrangement needs a finite positive volume");
  RadialProfile p;
  p.delta = delta;
  p.volume = dist.total_volume;
  const double rstar = ball_radius_for_volume(delta, 2, dist.total_volume);
  for (int i = 0; i < samples; ++i) {
    const double t = rstar * i / (samples - 1);
    p.radii.push_back(t);
    p.values.push_back(dist.measure.inverse(i == samples - 1 ? dist.total_volume : volume_of(delta, t)));
  }
  return p;
}

RadialProfile increasing_rearrangement(const DistributionFn& dist, Curvature delta, double total_volume, int samples) {
  if (!(total_volume > 0.0) || !std::isfinite(total_volume))
    throw DomainError("increasing rearrangement needs a finite total volume");
  RadialProfile p;
  p.delta = delta;
  p.increasing = true;
  p.volume = total_volume;
  const double rstar = ball_radius_for_volume(delta, 2, total_volume);
  for (int i = 0; i < samples; ++i) {
    const double t = rstar * i / (samples - 1);
    const double v = i == samples - 1 ? total_volume : volume_of(delta, t);
    p.radii.push_back(t);
    p.values.push_back(dist.measure.inverse(std::max(0.0, total_volume - v)));
  }
  return p;
}

std::string profile_csv(const RadialProfile& p) {
  std::ostringstream os;
  os << "t,value\n";
  for (std::size_t i = 0; i < p.radii.size(); ++i) os << format_sig(p.radii[i]) << ',' << format_sig(p.values[i]) << '\n';
  return os.str();
}

EquimeasurabilityDefect equimeasurability(const DistributionFn& dist, const RadialProfile& p) {
  EquimeasurabilityDefect out;
  const std::size_t m = p.radii.size();
  std::vector<double> vol(m);
  for (std::size_t i = 0; i < m; ++i) vol[i] = i + 1 == m ? p.volume : volume_of(p.delta, p.radii[i]);
  for (std::size_t i = 0; i + 1 < m; ++i) out.cell = std::max(out.cell, vol[i + 1] - vol[i]);
  for (std::size_t j = 0; j < dist.thresholds.size(); ++j) {
    const double s = dist.thresholds[j];
    // Volume of {profile > s} read off the sample grid.
    double mu = 0.0;
    if (!p.increasing) {
      for (std::size_t i = 0; i < m; ++i)
        if (p.values[i] > s) mu = vol[i];
    } else {
      for (std::size_t i = m; i-- > 0;)
        if (p.values[i] > s) mu = p.volume - vol[i];
    }
    out.defect = std::max(out.defect, std::abs(mu - dist.measures[j]));
  }
  return out;
}

VolumeCurve volume_curve(const DistributionFn& dist) {
  const int levels = static_cast<int>(dist.thresholds.size()) - 1;
  std::vector<std::pair<double, double>> nodes;
  // Exact points of the graph at uniform values and at uniform volumes.
  for (std::size_t j = 0; j < dist.thresholds.size(); ++j) nodes.emplace_back(dist.measures[j], dist.thresholds[j]);
  for (int i = 0; i <= levels; ++i) {
    const double v = dist.total_volume * i / levels;
    nodes.emplace_back(v, dist.measure.inverse(v));
    if (i > 0) nodes.emplace_back(v, dist.measure.inverse(v, true));
  }
  nodes.emplace_back(dist.total_volume, 0.0);
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  });
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  VolumeCurve c;
  for (const auto& [v, s] : nodes) {
    c.v.push_back(v);
    c.s.push_back(s);
  }
  return c;
}

VolumeCurve mirrored(const VolumeCurve& c, double total_volume) {
  VolumeCurve m;
  for (std::size_t i = c.v.size(); i-- > 0;) {
    m.v.push_back(total_volume - c.v[i]);
    m.s.push_back(c.s[i]);
  }
  return m;
}

double curve_l2_squared(const VolumeCurve& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < c.v.size(); ++i) {
    const double a = c.s[i], b = c.s[i + 1];
    sum += (c.v[i + 1] - c.v[i]) * (a * a + a * b + b * b) / 3.0;
  }
  return sum;
}

double curve_product(const VolumeCurve& a, const VolumeCurve& b) {
  std::vector<double> x = a.v;
  x.insert(x.end(), b.v.begin(), b.v.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  const double lo = std::max(a.v.front(), b.v.front());
  const double hi = std::min(a.v.back(), b.v.back());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double x0 = std::max(x[i], lo), x1 = std::min(x[i + 1], hi);
    if (!(x1 > x0)) continue;
    const double a0 = eval(a, x0, true), a1 = eval(a, x1, false);
    const double b0 = eval(b, x0, true), b1 = eval(b, x1, false);
    sum += (x1 - x0) * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1) / 6.0;
  }
  return sum;
}

double curve_energy(const VolumeCurve& c, Curvature delta) {
  // In two dimensions the squared perimeter of a ball of volume v is
  // 4 pi v - delta v^2.
  const double d = to_int(delta);
  const auto F = [d](double v) { return 2.0 * M_PI * v * v - d * v * v * v / 3.0; };
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < c.v.size(); ++i) {
    const double dv = c.v[i + 1] - c.v[i];
    if (!(dv > 0.0)) continue;
    const double slope = (c.s[i + 1] - c.s[i]) / dv;
    e += slope * slope * (F(c.v[i + 1]) - F(c.v[i]));
  }
  return e;
}

VerificationReport check_hardy_littlewood(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                          const AssembledSystem& sys, int levels) {
  const double scale = std::max(f.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff());
  if (f.minCoeff() < -1e-12 * scale || g.minCoeff() < -1e-12 * scale)
    throw DomainError("Hardy-Littlewood check needs nonnegative functions");
  const double middle = f.dot(sys.M_full * g);

  const auto integrals = [&](int L) {
    const DistributionFn df = distribution_function(f, sys, L);
    const DistributionFn dg = distribution_function(g, sys, L);
    const VolumeCurve cf = volume_curve(df), cg = volume_curve(dg);
    return std::make_pair(curve_product(mirrored(cf, df.total_volume), cg), curve_product(cf, cg));
  };
  const auto [lower, upper] = integrals(levels);
  const auto [lower2, upper2] = integrals(std::max(32, levels / 2));
  const LevelMeasure lm(*sys.mesh, f);
  const double binning = std::abs(lower - lower2) + std::abs(upper - upper2);
  const double quadrature = std::abs(middle - lm.integral_product(*sys.mesh, f, g));
  const double tol = binning + quadrature + 1e-12 * std::max(std::abs(upper), 1e-300);

  VerificationReport r = VerificationReport::make("hardy_littlewood", lower, upper, tol);
  r.slack = std::min(middle - lower, upper - middle);
  r.settle();
  r.context["middle"] = middle;
  r.context["lower_slack"] = middle - lower;
  r.context["upper_slack"] = upper - middle;
  r.context["binning_error"] = binning;
  r.context["quadrature_error"] = quadrature;
  r.context["levels"] = levels;
  return r;
}

VerificationReport check_equimeasurability(const Eigen::VectorXd& f, const AssembledSystem& sys, int levels) {
  const DistributionFn d = distribution_function(f, sys, levels);
  const RadialProfile p = decreasing_rearrangement(d, sys.mesh->delta);
  const EquimeasurabilityDefect e = equimeasurability(d, p);
  VerificationReport r = VerificationReport::make("equimeasurability", e.defect, e.cell, 1e-12 * d.total_volume);
  r.context["volume"] = d.total_volume;
  r.context["levels"] = levels;
  r.context["samples"] = p.radii.size();
  return r;
}

VerificationReport check_l2_isometry(const Eigen::VectorXd& f, const AssembledSystem& sys, double rel_tol,
                                     int levels) {
  if (!(rel_tol > 0.0)) throw DomainError("relative tolerance must be positive");
  const double l2 = f.dot(sys.M_full * f);
  if (!(l2 > 0.0)) throw DomainError("L2 isometry needs a nonzero function");
  const double l2_star = curve_l2_squared(volume_curve(distribution_function(f, sys, levels)));
  VerificationReport r = VerificationReport::make("l2_isometry", std::abs(l2_star - l2) / l2, rel_tol, 1e-12);
  r.context["l2_fem"] = l2;
  r.context["l2_rearranged"] = l2_star;
  r.context["levels"] = levels;
  return r;
}

VerificationReport check_polya_szego(const Eigen::VectorXd& u, const AssembledSystem& sys, const ConvexBody& body,
                                     double mesh_rel_tol, int levels) {
  if (body.delta() != sys.mesh->delta) throw DomainError("body and mesh geometries differ");
  const double umax = u.cwiseAbs().maxCoeff();
  for (std::size_t v = 0; v < sys.mesh->vertex_count(); ++v)
    if (sys.mesh->boundary[v] && std::abs(u(static_cast<Eigen::Index>(v))) > 1e-12 * umax)
      throw DomainError("Polya-Szego check needs a function vanishing on the boundary");
  const Eigen::VectorXd ui = sys.restrict_to_interior(u);
  const double fem_energy = ui.dot(sys.A * ui);
  const double l2_fem = u.dot(sys.M_full * u);

  const DistributionFn d = distribution_function(u, sys, levels);
  const DistributionFn d2 = distribution_function(u, sys, std::max(32, levels / 2));
  const VolumeCurve c = volume_curve(d);
  const double radial = curve_energy(c, body.delta());
  const double radial2 = curve_energy(volume_curve(d2), body.delta());
  const double l2_star = curve_l2_squared(c);
  const double l2_frozen = d.measure.integral_product(*sys.mesh, u, u);
  const double quad = std::abs(l2_fem - l2_frozen) / l2_fem;
  const double binning = std::abs(radial - radial2);
  const double tol = binning + fem_energy * (quad + mesh_rel_tol) + 1e-12 * fem_energy;

  VerificationReport r = VerificationReport::make("polya_szego", radial, fem_energy, tol);
  std::ostringstream hash;
  hash << std::hex << body.hash();
  r.context["body_hash"] = hash.str();
  r.context["volume"] = d.total_volume;
  r.context["l2_fem"] = l2_fem;
  r.context["l2_rearranged"] = l2_star;
  r.context["binning_error"] = binning;
  r.context["quadrature_defect"] = quad;
  r.context["mesh_rel_tol"] = mesh_rel_tol;
  // Faber-Krahn chain: Rayleigh quotient of u, of u*, and the ball value.
  r.context["rayleigh_fem"] = fem_energy / l2_fem;
  r.context["rayleigh_radial"] = radial / l2_star;
  const bool volume_ok = body.delta() != Curvature::spherical || d.total_volume < 4.0 * M_PI;
  if (volume_ok) r.context["lambda1_star"] = lambda1_star(body.delta(), 2, d.total_volume);
  return r;
}

}  // namespace spacespec
