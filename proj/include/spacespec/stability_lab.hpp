#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spacespec/convexbody.hpp"
#include "spacespec/laplace2d.hpp"
#include "spacespec/report.hpp"

namespace spacespec {

// A body with its convergence study, shared by the verifiers.
struct SolvedBody {
  ConvexBody body;
  StudyResult study;
  double volume = 0.0;  // exact polygon area

  static SolvedBody solve(const ConvexBody& body, const std::vector<double>& h_list = {});

  const EigenResult& eigen() const { return study.finest; }
  const AssembledSystem& system() const { return study.system; }
  double lambda(std::size_t k) const { return study.finest.lambda(k); }
  double tolerance(std::size_t k) const { return study.finest.tolerance(k); }
  // Body hash, volume, mesh levels and extrapolation diagnostics.
  nlohmann::ordered_json context() const;
};

using RadialWeight = std::function<double(double)>;

struct CenterResult {
  ModelPoint point;
  double residual = 0.0;   // metric norm of the balance field at point
  double threshold = 0.0;  // 1e-8 * sup g * total weight
  int iterations = 0;
};

// Zero of F(x) = sum_i w_i g(d(x, y_i)) log_x(y_i) / d(x, y_i) for point
// masses w_i at y_i, all in one conformal chart. Throws SolverError with the
// final residual when the root finder stalls.
CenterResult center_of_mass(const std::vector<ModelPoint>& points, const std::vector<double>& weights,
                            const RadialWeight& g, std::optional<ModelPoint> start = std::nullopt);
// Mesh version with weights vertex_mass * u^2.
CenterResult center_of_mass(const AssembledSystem& sys, const Eigen::VectorXd& u, const RadialWeight& g);

// g(s) = min(s / R, 1).
RadialWeight ramp_weight(double R);

VerificationReport verify_faber_krahn(const SolvedBody& sb);
// Rejects hyperbolic bodies with DomainError.
VerificationReport verify_ppw(const SolvedBody& sb);
VerificationReport verify_gen_ppw(const SolvedBody& sb);
VerificationReport verify_gap_bound(const SolvedBody& sb, double R);
// Hyperbolic only. The report covers the first estimate; the second one is
// in the context and, when R is below its threshold, flagged as skipped.
VerificationReport verify_concentration(const SolvedBody& sb, double R);
VerificationReport verify_inradius(const SolvedBody& sb);
VerificationReport verify_li_yau(const SolvedBody& sb);
// Both bodies must share the base point and lie in B(base, R).
VerificationReport verify_continuity(const SolvedBody& a, const SolvedBody& b, double R, int k, int grid = 256);
VerificationReport verify_splitting(const SolvedBody& sb, const ModelPoint& y0, double R, double alpha, double gamma);

// Omega cut by the ball polygon B(center, R), in the straight chart. Empty
// when the two do not overlap.
std::optional<ConvexBody> intersect_ball(const ConvexBody& body, const ModelPoint& center, double R, int m = 128);

struct Lemma52Constants {
  double r = 0.0;
  double C = 0.0;
  double R = 0.0;
  double lambda_v0 = 0.0;       // lambda_1^*(V0)
  double lambda_reduced = 0.0;  // lambda_1^*(V0 - Vol B(r/2))
  double half_ball_volume = 0.0;
};
Lemma52Constants lemma52_constants(double V0, int n = 2, Curvature delta = Curvature::hyperbolic);

struct RectangleTrendRow {
  double a = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double diameter_quantity = 0.0;  // (lambda2 - lambda1) diam^(2/3) / (1 + lambda1)
};
// Checks the convexity chain for the a x b rectangle (a >= 4, a >= b) with
// analytic spectra.
VerificationReport rectangle_chain(double a, double b);
std::vector<RectangleTrendRow> rectangle_trend(const std::vector<double>& a_grid, double b);
std::string rectangle_trend_csv(const std::vector<RectangleTrendRow>& rows);

struct SweepFamily {
  double radius = 1.0;
  PerturbationMode mode = PerturbationMode::ellipse;
  int m = 128;
};

struct SweepPoint {
  double eps = 0.0;
  double d_hausdorff = 0.0;
  double d_metric = 0.0;
  double lambda1_excess = 0.0;
  double lambda2_deficit = 0.0;
  double ppw_deficit = 0.0;
  // Numerical tolerances of the three columns.
  double tol_excess = 0.0;
  double tol_lambda2 = 0.0;
  double tol_ppw = 0.0;
};

struct SweepResult {
  Curvature delta = Curvature::flat;
  std::vector<SweepPoint> points;
  // Bounds on the columns of the unperturbed polygon relative to the ball.
  double polygon_excess = 0.0;
  double polygon_lambda2 = 0.0;
  double polygon_ppw = 0.0;
  bool vanish_at_zero = false;
  bool monotone = false;
};

SweepResult stability_sweep(Curvature delta, const SweepFamily& family, const std::vector<double>& eps_grid);
// CSV with header eps,d_hausdorff,d_metric,lambda1_excess,lambda2_deficit,ppw_deficit.
std::string sweep_csv(const SweepResult& result);

// Seeded random body of the verification suite.
ConvexBody suite_body(Curvature delta, std::uint64_t seed);

}  // namespace spacespec
