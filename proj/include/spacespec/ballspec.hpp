#pragma once

#include <string>
#include <vector>

#include "spacespec/spaceform.hpp"

namespace spacespec {

struct BallSpec {
  Curvature delta = Curvature::flat;
  int n = 2;
  double r = 1.0;

  static BallSpec make(Curvature delta, int n, double r);
};

struct ShootingOptions {
  double lambda_rel_tol = 1e-9;
  double ode_rel_tol = 1e-10;
  int max_bisections = 200;
  int profile_samples = 201;
};

struct RadialEigen {
  BallSpec spec;
  int ell = 0;
  int k = 1;
  double lambda = 0.0;
  std::vector<double> t;  // profile abscissae on [0, r]
  std::vector<double> u;  // normalized so that max |u| = 1 and u > 0 near 0
};

// k-th Dirichlet eigenvalue of the separated radial equation
//   u'' + (n-1) (c/s) u' + (lambda - ell (ell + n - 2) / s^2) u = 0.
RadialEigen radial_eigenvalue(const BallSpec& spec, int ell, int k, const ShootingOptions& opt = {});

// Number of zeros of the shooting solution on (0, r] for a trial lambda.
int shooting_zero_count(const BallSpec& spec, int ell, double lambda, const ShootingOptions& opt = {});

// Infimum of the spectrum of the whole space: (n-1)^2/4 for delta = -1, else 0.
double spectral_floor(Curvature delta, int n);

struct SecondMode {
  double lambda = 0.0;
  int ell = 1;
  int k = 1;
};

double lambda1_ball(const BallSpec& spec, const ShootingOptions& opt = {});
double lambda2_ball(const BallSpec& spec, const ShootingOptions& opt = {});
// Which of (ell=1, k=1) and (ell=0, k=2) realizes the second eigenvalue.
SecondMode lambda2_ball_mode(const BallSpec& spec, const ShootingOptions& opt = {});

double lambda1_star(Curvature delta, int n, double volume, const ShootingOptions& opt = {});
double radius_from_lambda1(Curvature delta, int n, double lambda, const ShootingOptions& opt = {});
double lambda2_star(Curvature delta, int n, double lambda, const ShootingOptions& opt = {});

struct RatioRow {
  double r = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double ratio = 0.0;
};

struct RatioCurve {
  Curvature delta = Curvature::flat;
  int n = 2;
  std::vector<RatioRow> rows;
  bool strictly_increasing = false;
  bool strictly_decreasing = false;
  bool lambda1_decreasing = false;
};

RatioCurve ratio_curve(Curvature delta, int n, const std::vector<double>& r_grid,
                       const ShootingOptions& opt = {});
// Header r,lambda1,lambda2,ratio; 12 significant digits.
std::string ratio_curve_csv(const RatioCurve& curve);

}  // namespace spacespec
