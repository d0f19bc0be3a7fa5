#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "spacespec/laplace2d.hpp"
#include "spacespec/report.hpp"

namespace spacespec {

// Weighted area of the superlevel sets {u > s} of a P1 function, exact for
// linear interpolation with the conformal weight frozen per triangle.
class LevelMeasure {
public:
  LevelMeasure() = default;
  LevelMeasure(const TriMesh& mesh, const Eigen::VectorXd& u);

  double operator()(double s) const;
  // Right inverse inf{s >= 0 : mu(s) <= v}; with strict, inf{s >= 0 : mu(s) < v},
  // its left limit at v.
  double inverse(double v, bool strict = false) const;
  double total() const { return total_; }
  double max_value() const { return max_; }
  // Weighted integral of u * w over the mesh with the same frozen weight.
  double integral_product(const TriMesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& w) const;

private:
  struct Piece {
    double a, b, c;  // sorted vertex values
    double weight;
  };
  std::vector<Piece> pieces_;
  std::vector<double> weights_;  // per triangle, in mesh order
  double total_ = 0.0;
  double max_ = 0.0;
};

struct DistributionFn {
  std::vector<double> thresholds;  // decreasing, from max u down to 0
  std::vector<double> measures;    // mu at each threshold
  double total_volume = 0.0;
  double max_value = 0.0;
  LevelMeasure measure;
};

DistributionFn distribution_function(const Eigen::VectorXd& u, const AssembledSystem& sys, int levels = 64);

struct RadialProfile {
  Curvature delta = Curvature::flat;
  int n = 2;
  bool increasing = false;
  double volume = 0.0;          // volume of the ball carrying the profile
  std::vector<double> radii;    // on [0, r*]
  std::vector<double> values;
};

RadialProfile decreasing_rearrangement(const DistributionFn& dist, Curvature delta, int samples = 129);
RadialProfile increasing_rearrangement(const DistributionFn& dist, Curvature delta, double total_volume,
                                       int samples = 129);

// CSV with header t,value.
std::string profile_csv(const RadialProfile& p);

// Largest gap between mu_f and the distribution of the profile at the levels
// of dist, and the volume of the widest radial cell for comparison.
struct EquimeasurabilityDefect {
  double defect = 0.0;
  double cell = 0.0;
};
EquimeasurabilityDefect equimeasurability(const DistributionFn& dist, const RadialProfile& p);

// Decreasing rearrangement as a piecewise-linear function of the volume
// coordinate v = Vol(B(t)).
struct VolumeCurve {
  std::vector<double> v;  // increasing, from 0 to the total volume
  std::vector<double> s;  // nonincreasing values
};
VolumeCurve volume_curve(const DistributionFn& dist);
VolumeCurve mirrored(const VolumeCurve& c, double total_volume);

double curve_l2_squared(const VolumeCurve& c);
double curve_product(const VolumeCurve& a, const VolumeCurve& b);
// Dirichlet energy of the radial function in the two-dimensional space form.
double curve_energy(const VolumeCurve& c, Curvature delta);

// Hardy-Littlewood: int f_* g^* <= int f g <= int f^* g^*. lhs and rhs of
// the report are the outer integrals; the middle is in the context.
VerificationReport check_hardy_littlewood(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                          const AssembledSystem& sys, int levels = 64);

// Equimeasurability of f and f*: largest level-wise gap between the two
// distribution functions against one radial cell of volume.
VerificationReport check_equimeasurability(const Eigen::VectorXd& f, const AssembledSystem& sys, int levels = 64);

// L2 isometry: relative gap between ||f||^2 (consistent mass) and ||f*||^2,
// allowed up to rel_tol.
VerificationReport check_l2_isometry(const Eigen::VectorXd& f, const AssembledSystem& sys, double rel_tol = 0.01,
                                     int levels = 64);

// Polya-Szego: radial energy of u* against the FEM energy of u, which must
// vanish on the boundary. mesh_rel_tol adds a relative allowance for the
// discretization error of the FEM energy.
VerificationReport check_polya_szego(const Eigen::VectorXd& u, const AssembledSystem& sys, const ConvexBody& body,
                                     double mesh_rel_tol = 0.0, int levels = 64);

}  // namespace spacespec
