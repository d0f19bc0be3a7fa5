#include "spacespec/ballspec.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"

namespace spacespec {

namespace {

constexpr double pi = std::numbers::pi;
// Hyperbolic radii beyond this only move lambda_1 by rounding noise.
constexpr double max_hyperbolic_radius = 200.0;

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

// cot_delta = c/s, inv_s2 = 1/s^2, written to avoid overflow for large t.
struct RadialOde {
  Curvature delta;
  int n;
  double mu;
  double lambda;

  void operator()(const State& y, State& dy, double t) const {
    double cot, inv_s2;
    switch (delta) {
      case Curvature::hyperbolic: {
        cot = 1.0 / std::tanh(t);
        const double s = std::sinh(t);
        inv_s2 = std::isfinite(s) ? 1.0 / (s * s) : 0.0;
        break;
      }
      case Curvature::spherical: {
        cot = 1.0 / std::tan(t);
        const double s = std::sin(t);
        inv_s2 = 1.0 / (s * s);
        break;
      }
      default:
        cot = 1.0 / t;
        inv_s2 = 1.0 / (t * t);
    }
    dy[0] = y[1];
    dy[1] = -(n - 1) * cot * y[1] - (lambda - mu * inv_s2) * y[0];
  }
};

struct ShotResult {
  int zeros = 0;
  double end_value = 0.0;
};

double start_time(const BallSpec& spec) { return spec.r * 1e-3; }

// Frobenius start u = t^ell (1 + a t^2), rescaled by t0^-ell.
State start_state(const BallSpec& spec, int ell, double lambda) {
  const double t0 = start_time(spec);
  const double mu = ell * (ell + spec.n - 2.0);
  const double a = (to_int(spec.delta) * ((spec.n - 1.0) * ell + mu) / 3.0 - lambda) / (4.0 * ell + 2.0 * spec.n);
  return State{1.0 + a * t0 * t0, ell / t0 + (ell + 2.0) * a * t0};
}

template <class Observer>
void integrate(const BallSpec& spec, int ell, double lambda, const ShootingOptions& opt, State& y,
               Observer obs) {
  const RadialOde ode{spec.delta, spec.n, ell * (ell + spec.n - 2.0), lambda};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opt.ode_rel_tol * 1e-3, opt.ode_rel_tol);
  const double t0 = start_time(spec);
  odeint::integrate_adaptive(stepper, ode, y, t0, spec.r, (spec.r - t0) * 1e-3, obs);
}

ShotResult shoot(const BallSpec& spec, int ell, double lambda, const ShootingOptions& opt) {
  State y = start_state(spec, ell, lambda);
  ShotResult res;
  double prev = y[0];
  integrate(spec, ell, lambda, opt, y, [&](const State& s, double) {
    if ((prev > 0.0 && s[0] <= 0.0) || (prev < 0.0 && s[0] >= 0.0)) ++res.zeros;
    if (s[0] != 0.0) prev = s[0];
  });
  res.end_value = y[0];
  return res;
}

void check_spec(const BallSpec& spec) {
  if (spec.n < 2) throw DomainError("dimension must be at least 2");
  if (!(spec.r > 0.0) || !std::isfinite(spec.r)) throw DomainError("ball radius must be positive and finite");
  if (spec.delta == Curvature::spherical && spec.r >= pi) throw DomainError("spherical ball radius must be below pi");
}

}  // namespace

BallSpec BallSpec::make(Curvature delta, int n, double r) {
  BallSpec s{delta, n, r};
  check_spec(s);
  return s;
}

double spectral_floor(Curvature delta, int n) {
  return delta == Curvature::hyperbolic ? 0.25 * (n - 1.0) * (n - 1.0) : 0.0;
}

int shooting_zero_count(const BallSpec& spec, int ell, double lambda, const ShootingOptions& opt) {
  check_spec(spec);
  return shoot(spec, ell, lambda, opt).zeros;
}

RadialEigen radial_eigenvalue(const BallSpec& spec, int ell, int k, const ShootingOptions& opt) {
  check_spec(spec);
  if (ell < 0 || k < 1) throw DomainError("need ell >= 0 and k >= 1");
  auto count = [&](double lam) { return shoot(spec, ell, lam, opt).zeros; };

  // Below the floor no solution oscillates, so the floor is a safe lower end.
  double lo = spectral_floor(spec.delta, spec.n);
  double hi = lo + std::pow((k + 0.5 * ell) * pi / spec.r, 2.0);
  int n_lo = count(lo), n_hi = count(hi);
  int guard = 0;
  while (n_hi < k) {
    lo = hi;
    n_lo = n_hi;
    hi *= 2.0;
    n_hi = count(hi);
    if (++guard > 200) throw SolverError("could not bracket the radial eigenvalue");
  }
  // Narrow until exactly one eigenvalue lies in (lo, hi].
  int steps = 0;
  while (!(n_lo == k - 1 && n_hi == k)) {
    const double mid = 0.5 * (lo + hi);
    const int n_mid = count(mid);
    if (n_mid >= k) {
      hi = mid;
      n_hi = n_mid;
    } else {
      lo = mid;
      n_lo = n_mid;
    }
    if (++steps > opt.max_bisections) throw SolverError("radial eigenvalue bisection did not converge");
  }
  auto f = [&](double lam) { return shoot(spec, ell, lam, opt).end_value; };
  const double f_lo = f(lo), f_hi = f(hi);
  double lambda;
  if (f_hi == 0.0) {
    lambda = hi;
  } else if (f_lo == 0.0 || (f_lo > 0.0) == (f_hi > 0.0)) {
    // Sign structure lost to rounding; fall back on the zero count alone.
    while ((hi - lo) > opt.lambda_rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      (count(mid) >= k ? hi : lo) = mid;
      if (++steps > 10 * opt.max_bisections) throw SolverError("radial eigenvalue bisection did not converge");
    }
    lambda = 0.5 * (lo + hi);
  } else {
    std::uintmax_t iters = static_cast<std::uintmax_t>(opt.max_bisections);
    const double rel = opt.lambda_rel_tol;
    auto tol = [rel](double a, double b) { return std::abs(b - a) <= rel * std::min(std::abs(a), std::abs(b)); };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
    if (iters >= static_cast<std::uintmax_t>(opt.max_bisections))
      throw SolverError("radial eigenvalue root finding did not converge");
    lambda = 0.5 * (a + b);
  }

  RadialEigen out;
  out.spec = spec;
  out.ell = ell;
  out.k = k;
  out.lambda = lambda;
  const int ns = std::max(2, opt.profile_samples);
  const double t0 = start_time(spec);
  std::vector<double> times;
  times.push_back(t0);
  for (int i = 1; i < ns; ++i) times.push_back(spec.r * i / (ns - 1));
  State y = start_state(spec, ell, lambda);
  const RadialOde ode{spec.delta, spec.n, ell * (ell + spec.n - 2.0), lambda};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opt.ode_rel_tol * 1e-3, opt.ode_rel_tol);
  std::vector<double> values;
  odeint::integrate_times(stepper, ode, y, times.begin(), times.end(), (spec.r - t0) * 1e-3,
                          [&](const State& s, double) { values.push_back(s[0]); });
  out.t.push_back(0.0);
  out.u.push_back(ell == 0 ? 1.0 : 0.0);
  for (int i = 1; i < ns; ++i) {
    out.t.push_back(times[static_cast<std::size_t>(i)]);
    out.u.push_back(values[static_cast<std::size_t>(i)]);
  }
  out.u.back() = 0.0;
  double umax = 0.0;
  for (double v : out.u) umax = std::max(umax, std::abs(v));
  const double sign = out.u[1] < 0.0 ? -1.0 : 1.0;
  for (double& v : out.u) v *= sign / umax;
  return out;
}

double lambda1_ball(const BallSpec& spec, const ShootingOptions& opt) {
  return radial_eigenvalue(spec, 0, 1, opt).lambda;
}

SecondMode lambda2_ball_mode(const BallSpec& spec, const ShootingOptions& opt) {
  const double l11 = radial_eigenvalue(spec, 1, 1, opt).lambda;
  const double l02 = radial_eigenvalue(spec, 0, 2, opt).lambda;
  return l11 <= l02 ? SecondMode{l11, 1, 1} : SecondMode{l02, 0, 2};
}

double lambda2_ball(const BallSpec& spec, const ShootingOptions& opt) {
  return lambda2_ball_mode(spec, opt).lambda;
}

double lambda1_star(Curvature delta, int n, double volume, const ShootingOptions& opt) {
  const double r = ball_radius_for_volume(delta, n, volume);
  return lambda1_ball(BallSpec::make(delta, n, r), opt);
}

double radius_from_lambda1(Curvature delta, int n, double lambda, const ShootingOptions& opt) {
  const double floor = spectral_floor(delta, n);
  if (!(lambda > floor))
    throw DomainError(delta == Curvature::hyperbolic
                          ? "lambda is below spectral infimum (n-1)^2/4 of hyperbolic space"
                          : "lambda must be positive");
  auto f = [&](double r) { return std::log(lambda1_ball(BallSpec{delta, n, r}, opt) / lambda); };
  double r_max = delta == Curvature::spherical ? pi * (1.0 - 1e-6)
                 : delta == Curvature::hyperbolic ? max_hyperbolic_radius
                                                  : std::numeric_limits<double>::infinity();
  // Euclidean comparison guess, corrected by doubling or halving.
  double guess = std::min(2.404825557695773 / std::sqrt(lambda - floor), 0.5 * r_max);
  double lo = guess, hi = guess;
  double f_lo = f(lo), f_hi = f_lo;
  while (f_lo < 0.0) {
    lo *= 0.5;
    f_lo = f(lo);
  }
  while (f_hi > 0.0) {
    if (hi >= r_max) throw DomainError("lambda is too close to the spectral infimum to invert");
    hi = std::min(2.0 * hi, r_max);
    f_hi = f(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t iters = static_cast<std::uintmax_t>(opt.max_bisections);
  const double rel = opt.lambda_rel_tol;
  auto tol = [rel](double a, double b) { return std::abs(b - a) <= rel * std::min(a, b); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
  return 0.5 * (a + b);
}

double lambda2_star(Curvature delta, int n, double lambda, const ShootingOptions& opt) {
  const double r = radius_from_lambda1(delta, n, lambda, opt);
  return lambda2_ball(BallSpec::make(delta, n, r), opt);
}

RatioCurve ratio_curve(Curvature delta, int n, const std::vector<double>& r_grid, const ShootingOptions& opt) {
  RatioCurve c;
  c.delta = delta;
  c.n = n;
  for (double r : r_grid) {
    const BallSpec spec = BallSpec::make(delta, n, r);
    RatioRow row;
    row.r = r;
    row.lambda1 = lambda1_ball(spec, opt);
    row.lambda2 = lambda2_ball(spec, opt);
    row.ratio = row.lambda2 / row.lambda1;
    c.rows.push_back(row);
  }
  c.strictly_increasing = c.strictly_decreasing = c.lambda1_decreasing = c.rows.size() >= 2;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    if (!(c.rows[i].ratio > c.rows[i - 1].ratio)) c.strictly_increasing = false;
    if (!(c.rows[i].ratio < c.rows[i - 1].ratio)) c.strictly_decreasing = false;
    if (!(c.rows[i].lambda1 < c.rows[i - 1].lambda1)) c.lambda1_decreasing = false;
  }
  return c;
}

std::string ratio_curve_csv(const RatioCurve& curve) {
  std::ostringstream os;
  os << "r,lambda1,lambda2,ratio\n";
  for (const auto& row : curve.rows)
    os << format_sig(row.r) << ',' << format_sig(row.lambda1) << ',' << format_sig(row.lambda2) << ','
       << format_sig(row.ratio) << '\n';
  return os.str();
}

}  // namespace spacespec
