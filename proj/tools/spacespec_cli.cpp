// spacespec: ball spectra, body eigenvalues, inequality verifiers, stability
// sweeps and rearrangement checks from the command line.
//
// Exit status: 0 when every requested check passes, 1 when one fails or a
// solver gives up, 2 on bad flags, configuration or input files.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spacespec/ballspec.hpp"
#include "spacespec/body_io.hpp"
#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"
#include "spacespec/rearrange.hpp"
#include "spacespec/rng.hpp"
#include "spacespec/stability_lab.hpp"

namespace fs = std::filesystem;
using namespace spacespec;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  int delta = 0;
  int n = 2;
  std::string body;
  std::string body2;
  std::string h;
  std::string name = "all";
  std::string eps = "0:0.3:0.05";
  std::string r = "0.25:6:0.25";
  std::uint64_t seed = 0;
  int random = 0;
  std::string out;
  std::string format;
  double R = 0.0;  // 0 picks a default per verifier
  int k = 1;
  double alpha = 0.5;
  double gamma = 0.5;
  std::string y0;
  double dilate = 0.9;
  std::string a = "4,8,16,32";
  double b = 1.0;
  std::string family = "ellipse";
  double radius = 1.0;
  int m = 128;
  int levels = 64;
  std::string profile;
  std::string trend;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

// start:stop:step, both ends included up to rounding.
std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, flag).front());
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw ConfigError(flag + ": expected start:stop:step with step > 0 and stop >= start");
  const int count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

std::vector<double> h_list(const RunConfig& cfg) {
  if (cfg.h.empty()) return {};
  std::vector<double> h = parse_list(cfg.h, "--h");
  if (h.size() < 3) throw ConfigError("--h: need at least 3 mesh sizes");
  for (std::size_t i = 1; i < h.size(); ++i)
    if (!(h[i] < h[i - 1])) throw ConfigError("--h: mesh sizes must be strictly decreasing");
  return h;
}

struct NamedBody {
  std::string source;
  ConvexBody body;
};

std::vector<NamedBody> load_bodies(const RunConfig& cfg) {
  std::vector<NamedBody> out;
  if (cfg.body.empty()) {
    if (cfg.random <= 0) throw ConfigError("--body: no body given (or use --random N)");
    const Curvature delta = curvature_from_int(cfg.delta);
    for (int i = 0; i < cfg.random; ++i) {
      const std::uint64_t s = derive_seed(cfg.seed, "cli-body", static_cast<std::uint64_t>(i));
      out.push_back({"random:" + std::to_string(i), suite_body(delta, s)});
    }
    return out;
  }
  std::vector<std::string> paths;
  std::stringstream ss(cfg.body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (fs::is_directory(item)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(item))
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.push_back(item);
    }
  }
  if (paths.empty()) throw ConfigError("--body: no body files found");
  for (const auto& p : paths) out.push_back({p, read_body(p)});
  return out;
}

ModelPoint y0_of(const RunConfig& cfg, const ConvexBody& body) {
  if (cfg.y0.empty()) return body.base();
  const std::vector<double> v = parse_list(cfg.y0, "--y0");
  if (v.size() != 2) throw ConfigError("--y0: expected x,y");
  return ModelPoint::make(body.chart(), Vec2(v[0], v[1]));
}

const std::vector<std::string> body_verifiers = {"faber_krahn", "ppw",       "gen_ppw",    "gap_bound",  "concentration",
                                                 "inradius",    "li_yau",    "continuity", "splitting"};

std::vector<VerificationReport> verify_body(const RunConfig& cfg, const NamedBody& nb) {
  const bool all = cfg.name == "all";
  const Curvature delta = nb.body.delta();
  const SolvedBody sb = SolvedBody::solve(nb.body, h_list(cfg));
  std::vector<VerificationReport> out;
  auto want = [&](const std::string& n) { return all || cfg.name == n; };

  if (want("faber_krahn")) out.push_back(verify_faber_krahn(sb));
  if (want("ppw") && (!all || delta != Curvature::hyperbolic)) out.push_back(verify_ppw(sb));
  if (want("gen_ppw")) out.push_back(verify_gen_ppw(sb));
  if (want("gap_bound")) out.push_back(verify_gap_bound(sb, cfg.R > 0 ? cfg.R : inradius(nb.body).radius));
  if (want("concentration") && (!all || delta == Curvature::hyperbolic)) {
    // Default radius sits above the threshold of the second estimate.
    const double R = cfg.R > 0 ? cfg.R : 2.5 / std::sqrt(sb.lambda(1) - sb.lambda(0));
    out.push_back(verify_concentration(sb, R));
  }
  if (want("inradius")) out.push_back(verify_inradius(sb));
  if (want("li_yau")) out.push_back(verify_li_yau(sb));
  if (want("continuity")) {
    const SolvedBody other = cfg.body2.empty() ? SolvedBody::solve(dilate_body(nb.body, cfg.dilate), h_list(cfg))
                                               : SolvedBody::solve(read_body(cfg.body2), h_list(cfg));
    const double R = cfg.R > 0 ? cfg.R : std::max(outer_radius(sb.body), outer_radius(other.body));
    out.push_back(verify_continuity(sb, other, R, cfg.k));
  }
  if (want("splitting")) {
    const double R = cfg.R > 0 ? cfg.R : std::max(1.0, outer_radius(nb.body));
    out.push_back(verify_splitting(sb, y0_of(cfg, nb.body), R, cfg.alpha, cfg.gamma));
  }
  for (auto& r : out) r.context["source"] = nb.source;
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("--out: cannot write " + cfg.out);
  f << text;
}

void write_side(const std::string& path, const std::string& text, const std::string& flag) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(flag + ": cannot write " + path);
  f << text;
}

int emit_reports(const RunConfig& cfg, const std::vector<VerificationReport>& reports) {
  emit(cfg, cfg.format == "csv" ? reports_to_csv(reports) : reports_to_json(reports));
  for (const auto& r : reports)
    if (!r.pass) std::cerr << "FAIL " << r.name << " slack " << r.slack << " tolerance " << r.tolerance << "\n";
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
}

int run_ball(const RunConfig& cfg) {
  const Curvature delta = curvature_from_int(cfg.delta);
  const RatioCurve c = ratio_curve(delta, cfg.n, parse_range(cfg.r, "--r"));
  if (cfg.format == "csv") {
    emit(cfg, ratio_curve_csv(c));
    return 0;
  }
  json j;
  j["delta"] = cfg.delta;
  j["n"] = cfg.n;
  j["strictly_increasing"] = c.strictly_increasing;
  j["strictly_decreasing"] = c.strictly_decreasing;
  j["lambda1_decreasing"] = c.lambda1_decreasing;
  j["rows"] = json::array();
  for (const auto& row : c.rows)
    j["rows"].push_back(
        {{"r", row.r}, {"lambda1", row.lambda1}, {"lambda2", row.lambda2}, {"gap", row.lambda2 - row.lambda1},
         {"ratio", row.ratio}});
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int run_solve(const RunConfig& cfg) {
  const auto bodies = load_bodies(cfg);
  if (bodies.size() != 1) throw ConfigError("--body: solve takes exactly one body");
  const SolvedBody sb = SolvedBody::solve(bodies.front().body, h_list(cfg));
  if (cfg.format == "csv") {
    emit(cfg, eigen_csv(sb.eigen()));
    return 0;
  }
  json j = sb.context();
  j["source"] = bodies.front().source;
  j["raw_lambdas"] = sb.eigen().lambdas;
  j["residuals"] = sb.eigen().residuals;
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int run_verify(const RunConfig& cfg) {
  std::vector<VerificationReport> reports;
  if (cfg.name == "rectangle_chain") {
    const std::vector<double> a = parse_list(cfg.a, "--a");
    for (double x : a) reports.push_back(rectangle_chain(x, cfg.b));
    if (!cfg.trend.empty()) write_side(cfg.trend, rectangle_trend_csv(rectangle_trend(a, cfg.b)), "--trend");
    return emit_reports(cfg, reports);
  }
  if (cfg.name != "all" && std::find(body_verifiers.begin(), body_verifiers.end(), cfg.name) == body_verifiers.end())
    throw ConfigError("--name: unknown verifier '" + cfg.name + "'");
  for (const auto& nb : load_bodies(cfg)) {
    auto r = verify_body(cfg, nb);
    reports.insert(reports.end(), r.begin(), r.end());
  }
  return emit_reports(cfg, reports);
}

int run_sweep(const RunConfig& cfg) {
  SweepFamily fam;
  fam.radius = cfg.radius;
  fam.m = cfg.m;
  if (cfg.family == "ellipse")
    fam.mode = PerturbationMode::ellipse;
  else if (cfg.family == "one_bump")
    fam.mode = PerturbationMode::one_bump;
  else
    throw ConfigError("--family: expected ellipse or one_bump");
  const Curvature delta = curvature_from_int(cfg.delta);
  const SweepResult s = stability_sweep(delta, fam, parse_range(cfg.eps, "--eps"));
  if (cfg.format == "csv") {
    emit(cfg, sweep_csv(s));
  } else {
    json j;
    j["delta"] = cfg.delta;
    j["family"] = cfg.family;
    j["radius"] = cfg.radius;
    j["vanish_at_zero"] = s.vanish_at_zero;
    j["monotone"] = s.monotone;
    j["polygon_excess"] = s.polygon_excess;
    j["polygon_lambda2"] = s.polygon_lambda2;
    j["polygon_ppw"] = s.polygon_ppw;
    j["points"] = json::array();
    for (const auto& p : s.points)
      j["points"].push_back({{"eps", p.eps},
                             {"d_hausdorff", p.d_hausdorff},
                             {"d_metric", p.d_metric},
                             {"lambda1_excess", p.lambda1_excess},
                             {"lambda2_deficit", p.lambda2_deficit},
                             {"ppw_deficit", p.ppw_deficit},
                             {"tol_excess", p.tol_excess},
                             {"tol_lambda2", p.tol_lambda2},
                             {"tol_ppw", p.tol_ppw}});
    emit(cfg, j.dump(2) + "\n");
  }
  const bool ok = s.vanish_at_zero && s.monotone;
  if (!ok) std::cerr << "FAIL sweep: vanish_at_zero " << s.vanish_at_zero << " monotone " << s.monotone << "\n";
  return ok ? 0 : 1;
}

int run_rearrange(const RunConfig& cfg) {
  std::vector<VerificationReport> reports;
  for (const auto& nb : load_bodies(cfg)) {
    const SolvedBody sb = SolvedBody::solve(nb.body, h_list(cfg));
    const AssembledSystem& sys = sb.system();
    const Eigen::VectorXd& u1 = sb.eigen().vectors[0];
    const Eigen::VectorXd g = sb.eigen().vectors[1].cwiseAbs();
    std::vector<VerificationReport> r{
        check_equimeasurability(u1, sys, cfg.levels), check_l2_isometry(u1, sys, 0.01, cfg.levels),
        check_hardy_littlewood(u1, g, sys, cfg.levels),
        check_polya_szego(u1, sys, nb.body, sb.tolerance(0) / sb.lambda(0), cfg.levels)};
    for (auto& x : r) x.context["source"] = nb.source;
    reports.insert(reports.end(), r.begin(), r.end());
    if (!cfg.profile.empty()) {
      const RadialProfile p =
          decreasing_rearrangement(distribution_function(u1, sys, cfg.levels), nb.body.delta());
      write_side(cfg.profile, profile_csv(p), "--profile");
    }
  }
  return emit_reports(cfg, reports);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Spectral inequalities on convex bodies in space forms"};
  // --h is the mesh-size list, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");
  app.set_config("--config", "", "file of key=value defaults; flags override");
  app.require_subcommand(1);
  app.add_option("--delta", cfg.delta, "curvature: -1, 0 or 1");
  app.add_option("--n", cfg.n, "dimension for ball spectra");
  app.add_option("--body", cfg.body, "body file, directory of body files, or comma list");
  app.add_option("--body2", cfg.body2, "second body for continuity");
  app.add_option("--h", cfg.h, "comma list of decreasing mesh sizes");
  app.add_option("--name", cfg.name, "verifier name or all");
  app.add_option("--eps", cfg.eps, "perturbation grid start:stop:step");
  app.add_option("--r", cfg.r, "radius grid start:stop:step");
  app.add_option("--seed", cfg.seed, "seed for random bodies");
  app.add_option("--random", cfg.random, "number of seeded random bodies when --body is absent");
  app.add_option("--out", cfg.out, "output path, default standard output");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--R", cfg.R, "radius parameter of gap, concentration, continuity and splitting");
  app.add_option("--k", cfg.k, "eigenvalue index for continuity");
  app.add_option("--alpha", cfg.alpha, "splitting exponent");
  app.add_option("--gamma", cfg.gamma, "splitting ratio");
  app.add_option("--y0", cfg.y0, "splitting center x,y in the body chart");
  app.add_option("--dilate", cfg.dilate, "dilation factor for continuity without --body2");
  app.add_option("--a", cfg.a, "rectangle long sides, comma list");
  app.add_option("--b", cfg.b, "rectangle short side");
  app.add_option("--family", cfg.family, "sweep family: ellipse or one_bump");
  app.add_option("--radius", cfg.radius, "sweep ball radius");
  app.add_option("--m", cfg.m, "polygon vertices of the sweep family");
  app.add_option("--levels", cfg.levels, "distribution levels for rearrangement");
  app.add_option("--profile", cfg.profile, "write the decreasing rearrangement profile CSV here");
  app.add_option("--trend", cfg.trend, "write the rectangle trend CSV here");

  auto* ball = app.add_subcommand("ball", "ratio and gap curves of geodesic balls")->fallthrough();
  auto* solve = app.add_subcommand("solve", "eigenvalues of a body with a convergence study")->fallthrough();
  auto* verify = app.add_subcommand("verify", "run a named verifier or all")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "stability sweep over a perturbed-ball family")->fallthrough();
  auto* rearr = app.add_subcommand("rearrange", "rearrangement checks on the ground state")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const bool tabular = ball->parsed() || sweep->parsed();
    if (cfg.format.empty()) cfg.format = tabular ? "csv" : "json";
    if (ball->parsed()) return run_ball(cfg);
    if (solve->parsed()) return run_solve(cfg);
    if (verify->parsed()) return run_verify(cfg);
    if (sweep->parsed()) return run_sweep(cfg);
    if (rearr->parsed()) return run_rearrange(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ChartError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
