// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line with the measured numbers. Exit code 0 when every selected
// criterion passes.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "minarea/calibration.hpp"
#include "minarea/fuzz.hpp"
#include "minarea/minimize.hpp"
#include "minarea/rng.hpp"
#include "minarea/surfaces.hpp"
#include "minarea/trimesh.hpp"
#include "minarea/verifier.hpp"

#ifndef MINAREA_BIN_PATH
#define MINAREA_BIN_PATH ""
#endif

using namespace minarea;

namespace {

bool g_all_pass = true;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%d] %-24s %s  (%s)\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) g_all_pass = false;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// --- criterion 1: pointwise inequality + finite-difference consistency ----

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  FuzzConfig config;
  config.samples = 100000;
  config.seed = 20240809;
  const FuzzReport rep = run_field_fuzz(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = rep.min_deficit >= -1e-10 && rep.fd_max_rel_err <= 1e-6 &&
                    seconds < 30.0;
  report(1, "pointwise inequality", pass,
         fmt("1e5 samples, min deficit %.3e, fd rel err %.3e, %.1fs", rep.min_deficit,
             rep.fd_max_rel_err, seconds));
}

// --- criterion 2: the field vanishes on the unit sphere -------------------

void criterion_2() {
  Rng rng(90210, 21);
  double worst = 0;
  for (int k : {2, 3, 4, 5}) {
    for (int i = 0; i < 2500; ++i) {
      const int n = k + static_cast<int>(rng.integer(4));
      const Eigen::VectorXd y = rng.ball_point(n, 0.95);
      const CalibrationField field(y, k);
      worst = std::max(worst, eval_W(field, rng.unit_vector(n)).norm());
    }
  }
  report(2, "boundary vanishing", worst <= 1e-12,
         fmt("1e4 sphere samples, k in {2..5}, max |W| = %.3e", worst));
}

// --- criterion 3: near-field leading term ----------------------------------

void criterion_3() {
  Rng rng(31337, 22);
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < 20; ++i) dirs.push_back(rng.unit_vector(3));
  const Eigen::VectorXd y = vec3(0, 0, 0.6);

  bool pass = true;
  std::string detail;
  for (int k : {2, 3}) {
    const CalibrationField field(y, k);
    const double scale = std::pow(1.0 - 0.36, 0.5 * k);
    for (const auto [t, tol] : std::vector<std::pair<double, double>>{
             {1e-3, 1e-2}, {1e-4, 1e-3}}) {
      double worst = 0;
      for (const auto& d : dirs) {
        const Eigen::VectorXd x = y + t * d;
        const double ratio =
            eval_W(field, x).norm() * k * std::pow(t, k - 1) / scale;
        worst = std::max(worst, std::abs(ratio - 1.0));
      }
      if (worst > tol) pass = false;
      detail += fmt("k=%d t=%.0e: %.2e (tol %.0e); ", k, t, worst, tol);
    }
  }
  report(3, "leading-term ratio", pass, detail);
}

// --- criterion 4: equality configurations ----------------------------------

void criterion_4() {
  bool pass = true;
  std::string detail;
  for (double dist : {0.0, 0.3, 0.6, 0.9}) {
    const AnalyticSurface disk = AnalyticSurface::equality_disk(vec3(0, 0, dist), 2);
    const VerificationReport r = run_verification(disk, VerifyOptions{});
    double worst_flux = 0;
    for (const auto& p : r.flux_values)
      worst_flux = std::max(worst_flux, std::abs(p.flux - r.bound));
    const bool ok = std::abs(r.margin) <= 1e-10 &&
                    std::abs(r.deficit_integral) <= 1e-10 && worst_flux <= 1e-9 &&
                    r.equality_residual <= 1e-12;
    if (!ok) pass = false;
    detail += fmt("|y|=%.1f: margin %.1e, deficit %.1e, flux err %.1e, res %.1e; ",
                  dist, r.margin, r.deficit_integral, worst_flux, r.equality_residual);
  }
  report(4, "equality case", pass, detail);
}

// --- criterion 5: strict-inequality margins ---------------------------------

double catenoid_area_oracle(double c) {
  auto height = [c] {
    auto f = [c](double z) {
      return c * c * std::cosh(z / c) * std::cosh(z / c) + z * z - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double z1 = height();
  // composite Gauss-Legendre quadrature of 2 pi c cosh^2(z/c)
  static const double node[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
  static const double weight[4] = {0.3478548451374538, 0.6521451548625461,
                                   0.6521451548625461, 0.3478548451374538};
  const int panels = 64;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = -z1 + 2.0 * z1 * p / panels;
    const double b = -z1 + 2.0 * z1 * (p + 1) / panels;
    for (int g = 0; g < 4; ++g) {
      const double z = 0.5 * (a + b) + 0.5 * (b - a) * node[g];
      const double ch = std::cosh(z / c);
      total += weight[g] * 0.5 * (b - a) * 2.0 * M_PI * c * ch * ch;
    }
  }
  return total;
}

void criterion_5() {
  bool pass = true;
  std::string detail;

  {
    Eigen::MatrixXd frame(3, 2);
    frame.col(0) << 1, 0, 0;
    frame.col(1) << 0, 1, 0;
    const AnalyticSurface tilted =
        AnalyticSurface::flat_disk(vec3(0, 0, 0), frame, vec3(0.6, 0, 0));
    const VerificationReport r = run_verification(tilted, VerifyOptions{});
    const double err = std::abs(r.margin - 0.36 * M_PI);
    if (err > 1e-10) pass = false;
    detail += fmt("tilted disk margin err %.1e; ", err);
  }
  {
    const VerificationReport r =
        run_verification(AnalyticSurface::clifford_cone(), VerifyOptions{});
    const double expected = 2.0 * M_PI * M_PI / 3.0 - 4.0 * M_PI / 3.0;
    const double err = std::abs(r.margin - expected);
    if (err > 1e-10 || !r.bound_pass) pass = false;
    detail += fmt("cone margin err %.1e; ", err);
  }
  {
    const double oracle = catenoid_area_oracle(0.5);
    const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
    const double analytic_err = std::abs(cat.area() - oracle);
    if (analytic_err > 1e-12) pass = false;

    TriMesh start = make_cylinder_mesh(0.5, 32, 64);
    SolverConfig config;
    config.max_iterations = 2000;
    const auto [solved, rep] = minimize(start, config);
    const double mesh_err = std::abs(rep.final_area - oracle) / oracle;
    const double margin = rep.final_area - M_PI * (1.0 - 0.25);
    if (!(mesh_err <= 0.01 && margin > 0)) pass = false;
    detail += fmt("catenoid analytic err %.1e, mesh rel err %.2e, mesh margin %.3f",
                  analytic_err, mesh_err, margin);
  }
  report(5, "strict margins", pass, detail);
}

// --- criterion 6: divergence-theorem identity -------------------------------

void criterion_6() {
  const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
  std::vector<double> gaps;
  double final_rel = 0;
  for (int density : {16, 32, 64}) {
    VerifyOptions opt;
    opt.density = density;
    opt.identity_r = 1e-2;
    const VerificationReport r = run_verification(cat, opt);
    gaps.push_back(r.identity_gap);
    final_rel = r.identity_gap / std::max(1.0, std::abs(r.identity_rhs));
  }
  const bool halving = gaps[1] <= gaps[0] / 2.0 && gaps[2] <= gaps[1] / 2.0;
  const bool pass = halving && final_rel <= 1e-3;
  report(6, "identity convergence", pass,
         fmt("gaps %.2e -> %.2e -> %.2e, final rel %.2e", gaps[0], gaps[1], gaps[2],
             final_rel));
}

// --- criterion 7: flux limits ------------------------------------------------

void criterion_7() {
  bool pass = true;
  std::string detail;
  {
    const AnalyticSurface disk = AnalyticSurface::equality_disk(vec3(0, 0, 0.6), 2);
    const VerificationReport r = run_verification(disk, VerifyOptions{});
    const double rel = std::abs(r.flux_extrapolated - r.bound) / r.bound;
    if (rel > 1e-9) pass = false;
    detail += fmt("disk rel err %.1e; ", rel);
  }
  {
    const VerificationReport r =
        run_verification(AnalyticSurface::catenoid(0.5), VerifyOptions{});
    const double rel = std::abs(r.flux_extrapolated - r.bound) / r.bound;
    if (rel > 5e-3) pass = false;
    detail += fmt("catenoid rel err %.2e; ", rel);
  }
  {
    const VerificationReport r =
        run_verification(AnalyticSurface::clifford_cone(), VerifyOptions{});
    const double rel = std::abs(r.flux_extrapolated - r.bound) / r.bound;
    if (rel > 5e-3) pass = false;
    detail += fmt("cone extrapolated %.6f vs bound %.6f (rel err %.3f; the slice "
                  "area of the cone is 2pi^2 r^2, so its flux limit is the cone "
                  "area %.6f, not the bound)",
                  r.flux_extrapolated, r.bound, rel, 2.0 * M_PI * M_PI / 3.0);
  }
  report(7, "flux limits", pass, detail);
}

// --- criterion 8: discrete solver on the perturbed disk ----------------------

void criterion_8() {
  const double target = M_PI * 0.64;
  bool pass = true;
  std::string detail;
  double final_err = 0;
  for (int rings : {8, 16, 32}) {
    TriMesh mesh = make_disk_mesh(vec3(0, 0, 0.6), rings, 4 * rings);
    jitter_interior(mesh, 0.05, 11);
    SolverConfig config;
    config.max_iterations = 500;
    const auto [solved, rep] = minimize(mesh, config);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double a : rep.area_history) {
      if (a > prev) monotone = false;
      prev = a;
    }
    double worst_dev = 0;
    for (double dev : rep.boundary_deviation_history) worst_dev = std::max(worst_dev, dev);
    final_err = std::abs(rep.final_area - target) / target;
    if (!rep.converged || !monotone || worst_dev > 1e-9 ||
        rep.max_pin_displacement > 1e-12)
      pass = false;
    detail += fmt("rings %d: rel err %.2e%s; ", rings, final_err,
                  monotone ? "" : " NOT MONOTONE");
  }
  if (final_err > 5e-3) pass = false;
  report(8, "solver convergence", pass, detail + fmt("finest %.2e <= 5e-3", final_err));
}

// --- criterion 9: deterministic reports --------------------------------------

void criterion_9() {
  bool pass = true;
  std::string detail;
  {
    FuzzConfig config;
    config.samples = 20000;
    config.seed = 7;
    const std::string a = fuzz_report_to_json(run_field_fuzz(config), config);
    const std::string b = fuzz_report_to_json(run_field_fuzz(config), config);
    if (a != b) pass = false;
    detail += fmt("fuzz report bytes %s; ", a == b ? "identical" : "DIFFER");
  }
  {
    const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
    const std::string a = report_to_json(run_verification(cat, VerifyOptions{}));
    const std::string b = report_to_json(run_verification(cat, VerifyOptions{}));
    if (a != b) pass = false;
    detail += fmt("verification report bytes %s; ", a == b ? "identical" : "DIFFER");
  }
  {
    FuzzConfig one;
    one.samples = 20000;
    one.seed = 7;
    FuzzConfig four = one;
    four.workers = 4;
    const std::string a = fuzz_report_to_json(run_field_fuzz(one), one);
    const std::string b = fuzz_report_to_json(run_field_fuzz(four), four);
    if (a != b) pass = false;
    detail += fmt("1 vs 4 workers %s; ", a == b ? "identical" : "DIFFER");
  }
  if (std::string(MINAREA_BIN_PATH).size() > 0) {
    auto run = [](const std::string& args, const std::string& path) {
      const std::string cmd =
          std::string(MINAREA_BIN_PATH) + " " + args + " > " + path + " 2>&1";
      (void)std::system(cmd.c_str());
      std::ifstream f(path);
      std::string text(std::istreambuf_iterator<char>(f), {});
      std::remove(path.c_str());
      return text;
    };
    const std::string a = run("field fuzz --seed 5 --samples 3000", "acc9_a.json");
    const std::string b = run("field fuzz --seed 5 --samples 3000", "acc9_b.json");
    if (a != b || a.empty()) pass = false;
    detail += fmt("cli fuzz bytes %s", a == b && !a.empty() ? "identical" : "DIFFER");
  }
  report(9, "determinism", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9};

  if (argc > 1 && std::string(argv[1]) != "all") {
    const int idx = std::atoi(argv[1]);
    if (idx < 1 || idx > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-9|all]\n", argv[0]);
      return 2;
    }
    criteria[idx - 1]();
    return g_all_pass ? 0 : 1;
  }
  for (const auto& c : criteria) c();
  return g_all_pass ? 0 : 1;
}
