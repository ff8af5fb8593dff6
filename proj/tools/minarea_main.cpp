// minarea: numerical verification of the sharp area lower bound
// |Sigma| >= |B^k| (1 - |y|^2)^{k/2} for minimal surfaces through a
// prescribed point of the unit ball.
//
// Exit codes: 0 = all checks passed, 1 = a mathematical check failed,
// 2 = usage or invalid-instance error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minarea/fuzz.hpp"
#include "minarea/json_writer.hpp"
#include "minarea/minimize.hpp"
#include "minarea/surfaces.hpp"
#include "minarea/trimesh.hpp"
#include "minarea/verifier.hpp"

namespace {

using namespace minarea;

Eigen::VectorXd parse_vector(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("cannot parse '" + item + "' as a number");
    }
  }
  if (vals.empty()) throw CLI::ValidationError("empty vector argument");
  Eigen::VectorXd v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

// "v1;v2;..." with each vi a comma-separated vector -> columns of a matrix
Eigen::MatrixXd parse_frame(const std::string& spec, int n) {
  std::vector<Eigen::VectorXd> cols;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) cols.push_back(parse_vector(item));
  if (cols.empty()) throw CLI::ValidationError("empty frame argument");
  Eigen::MatrixXd m(n, cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n)
      throw CLI::ValidationError("frame vector dimension mismatch");
    m.col(c) = cols[c];
  }
  return m;
}

std::vector<int> parse_int_set(const std::string& csv) {
  std::vector<int> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    vals.push_back(std::stoi(item));
  return vals;
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error(out_path + ": cannot open for writing");
    f << text << "\n";
  }
}

AnalyticSurface build_family(const std::string& family, const Eigen::VectorXd& y,
                             int k, double c, const std::string& plane_point,
                             const std::string& plane_frame) {
  if (family == "flatdisk") {
    if (!plane_point.empty() || !plane_frame.empty()) {
      if (plane_point.empty() || plane_frame.empty())
        throw CLI::ValidationError("--plane-point and --plane-frame must be given together");
      const Eigen::VectorXd p = parse_vector(plane_point);
      const Eigen::MatrixXd fr = parse_frame(plane_frame, static_cast<int>(p.size()));
      return AnalyticSurface::flat_disk(p, fr, y);
    }
    return AnalyticSurface::equality_disk(y, k);
  }
  if (family == "catenoid") return AnalyticSurface::catenoid(c);
  if (family == "cone") return AnalyticSurface::clifford_cone();
  throw CLI::ValidationError("unknown family '" + family + "'");
}

int cmd_field_eval(const std::string& x_csv, const std::string& y_csv, int k, int n,
                   const std::string& frame_spec, const std::string& out_path) {
  const Eigen::VectorXd x = parse_vector(x_csv);
  const Eigen::VectorXd y = parse_vector(y_csv);
  if (x.size() != y.size())
    throw CLI::ValidationError("--x and --y must have the same dimension");
  if (n > 0 && n != x.size())
    throw CLI::ValidationError("--n disagrees with the vector dimensions");
  const CalibrationField field(y, k);
  const Eigen::VectorXd w = eval_W(field, x);

  JsonWriter j;
  j.begin_object();
  j.kv("schema_version", 1);
  j.kv("kind", "field_eval");
  j.kv("k", k);
  j.kv("n", static_cast<int>(x.size()));
  j.kv("y", y);
  j.kv("x", x);
  j.kv("W", w);
  const double dist = (x - y).norm();
  j.kv("Q", 1.0 - 2.0 * x.dot(y) + y.squaredNorm());
  j.kv("dist", dist);
  if (!frame_spec.empty()) {
    const TangentFrame frame(parse_frame(frame_spec, static_cast<int>(x.size())));
    const FieldDiagnostics d = field_diagnostics(field, x, frame);
    j.kv("div", divergence_trace(field, x, frame));
    j.kv("deficit", deficit(field, x, frame));
    j.kv("tangential_y_sq", d.tangential_y_sq);
    j.kv("normal_xy_sq", d.normal_xy_sq);
  }
  j.end_object();
  emit(j.str(), out_path);
  return 0;
}

int cmd_field_fuzz(long long samples, std::uint64_t seed, const std::string& k_set,
                   const std::string& n_set, double ymax, double dmin,
                   const std::string& out_path) {
  FuzzConfig config;
  config.samples = samples;
  config.seed = seed;
  if (!k_set.empty()) config.k_set = parse_int_set(k_set);
  if (!n_set.empty()) config.n_set = parse_int_set(n_set);
  config.ymax = ymax;
  config.dmin = dmin;
  if (const char* cap = std::getenv("MINAREA_WORKERS"))
    config.workers = std::max(1, std::atoi(cap));
  const FuzzReport rep = run_field_fuzz(config);
  emit(fuzz_report_to_json(rep, config), out_path);
  return rep.pass ? 0 : 1;
}

int cmd_surface(const std::string& family, const std::string& y_csv, int k, double c,
                const std::string& plane_point, const std::string& plane_frame,
                double d, const std::string& export_path, int resolution,
                double perturb, std::uint64_t seed, const std::string& out_path) {
  Eigen::VectorXd y;
  if (!y_csv.empty()) {
    y = parse_vector(y_csv);
  } else if (family == "flatdisk") {
    // --d places the equality disk at distance d along the last axis
    y = Eigen::VectorXd::Zero(3);
    y[2] = d;
  } else if (family == "catenoid") {
    y = Eigen::Vector3d(c, 0.0, 0.0);
  } else {
    y = Eigen::VectorXd::Zero(4);
  }
  const AnalyticSurface surface = build_family(family, y, k, c, plane_point, plane_frame);

  JsonWriter j;
  j.begin_object();
  j.kv("schema_version", 1);
  j.kv("kind", "surface");
  j.kv("family", surface.family_name());
  j.kv("k", surface.k());
  j.kv("n", surface.n());
  j.kv("y", surface.through_point());
  j.kv("area", surface.area());
  j.kv("bound", unit_ball_volume(surface.k()) *
                    std::pow(1.0 - surface.through_point().squaredNorm(),
                             0.5 * surface.k()));
  if (const auto* cat = surface.catenoid_params()) {
    j.kv("c", cat->c);
    j.kv("z1", cat->z1);
  }
  if (surface.family_name() == "flat_disk") {
    j.kv("plane_distance", surface.plane_distance());
    j.kv("disk_radius", surface.disk_radius());
  }
  if (!export_path.empty()) {
    TriMesh mesh;
    if (surface.family_name() == "flat_disk" && surface.k() == 2) {
      mesh = make_disk_mesh(surface.through_point(), resolution, 4 * resolution);
    } else if (surface.family_name() == "catenoid") {
      const auto* cat = surface.catenoid_params();
      mesh = make_catenoid_mesh(cat->c, 2 * resolution, 4 * resolution);
    } else {
      throw CLI::ValidationError("only k = 2 families can be exported as meshes");
    }
    if (perturb > 0) jitter_interior(mesh, perturb, seed);
    save_mesh(mesh, export_path);
    j.kv("exported", export_path);
    j.kv("mesh_vertices", mesh.num_vertices());
    j.kv("mesh_triangles", mesh.num_triangles());
    j.kv("mesh_area", mesh_area(mesh));
  }
  j.end_object();
  emit(j.str(), out_path);
  return 0;
}

int cmd_solve(const std::string& input, const std::string& y_csv, int iters, double tol,
              const std::string& mesh_out, const std::string& out_path) {
  TriMesh mesh = load_mesh(input);
  if (!y_csv.empty()) {
    const Eigen::VectorXd y = parse_vector(y_csv);
    if (mesh.pinned < 0)
      throw std::runtime_error("mesh has no pinned vertex; cannot impose y");
    if (y.size() != mesh.n()) throw std::runtime_error("--y dimension mismatch");
    mesh.pin_target = y;
  }
  SolverConfig config;
  config.max_iterations = iters;
  config.area_tol = tol;
  auto [solved, report] = minimize(mesh, config);
  if (!mesh_out.empty()) save_mesh(solved, mesh_out);

  JsonWriter j;
  j.begin_object();
  j.kv("schema_version", 1);
  j.kv("kind", "solve");
  j.kv("input", input);
  j.kv("converged", report.converged);
  j.kv("termination", report.termination);
  j.kv("iterations", report.iterations);
  j.kv("initial_area", report.initial_area);
  j.kv("final_area", report.final_area);
  j.kv("gradient_norm", report.gradient_norm);
  j.kv("max_boundary_deviation", report.max_boundary_deviation);
  j.kv("max_pin_displacement", report.max_pin_displacement);
  j.kv("edge_flips", report.edge_flips);
  if (!mesh_out.empty()) j.kv("mesh_out", mesh_out);
  j.end_object();
  emit(j.str(), out_path);
  return report.converged ? 0 : 1;
}

int cmd_verify(const std::string& input, const std::string& family,
               const std::string& y_csv, int k, double c, const std::string& plane_point,
               const std::string& plane_frame, const std::string& ladder_csv,
               int density, double r_identity, const std::string& out_path,
               const std::string& csv_path) {
  VerifyOptions options;
  if (density > 0) options.density = density;
  if (r_identity > 0) options.identity_r = r_identity;
  if (!ladder_csv.empty()) {
    const Eigen::VectorXd lv = parse_vector(ladder_csv);
    for (Eigen::Index i = 0; i < lv.size(); ++i) options.r_ladder.push_back(lv[i]);
  }

  VerificationReport report;
  if (!input.empty()) {
    const TriMesh mesh = load_mesh(input);
    Eigen::VectorXd y;
    if (!y_csv.empty()) y = parse_vector(y_csv);
    else if (mesh.pinned >= 0) y = mesh.pin_target;
    else throw std::runtime_error("mesh has no pin and no --y was given");
    report = run_verification(mesh, y, options);
  } else {
    Eigen::VectorXd y;
    if (!y_csv.empty()) y = parse_vector(y_csv);
    else if (family == "catenoid") y = Eigen::Vector3d(c, 0.0, 0.0);
    else if (family == "cone") y = Eigen::VectorXd::Zero(4);
    else throw CLI::ValidationError("--y is required for the flat disk family");
    report = run_verification(build_family(family, y, k, c, plane_point, plane_frame),
                              options);
  }
  emit(report_to_json(report), out_path);
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error(csv_path + ": cannot open for writing");
    f << ladder_to_csv(report);
  }
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "minarea: calibration-field verification of sharp area lower bounds\n"
      "for minimal surfaces through a prescribed point in the unit ball"};
  app.require_subcommand(1);

  // field
  auto* field = app.add_subcommand("field", "evaluate or fuzz the calibration field");
  field->require_subcommand(1);

  auto* eval = field->add_subcommand("eval", "evaluate W and its divergence at a point");
  std::string eval_x, eval_y, eval_frame, eval_out;
  int eval_k = 2, eval_n = 0;
  eval->add_option("--x", eval_x, "evaluation point, comma separated")->required();
  eval->add_option("--y", eval_y, "prescribed point, comma separated")->required();
  eval->add_option("--k", eval_k, "submanifold dimension")->required();
  eval->add_option("--n", eval_n, "ambient dimension (cross-validated)");
  eval->add_option("--frame", eval_frame, "tangent frame 'v1;v2;...' (enables div/deficit)");
  eval->add_option("--out", eval_out, "also write the JSON to this file");

  auto* fuzz = field->add_subcommand("fuzz", "randomized inequality and consistency sweep");
  long long fuzz_samples = 100000;
  std::uint64_t fuzz_seed = 0;
  std::string fuzz_kset, fuzz_nset, fuzz_out;
  double fuzz_ymax = 0.95, fuzz_dmin = 1e-3;
  fuzz->add_option("--samples", fuzz_samples, "number of random configurations");
  fuzz->add_option("--seed", fuzz_seed, "stream seed (runs are reproducible per seed)")
      ->required();
  fuzz->add_option("--k-set", fuzz_kset, "comma separated k values");
  fuzz->add_option("--n-set", fuzz_nset, "comma separated n values");
  fuzz->add_option("--ymax", fuzz_ymax, "cap on |y|");
  fuzz->add_option("--dmin", fuzz_dmin, "floor on |x-y|");
  fuzz->add_option("--out", fuzz_out, "also write the JSON to this file");

  // surface
  auto* surf = app.add_subcommand("surface", "analytic surface catalog and mesh export");
  std::string surf_family, surf_y, surf_pp, surf_pf, surf_export, surf_out;
  int surf_k = 2, surf_res = 16;
  double surf_c = 0.5, surf_d = 0.0, surf_perturb = 0.0;
  std::uint64_t surf_seed = 0;
  surf->add_option("--family", surf_family, "flatdisk | catenoid | cone")->required();
  surf->add_option("--y", surf_y, "designated through point");
  surf->add_option("--k", surf_k, "disk dimension");
  surf->add_option("--c", surf_c, "catenoid waist radius, in (0,1)");
  surf->add_option("--d", surf_d, "equality disk: plane distance from the origin");
  surf->add_option("--plane-point", surf_pp, "flat disk: a point of the plane");
  surf->add_option("--plane-frame", surf_pf, "flat disk: plane basis 'v1;v2'");
  surf->add_option("--export", surf_export, "write an OBJ mesh (k = 2 families)");
  surf->add_option("--resolution", surf_res, "mesh resolution for --export");
  surf->add_option("--perturb", surf_perturb, "jitter interior vertices by this amount");
  surf->add_option("--seed", surf_seed, "jitter seed");
  surf->add_option("--out", surf_out, "also write the JSON to this file");

  // solve
  auto* solve = app.add_subcommand("solve", "discrete area minimization of a mesh");
  std::string solve_in, solve_y, solve_mesh_out, solve_out;
  int solve_iters = 200;
  double solve_tol = 1e-10;
  solve->add_option("--input", solve_in, "input OBJ mesh")->required();
  solve->add_option("--y", solve_y, "override the pin target");
  solve->add_option("--iters", solve_iters, "max iterations");
  solve->add_option("--tol", solve_tol, "relative area decrease tolerance");
  solve->add_option("--mesh-out", solve_mesh_out, "write the minimized OBJ here");
  solve->add_option("--out", solve_out, "also write the JSON report to this file");

  // verify
  auto* verify = app.add_subcommand("verify", "run all bound/identity/flux checks");
  std::string ver_in, ver_family, ver_y, ver_pp, ver_pf, ver_ladder, ver_out, ver_csv;
  int ver_k = 2, ver_density = 0;
  double ver_c = 0.5, ver_r = 0.0;
  verify->add_option("--input", ver_in, "mesh OBJ to verify");
  verify->add_option("--family", ver_family, "flatdisk | catenoid | cone");
  verify->add_option("--y", ver_y, "prescribed point");
  verify->add_option("--k", ver_k, "disk dimension");
  verify->add_option("--c", ver_c, "catenoid waist radius");
  verify->add_option("--plane-point", ver_pp, "flat disk: a point of the plane");
  verify->add_option("--plane-frame", ver_pf, "flat disk: plane basis 'v1;v2'");
  verify->add_option("--r-ladder", ver_ladder, "comma separated slice radii, descending");
  verify->add_option("--density", ver_density, "sampling density (0 = family default)");
  verify->add_option("--r", ver_r, "identity excision radius");
  verify->add_option("--out", ver_out, "also write the JSON to this file");
  verify->add_option("--csv", ver_csv, "write the (r, flux) ladder as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (eval->parsed())
      return cmd_field_eval(eval_x, eval_y, eval_k, eval_n, eval_frame, eval_out);
    if (fuzz->parsed())
      return cmd_field_fuzz(fuzz_samples, fuzz_seed, fuzz_kset, fuzz_nset, fuzz_ymax,
                            fuzz_dmin, fuzz_out);
    if (surf->parsed())
      return cmd_surface(surf_family, surf_y, surf_k, surf_c, surf_pp, surf_pf, surf_d,
                         surf_export, surf_res, surf_perturb, surf_seed, surf_out);
    if (solve->parsed())
      return cmd_solve(solve_in, solve_y, solve_iters, solve_tol, solve_mesh_out, solve_out);
    if (verify->parsed())
      return cmd_verify(ver_in, ver_family, ver_y, ver_k, ver_c, ver_pp, ver_pf,
                        ver_ladder, ver_density, ver_r, ver_out, ver_csv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
