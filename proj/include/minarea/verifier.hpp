#pragma once

#include <string>
#include <utility>
#include <vector>

#include "minarea/calibration.hpp"
#include "minarea/surfaces.hpp"
#include "minarea/trimesh.hpp"

namespace minarea {

struct VerifyOptions {
  int density = 0;         // analytic sampling density; 0 -> family default
  int mesh_level = 2;      // per-triangle quadrature subdivision level
  double identity_r = 0;   // excision radius; 0 -> family default
  std::vector<double> r_ladder;  // flux ladder, descending; empty -> default
  double tol_bound_analytic = 1e-10;  // |margin| slack for analytic areas
  double tol_bound_mesh_rel = 0.01;   // mesh slack, relative to the bound
  double tol_identity_rel = 0;  // 0 -> 1e-3 analytic, 2e-2 mesh
  double tol_flux_rel = 0;      // 0 -> family default (1e-9 disks, 5e-3 else)
  double equality_threshold = 1e-12;
  double deficit_slack = 1e-10;
};

struct LadderPoint {
  double r = 0;
  double flux = 0;
};

// Everything needed to re-derive each verdict from the stored numbers.
struct VerificationReport {
  std::string surface;
  std::vector<std::pair<std::string, double>> params;
  int k = 2;
  int n = 3;
  Eigen::VectorXd y;

  double area = 0;
  double bound = 0;   // |B^k| (1 - |y|^2)^{k/2}
  double margin = 0;  // area - bound
  bool bound_pass = false;
  double tol_bound = 0;

  double identity_r = 0;
  int density = 0;
  double identity_lhs = 0;  // integral of (1 - div W) outside B_r(y)
  double identity_rhs = 0;  // punched area minus flux through the slice
  double identity_gap = 0;
  bool identity_pass = false;
  double tol_identity = 0;

  std::vector<LadderPoint> flux_values;
  double flux_limit_target = 0;  // the bound again, per the limit statement
  double flux_extrapolated = 0;
  double flux_observed_order = 0;
  bool flux_dropped_smallest = false;
  bool flux_pass = false;
  double tol_flux = 0;
  double flux_r_max_valid = 0;  // mesh runs: largest radius the slice supports

  double deficit_integral = 0;
  double deficit_min = 0;
  bool deficit_pass = false;
  double deficit_slack = 0;

  double equality_residual = 0;
  double equality_threshold = 0;
  bool equality_case = false;

  bool all_pass = false;
};

// Quadrature of the pointwise deficit over the sample set; every sample
// must lie outside B_r(y).
double integrate_deficit(const std::vector<SurfaceSample>& samples,
                         const CalibrationField& field, double r);

double min_deficit(const std::vector<SurfaceSample>& samples,
                   const CalibrationField& field);

// Quadrature of <W, conormal> over a slice sample set.
double flux_integral(const std::vector<SliceSample>& slice,
                     const CalibrationField& field);

// max over samples of normal_xy_sq + tangential_y_sq; vanishes exactly on
// configurations that are pointwise consistent with the equality case.
double equality_residual(const std::vector<SurfaceSample>& samples,
                         const CalibrationField& field);

struct BoundCheck {
  double area = 0, bound = 0, margin = 0;
  double tolerance = 0;
  bool pass = false;
};

struct IdentityCheck {
  double r = 0;
  int density = 0;
  double lhs = 0, rhs = 0, gap = 0;
  double tolerance = 0;
  bool pass = false;
};

struct FluxLimitCheck {
  std::vector<LadderPoint> ladder;
  double extrapolated = 0, target = 0, observed_order = 0;
  bool dropped_smallest = false;
  double tolerance = 0;
  bool pass = false;
};

// area >= |B^k| (1 - |y|^2)^{k/2}, with an absolute slack for analytic
// areas and a bound-relative slack for mesh areas (the mesh must pass
// through y at a vertex).
BoundCheck check_bound(const AnalyticSurface& surface, double tol = 1e-10);
BoundCheck check_bound(const TriMesh& mesh, const Eigen::VectorXd& y, double tol_rel = 0.01);

// integral of (1 - div W) over the surface outside B_r(y) against
// punched area minus slice flux.
IdentityCheck check_identity(const AnalyticSurface& surface, double r, int density,
                             double tol_rel = 1e-3);

// flux ladder plus extrapolation against the limit |B^k| (1-|y|^2)^{k/2}.
FluxLimitCheck flux_limit_study(const AnalyticSurface& surface,
                                const std::vector<double>& radii, double tol_rel = 5e-3);

// Extrapolate a flux ladder to r -> 0. Drops trailing rungs whose
// differences grow (quadrature breakdown) and estimates the convergence
// order from the surviving rungs.
struct Extrapolation {
  double value = 0;
  double observed_order = 0;
  bool dropped_smallest = false;
};
Extrapolation richardson_extrapolate(const std::vector<LadderPoint>& ladder);

// Quadrature samples of the punched mesh and the slice it is punched along.
// Triangles touching y must have a vertex exactly at y (the pin); they are
// integrated in polar corner coordinates so the excision is exact.
std::vector<SurfaceSample> mesh_samples(const TriMesh& mesh, const Eigen::VectorXd& y,
                                        int level, double exclusion_radius);
std::vector<SliceSample> mesh_slice(const TriMesh& mesh, const Eigen::VectorXd& y, double r);
// Largest slice radius the triangles incident to y support.
double mesh_slice_max_radius(const TriMesh& mesh, const Eigen::VectorXd& y);

VerificationReport run_verification(const AnalyticSurface& surface, const VerifyOptions& options);
VerificationReport run_verification(const TriMesh& mesh, const Eigen::VectorXd& y,
                                    const VerifyOptions& options);

std::string report_to_json(const VerificationReport& report);
std::string ladder_to_csv(const VerificationReport& report);

}  // namespace minarea
