#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "minarea/trimesh.hpp"

namespace minarea {

struct SolverConfig {
  int max_iterations = 200;
  double area_tol = 1e-10;      // relative area decrease counted as progress
  int stall_window = 10;        // consecutive no-progress iterations to converge
  double relaxation = 1.0;      // initial blend toward the Dirichlet solution
  double min_relaxation = 1e-4; // step search gives up below this
  bool remeshing = false;
  // Degeneracy abort threshold; 0 disables it. Area descent with an exactly
  // pinned vertex legitimately drives that vertex's neighbourhood toward
  // zero-area slivers (at negligible area), so the guard is opt-in.
  double min_angle_deg = 0.0;
  std::uint64_t seed = 0;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double initial_area = 0;
  double final_area = 0;
  double gradient_norm = 0;  // max interior area-gradient norm at exit
  double max_boundary_deviation = 0;
  double max_pin_displacement = 0;
  int edge_flips = 0;
  std::string termination;
  std::vector<double> area_history;                 // after each accepted step
  std::vector<double> boundary_deviation_history;   // per accepted step
};

// Area descent by alternating cotangent-weighted Dirichlet solves for the
// interior vertices with constraint projection: boundary vertices are kept
// on the unit sphere and the pinned vertex is reset to its target after
// every step. Steps that would increase area are rejected and retried with
// half the relaxation. Throws when the mesh degenerates (min angle below
// the threshold) and remeshing is disabled.
std::pair<TriMesh, SolveReport> minimize(const TriMesh& start, const SolverConfig& config);

}  // namespace minarea
