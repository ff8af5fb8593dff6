#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "minarea/calibration.hpp"

namespace minarea {

// Triangle mesh in R^n (libigl-style V/F storage). Boundary vertices are
// constrained to the unit sphere; at most one vertex is pinned to a target
// point. Face indices are 0-based in memory and 1-based in OBJ files.
struct TriMesh {
  Eigen::MatrixXd V;                   // #V x n vertex positions
  Eigen::MatrixXi F;                   // #F x 3 triangles, counterclockwise
  std::vector<std::uint8_t> boundary;  // per-vertex boundary flag
  int pinned = -1;                     // pinned vertex index, -1 if none
  Eigen::VectorXd pin_target;

  int n() const { return static_cast<int>(V.cols()); }
  int num_vertices() const { return static_cast<int>(V.rows()); }
  int num_triangles() const { return static_cast<int>(F.rows()); }
};

struct MeshChecks {
  bool edge_manifold = true;
  bool oriented = true;
  bool boundary_loops_simple = true;   // every boundary vertex has exactly 2 boundary edges
  int degenerate_triangles = 0;        // zero-area triangles (contribute zero area)
  double min_angle = 0;                // radians, over non-degenerate triangles
  double max_boundary_sphere_dev = 0;  // max | |v|-1 | over boundary vertices
  double pin_displacement = 0;
  double max_vertex_norm = 0;
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

double triangle_area(const TriMesh& mesh, int t);
double mesh_area(const TriMesh& mesh);

// Orthonormal 2-frame spanning the triangle plane (Gram-Schmidt on edges).
TangentFrame frame_of_triangle(const TriMesh& mesh, int t);

MeshChecks check_mesh(const TriMesh& mesh);

// Throws with a description when the mesh violates its structural
// invariants; optionally also requires all vertices inside the closed ball.
void require_valid(const TriMesh& mesh, bool require_ball_containment = false);

// OBJ + sidecar JSON ("<path>.json" next to the OBJ). The sidecar stores
// 0-based boundary indices and the pin; without it the boundary is derived
// from the triangulation and no pin is set. Meshes with n != 3 use an
// "# ambient n" header and n floats per vertex line.
TriMesh load_mesh(const std::string& obj_path, bool require_ball_containment = false);
void save_mesh(const TriMesh& mesh, const std::string& obj_path);

// Test-problem generators. Both place the designated point at a vertex and
// put every boundary vertex exactly on the unit sphere.
TriMesh make_disk_mesh(const Eigen::VectorXd& y, int rings, int sectors);
TriMesh make_catenoid_mesh(double c, int stacks, int slices);  // exact catenoid grid
TriMesh make_cylinder_mesh(double c, int stacks, int slices);  // straight tube, catenoid boundary

// Displace interior non-pinned vertices by uniform noise in [-a, a]^n.
void jitter_interior(TriMesh& mesh, double amplitude, std::uint64_t seed);

}  // namespace minarea
