#include "minarea/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Sparse>

namespace minarea {

namespace {

// cotangent of the angle at corner `at`, Gram form (any ambient dimension)
double corner_cot(const TriMesh& mesh, int t, int at) {
  const Eigen::VectorXd u =
      (mesh.V.row(mesh.F(t, (at + 1) % 3)) - mesh.V.row(mesh.F(t, at))).transpose();
  const Eigen::VectorXd v =
      (mesh.V.row(mesh.F(t, (at + 2) % 3)) - mesh.V.row(mesh.F(t, at))).transpose();
  const double cross2 = u.squaredNorm() * v.squaredNorm() - u.dot(v) * u.dot(v);
  return u.dot(v) / std::sqrt(std::max(cross2, 1e-300));
}

// cotangent Laplacian with positive diagonal; (L V).row(i) is the area
// gradient at vertex i
Eigen::SparseMatrix<double> cot_laplacian(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * 12);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int corner = 0; corner < 3; ++corner) {
      const int i = mesh.F(t, (corner + 1) % 3);
      const int j = mesh.F(t, (corner + 2) % 3);
      const double w = 0.5 * corner_cot(mesh, t, corner);
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
    }
  }
  Eigen::SparseMatrix<double> lap(nv, nv);
  lap.setFromTriplets(trip.begin(), trip.end());
  return lap;
}

// min corner angle, optionally ignoring triangles that touch one vertex:
// the star of an exactly pinned vertex degenerates at the h^2 scale and is
// judged separately
double min_triangle_angle_excluding(const TriMesh& mesh, int excluded_vertex) {
  double min_angle = M_PI;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (excluded_vertex >= 0 && (mesh.F(t, 0) == excluded_vertex ||
                                 mesh.F(t, 1) == excluded_vertex ||
                                 mesh.F(t, 2) == excluded_vertex))
      continue;
    for (int e = 0; e < 3; ++e) {
      const Eigen::VectorXd a =
          (mesh.V.row(mesh.F(t, (e + 1) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const Eigen::VectorXd b =
          (mesh.V.row(mesh.F(t, (e + 2) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const double den = a.norm() * b.norm();
      if (den < 1e-300) return 0.0;
      min_angle = std::min(min_angle, std::acos(std::clamp(a.dot(b) / den, -1.0, 1.0)));
    }
  }
  return min_angle;
}

double min_triangle_angle(const TriMesh& mesh) {
  return min_triangle_angle_excluding(mesh, -1);
}

void project_constraints(TriMesh& mesh) {
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v]) {
      const double norm = mesh.V.row(v).norm();
      if (norm > 1e-300) mesh.V.row(v) /= norm;
    }
  }
  if (mesh.pinned >= 0) mesh.V.row(mesh.pinned) = mesh.pin_target.transpose();
}

// Flip interior edges that improve the worst corner angle of their two
// triangles without increasing their combined area.
int flip_pass(TriMesh& mesh) {
  using Key = std::pair<int, int>;
  std::map<Key, std::vector<int>> edge_faces;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = mesh.F(t, e), b = mesh.F(t, (e + 1) % 3);
      if (a > b) std::swap(a, b);
      edge_faces[{a, b}].push_back(t);
    }

  auto pair_quality = [&](int t) {
    double worst = M_PI;
    for (int e = 0; e < 3; ++e) {
      const Eigen::VectorXd a =
          (mesh.V.row(mesh.F(t, (e + 1) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const Eigen::VectorXd b =
          (mesh.V.row(mesh.F(t, (e + 2) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const double den = a.norm() * b.norm();
      if (den < 1e-300) return 0.0;
      worst = std::min(worst, std::acos(std::clamp(a.dot(b) / den, -1.0, 1.0)));
    }
    return worst;
  };

  int flips = 0;
  std::vector<char> touched(mesh.num_triangles(), 0);
  for (auto& [key, faces] : edge_faces) {
    if (faces.size() != 2) continue;
    const int t0 = faces[0], t1 = faces[1];
    if (touched[t0] || touched[t1]) continue;
    int opp0 = -1, opp1 = -1;
    for (int e = 0; e < 3; ++e) {
      const int v0 = mesh.F(t0, e);
      if (v0 != key.first && v0 != key.second) opp0 = v0;
      const int v1 = mesh.F(t1, e);
      if (v1 != key.first && v1 != key.second) opp1 = v1;
    }
    if (opp0 < 0 || opp1 < 0 || opp0 == opp1) continue;
    if (edge_faces.count({std::min(opp0, opp1), std::max(opp0, opp1)})) continue;

    const double before_q = std::min(pair_quality(t0), pair_quality(t1));
    const double before_a = triangle_area(mesh, t0) + triangle_area(mesh, t1);

    const Eigen::RowVector3i f0 = mesh.F.row(t0), f1 = mesh.F.row(t1);
    // orient the new triangles around the flipped edge opp0-opp1
    int a = key.first, b = key.second;
    // find orientation of (a,b) in t0 to keep consistency
    bool ab_in_t0 = false;
    for (int e = 0; e < 3; ++e)
      if (mesh.F(t0, e) == a && mesh.F(t0, (e + 1) % 3) == b) ab_in_t0 = true;
    if (!ab_in_t0) std::swap(a, b);
    mesh.F.row(t0) << a, opp1, opp0;
    mesh.F.row(t1) << b, opp0, opp1;

    const double after_q = std::min(pair_quality(t0), pair_quality(t1));
    const double after_a = triangle_area(mesh, t0) + triangle_area(mesh, t1);
    if (after_q > before_q + 1e-12 && after_a <= before_a + 1e-15) {
      ++flips;
      touched[t0] = touched[t1] = 1;
    } else {
      mesh.F.row(t0) = f0;
      mesh.F.row(t1) = f1;
    }
  }
  return flips;
}

}  // namespace

std::pair<TriMesh, SolveReport> minimize(const TriMesh& start, const SolverConfig& config) {
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(config.area_tol > 0)) throw std::invalid_argument("area tolerance must be positive");
  require_valid(start);

  TriMesh mesh = start;
  project_constraints(mesh);
  const int nv = mesh.num_vertices();
  const int dim = mesh.n();
  const double min_angle_rad = config.min_angle_deg * M_PI / 180.0;
  const bool angle_guard = config.min_angle_deg > 0.0;

  // The pin is handled by projection after each step, not as a Dirichlet
  // point: an interior point constraint would make the harmonic update
  // collapse its neighbourhood.
  std::vector<int> interior;
  std::vector<char> is_free(nv, 1);
  for (int v = 0; v < nv; ++v)
    if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v]) is_free[v] = 0;
  for (int v = 0; v < nv; ++v)
    if (is_free[v]) interior.push_back(v);

  SolveReport report;
  report.initial_area = mesh_area(mesh);
  report.final_area = report.initial_area;
  const bool started_healthy = min_triangle_angle(mesh) >= min_angle_rad;

  if (interior.empty()) {
    report.converged = true;
    report.termination = "no free vertices";
    return {mesh, report};
  }

  std::vector<int> free_index(nv, -1);
  for (size_t i = 0; i < interior.size(); ++i) free_index[interior[i]] = static_cast<int>(i);

  double area = report.initial_area;
  double relax = config.relaxation;
  int stall = 0;

  auto record_constraints = [&](SolveReport* rep) {
    double bd = 0;
    for (int v = 0; v < nv; ++v)
      if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v])
        bd = std::max(bd, std::abs(mesh.V.row(v).norm() - 1.0));
    double pd = 0;
    if (mesh.pinned >= 0)
      pd = (mesh.V.row(mesh.pinned).transpose() - mesh.pin_target).norm();
    rep->max_boundary_deviation = std::max(rep->max_boundary_deviation, bd);
    rep->max_pin_displacement = std::max(rep->max_pin_displacement, pd);
    rep->boundary_deviation_history.push_back(bd);
  };

  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (triangle_area(mesh, t) < 1e-300)
      throw std::runtime_error("zero-area triangle " + std::to_string(t) + " in the input mesh");

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    // Dirichlet solve: harmonic interior positions for the current weights
    const Eigen::SparseMatrix<double> lap = cot_laplacian(mesh);
    const int ni = static_cast<int>(interior.size());
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, dim);
    for (int col = 0; col < lap.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(lap, col); it; ++it) {
        const int r = static_cast<int>(it.row());
        const int c = static_cast<int>(it.col());
        if (free_index[r] < 0) continue;
        if (free_index[c] >= 0)
          trip.emplace_back(free_index[r], free_index[c], it.value());
        else
          rhs.row(free_index[r]) -= it.value() * mesh.V.row(c);
      }
    }
    Eigen::SparseMatrix<double> lii(ni, ni);
    lii.setFromTriplets(trip.begin(), trip.end());
    lii.makeCompressed();
    // negative cotangents make the system indefinite; LU is robust there
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver(lii);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("Dirichlet solve failed (singular cotangent system)");
    const Eigen::MatrixXd solved = solver.solve(rhs);

    // step acceptance: blend toward the solution, halving on area increase
    bool accepted = false;
    double trial_area = area;
    TriMesh trial = mesh;
    while (relax >= config.min_relaxation) {
      for (int i = 0; i < ni; ++i)
        trial.V.row(interior[i]) =
            (1.0 - relax) * mesh.V.row(interior[i]) + relax * solved.row(i);
      project_constraints(trial);
      trial_area = mesh_area(trial);
      if (trial_area <= area) {
        accepted = true;
        break;
      }
      relax *= 0.5;
    }
    if (!accepted) {
      // a no-step iteration is an iteration with zero area decrease; the
      // stationarity window treats it like any other non-progress step
      ++stall;
      relax = config.relaxation;
      if (stall >= config.stall_window) {
        report.converged = true;
        report.termination = "area stationary";
        break;
      }
      continue;
    }

    mesh.V = trial.V;
    const double decrease = (area - trial_area) / std::max(area, 1e-300);
    area = trial_area;
    ++report.iterations;
    report.area_history.push_back(area);
    record_constraints(&report);
    relax = std::min(config.relaxation, relax * 2.0);

    // degeneration is judged only for meshes that started healthy, and
    // outside the pinned vertex star; a deliberately crumpled input passes
    // through bad configurations on its way down
    if (angle_guard && started_healthy &&
        min_triangle_angle_excluding(mesh, mesh.pinned) < min_angle_rad) {
      if (!config.remeshing)
        throw std::runtime_error(
            "mesh degenerated: min angle " +
            std::to_string(min_triangle_angle_excluding(mesh, mesh.pinned) * 180.0 / M_PI) +
            " deg below threshold with remeshing disabled");
      report.edge_flips += flip_pass(mesh);
      area = mesh_area(mesh);
      if (min_triangle_angle_excluding(mesh, mesh.pinned) < min_angle_rad)
        throw std::runtime_error("mesh degenerated: remeshing could not restore the min angle");
    } else if (config.remeshing) {
      report.edge_flips += flip_pass(mesh);
      area = mesh_area(mesh);
    }

    stall = (decrease < config.area_tol) ? stall + 1 : 0;
    if (stall >= config.stall_window) {
      report.converged = true;
      report.termination = "area stationary";
      break;
    }
  }

  if (report.termination.empty()) report.termination = "max iterations";
  report.final_area = area;

  // gradient of total area with respect to the interior vertices, assembled
  // per triangle as (|opposite edge|/2) times the in-plane height direction;
  // bounded even on sliver triangles where the cotangent form blows up
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(nv, dim);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int corner = 0; corner < 3; ++corner) {
      const int v = mesh.F(t, corner);
      const Eigen::VectorXd p1 = mesh.V.row(mesh.F(t, (corner + 1) % 3)).transpose();
      const Eigen::VectorXd p2 = mesh.V.row(mesh.F(t, (corner + 2) % 3)).transpose();
      const Eigen::VectorXd e = p2 - p1;
      const double elen = e.norm();
      if (elen < 1e-300) continue;
      Eigen::VectorXd h = mesh.V.row(v).transpose() - p1;
      h -= (h.dot(e) / (elen * elen)) * e;
      const double hlen = h.norm();
      if (hlen < 1e-14 * elen) continue;  // direction undefined at exact degeneracy
      grad.row(v) += (0.5 * elen / hlen) * h.transpose();
    }
  }
  double gnorm = 0;
  for (int v : interior) gnorm = std::max(gnorm, grad.row(v).norm());
  report.gradient_norm = gnorm;

  require_valid(mesh);
  return {mesh, report};
}

}  // namespace minarea
