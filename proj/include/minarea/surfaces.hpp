#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace minarea {

// A quadrature sample on a surface: position, orthonormal tangent frame
// (n x k columns) and weight. Weights of a sample set sum to the area of
// the sampled region.
struct SurfaceSample {
  Eigen::VectorXd x;
  Eigen::MatrixXd frame;
  double weight = 0;
};

// A sample of the slice Sigma \cap \partial B_r(y): position, unit conormal
// (tangent to the surface, normal to the slice, pointing toward y) and
// (k-1)-dimensional area weight.
struct SliceSample {
  Eigen::VectorXd x;
  Eigen::VectorXd conormal;
  double weight = 0;
};

struct FlatDiskParams {
  Eigen::VectorXd basepoint;  // any point of the affine k-plane
  Eigen::MatrixXd frame;      // n x k orthonormal basis of the plane
};

struct CatenoidPieceParams {
  double c = 0.5;  // waist radius; axis = third coordinate axis; k=2, n=3
  double z1 = 0;   // height where the surface meets the unit sphere
};

struct MinimalConeParams {};  // cone over S^1(1/sqrt2) x S^1(1/sqrt2) in S^3; k=3, n=4

// volume of the k-dimensional unit ball, pi^{k/2} / Gamma(k/2 + 1)
double unit_ball_volume(int k);
// area of the unit (k-1)-sphere, k * |B^k|
double unit_sphere_area(int k);

// Largest positive root of c^2 cosh^2(z/c) + z^2 = 1; exists for every
// c in (0,1) and marks where the catenoid leaves the unit ball.
double catenoid_height(double c);

// Exact minimal surfaces in the unit ball with boundary on the unit sphere,
// passing through a designated point. Ground truth for the verifier: each
// family has a closed-form area and exact tangent frames.
class AnalyticSurface {
 public:
  // Disk = (affine k-plane) \cap B^n; through_point must lie on it.
  static AnalyticSurface flat_disk(const Eigen::VectorXd& basepoint,
                                   const Eigen::MatrixXd& frame,
                                   const Eigen::VectorXd& through_point);
  // The equality configuration: plane through y orthogonal to y.
  static AnalyticSurface equality_disk(const Eigen::VectorXd& y, int k);
  // Catenoid piece |z| <= z1 through the waist point (c, 0, 0).
  static AnalyticSurface catenoid(double c);
  // Cone over the Clifford torus, through the origin.
  static AnalyticSurface clifford_cone();

  int k() const { return k_; }
  int n() const { return n_; }
  const Eigen::VectorXd& through_point() const { return through_; }
  std::string family_name() const;

  double area() const;

  // Quadrature samples of the surface outside B_exclusion(y). Total weight
  // converges to the area of that region as density grows. Cells cut by the
  // exclusion sphere are refined so the punched boundary converges cleanly.
  std::vector<SurfaceSample> sample(int density, double exclusion_radius) const;

  // The slice Sigma \cap \partial B_r(y) with inward conormals.
  std::vector<SliceSample> boundary_slice(double r) const;

  // Points of the surface boundary (all on the unit sphere).
  std::vector<Eigen::VectorXd> boundary_points(int count) const;

  const FlatDiskParams* disk_params() const { return std::get_if<FlatDiskParams>(&params_); }
  const CatenoidPieceParams* catenoid_params() const { return std::get_if<CatenoidPieceParams>(&params_); }

  // flat disk only: distance from the origin to the plane and disk radius
  double plane_distance() const;
  double disk_radius() const;

  // catenoid only: position and tangent frame of the chart (theta, z)
  Eigen::Vector3d catenoid_point(double theta, double z) const;
  Eigen::MatrixXd catenoid_frame(double theta, double z) const;

 private:
  AnalyticSurface() = default;

  std::variant<FlatDiskParams, CatenoidPieceParams, MinimalConeParams> params_;
  Eigen::VectorXd through_;
  Eigen::VectorXd disk_center_;  // closest point of the plane to the origin
  int k_ = 2;
  int n_ = 3;
};

}  // namespace minarea
