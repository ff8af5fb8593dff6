#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace minarea {

// Orthonormal k-frame in R^n, stored as the columns of an n x k matrix.
class TangentFrame {
 public:
  explicit TangentFrame(Eigen::MatrixXd basis, double tol = 1e-12);

  const Eigen::MatrixXd& basis() const { return basis_; }
  int n() const { return static_cast<int>(basis_.rows()); }
  int k() const { return static_cast<int>(basis_.cols()); }

  // max |E^T E - I|, the orthonormality defect
  double gram_deviation() const;

 private:
  Eigen::MatrixXd basis_;
};

// The defining data of the field: a prescribed interior point y of the unit
// ball and the submanifold dimension k >= 2. The ambient dimension is
// y.size(). Evaluations reject points closer to y than r_min.
struct CalibrationField {
  Eigen::VectorXd y;
  int k = 2;
  double r_min = 1e-9;

  CalibrationField(Eigen::VectorXd y_, int k_, double r_min_ = 1e-9);
  int n() const { return static_cast<int>(y.size()); }
};

// Scalars entering the closed-form divergence. Q >= dist^2 > 0 on the
// closed ball minus {y}; equality in the first inequality exactly on the
// unit sphere.
struct FieldDiagnostics {
  double Q = 0;                // 1 - 2<x,y> + |y|^2
  double dist = 0;             // |x - y|
  double tangential_y_sq = 0;  // sum_i <y, e_i>^2
  double normal_xy_sq = 0;     // |x - y|^2 - sum_i <x - y, e_i>^2
};

// The field itself. Two closed forms: a power branch for k >= 3 and a
// logarithmic branch for k = 2 (selected exactly, never by limit).
Eigen::VectorXd eval_W(const CalibrationField& f, const Eigen::VectorXd& x);

FieldDiagnostics field_diagnostics(const CalibrationField& f,
                                   const Eigen::VectorXd& x,
                                   const TangentFrame& frame);

// Tangential divergence sum_i <D_{e_i} W, e_i> in closed form:
//   1 - (Q/d^2)^{k/2} * normal_xy_sq / d^2 - (Q/d^2)^{(k-2)/2} * tangential_y_sq / Q.
// Depends on the frame only through its span. Always <= 1 in exact
// arithmetic.
double divergence_trace(const CalibrationField& f, const Eigen::VectorXd& x,
                        const TangentFrame& frame);

// Independent cross-check of the closed form: central differences of eval_W
// along the frame directions at step h.
double divergence_trace_fd(const CalibrationField& f, const Eigen::VectorXd& x,
                           const TangentFrame& frame, double h);

// Same cross-check in quadruple precision with a step proportional to
// |x - y|. Double-precision differences cannot resolve the trace to 1e-6
// near the singularity (the conditioning grows like dist^-(k+2)); this
// variant stays accurate down to dist ~ 1e-6.
double divergence_trace_fd_quad(const CalibrationField& f,
                                const Eigen::VectorXd& x,
                                const TangentFrame& frame);

// 1 - divergence_trace, computed as the sum of the two nonnegative terms.
double deficit(const CalibrationField& f, const Eigen::VectorXd& x,
               const TangentFrame& frame);

// Leading behaviour of W near y:  -(1-|y|^2)^{k/2} (x-y) / (k |x-y|^k).
Eigen::VectorXd asymptotic_leading(const CalibrationField& f,
                                   const Eigen::VectorXd& x);

// Orthonormalization of k seeded gaussian vectors; rotation-invariant in
// distribution and deterministic per seed.
TangentFrame random_frame(int n, int k, std::uint64_t seed);

class Rng;
// Same construction, drawing from an existing stream.
TangentFrame random_frame_stream(Rng& rng, int n, int k);

}  // namespace minarea
