#include "minarea/calibration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "minarea/rng.hpp"

#if MINAREA_HAVE_QUADMATH
#include <quadmath.h>
#endif

namespace minarea {

namespace {

constexpr double kBallTol = 1e-12;       // slack on |x| <= 1
constexpr double kFrameUseTol = 1e-9;    // orthonormality required at use

// base^(m/2) for integer m >= 0 via integer powers and one square root.
double half_power(double base, int m) {
  double p = 1.0;
  for (int i = 0; i < m / 2; ++i) p *= base;
  if (m % 2) p *= std::sqrt(base);
  return p;
}

void check_point(const CalibrationField& f, const Eigen::VectorXd& x,
                 double* dist_sq_out = nullptr) {
  if (x.size() != f.y.size())
    throw std::invalid_argument("point dimension does not match the field");
  const double norm2 = x.squaredNorm();
  if (norm2 > (1.0 + kBallTol) * (1.0 + kBallTol))
    throw std::domain_error("point lies outside the closed unit ball");
  const double d2 = (x - f.y).squaredNorm();
  if (d2 < f.r_min * f.r_min)
    throw std::domain_error("evaluation point coincides with the singular point y");
  if (dist_sq_out) *dist_sq_out = d2;
}

void check_frame(const CalibrationField& f, const TangentFrame& frame) {
  if (frame.n() != f.n() || frame.k() != f.k)
    throw std::invalid_argument("frame shape does not match the field");
  if (frame.gram_deviation() > kFrameUseTol)
    throw std::invalid_argument("frame is not orthonormal");
}

}  // namespace

TangentFrame::TangentFrame(Eigen::MatrixXd basis, double tol) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.rows() < basis_.cols())
    throw std::invalid_argument("frame must have 1 <= k <= n columns");
  if (gram_deviation() > tol)
    throw std::invalid_argument("frame columns are not orthonormal");
}

double TangentFrame::gram_deviation() const {
  const Eigen::MatrixXd g = basis_.transpose() * basis_;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

CalibrationField::CalibrationField(Eigen::VectorXd y_, int k_, double r_min_)
    : y(std::move(y_)), k(k_), r_min(r_min_) {
  if (k < 2) throw std::invalid_argument("submanifold dimension k must be >= 2");
  if (y.size() < k) throw std::invalid_argument("ambient dimension must be >= k");
  if (y.norm() >= 1.0) throw std::invalid_argument("y must be an interior point of the unit ball");
  if (r_min <= 0.0) throw std::invalid_argument("r_min must be positive");
}

Eigen::VectorXd eval_W(const CalibrationField& f, const Eigen::VectorXd& x) {
  double d2 = 0;
  check_point(f, x, &d2);
  const Eigen::VectorXd diff = x - f.y;
  const double Q = 1.0 - 2.0 * x.dot(f.y) + f.y.squaredNorm();
  const double ratio = Q / d2;
  if (f.k == 2)
    return -0.5 * (ratio - 1.0) * diff + 0.5 * std::log(ratio) * f.y;
  return -(half_power(ratio, f.k) - 1.0) / f.k * diff +
         (half_power(ratio, f.k - 2) - 1.0) / (f.k - 2) * f.y;
}

FieldDiagnostics field_diagnostics(const CalibrationField& f,
                                   const Eigen::VectorXd& x,
                                   const TangentFrame& frame) {
  double d2 = 0;
  check_point(f, x, &d2);
  check_frame(f, frame);
  const Eigen::VectorXd diff = x - f.y;
  FieldDiagnostics out;
  out.Q = 1.0 - 2.0 * x.dot(f.y) + f.y.squaredNorm();
  out.dist = std::sqrt(d2);
  out.tangential_y_sq = (frame.basis().transpose() * f.y).squaredNorm();
  out.normal_xy_sq = d2 - (frame.basis().transpose() * diff).squaredNorm();
  return out;
}

namespace {

// The two nonnegative summands of 1 - div, in the overflow-safe form
//   t1 = (Q/d^2)^{k/2} * normal_xy_sq / d^2
//   t2 = (Q/d^2)^{(k-2)/2} * tangential_y_sq / Q.
void deficit_terms(const CalibrationField& f, const FieldDiagnostics& d,
                   double* t1, double* t2) {
  const double d2 = d.dist * d.dist;
  const double ratio = d.Q / d2;
  *t1 = half_power(ratio, f.k) * d.normal_xy_sq / d2;
  *t2 = half_power(ratio, f.k - 2) * d.tangential_y_sq / d.Q;
}

}  // namespace

double divergence_trace(const CalibrationField& f, const Eigen::VectorXd& x,
                        const TangentFrame& frame) {
  const FieldDiagnostics d = field_diagnostics(f, x, frame);
  double t1 = 0, t2 = 0;
  deficit_terms(f, d, &t1, &t2);
  return 1.0 - t1 - t2;
}

double deficit(const CalibrationField& f, const Eigen::VectorXd& x,
               const TangentFrame& frame) {
  const FieldDiagnostics d = field_diagnostics(f, x, frame);
  double t1 = 0, t2 = 0;
  deficit_terms(f, d, &t1, &t2);
  return t1 + t2;
}

double divergence_trace_fd(const CalibrationField& f, const Eigen::VectorXd& x,
                           const TangentFrame& frame, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  check_frame(f, frame);
  double sum = 0;
  for (int i = 0; i < frame.k(); ++i) {
    const Eigen::VectorXd e = frame.basis().col(i);
    const Eigen::VectorXd xp = x + h * e;
    const Eigen::VectorXd xm = x - h * e;
    // eval_W validates that the stencil stays in the domain
    sum += (eval_W(f, xp) - eval_W(f, xm)).dot(e) / (2.0 * h);
  }
  return sum;
}

#if MINAREA_HAVE_QUADMATH

namespace {

using f128 = __float128;

f128 half_power_q(f128 base, int m) {
  f128 p = 1;
  for (int i = 0; i < m / 2; ++i) p *= base;
  if (m % 2) p *= sqrtq(base);
  return p;
}

// W in quadruple precision; inputs are the exact doubles.
void eval_w_q(int k, int n, const f128* y, const f128* x, f128* w) {
  f128 d2 = 0, xy = 0, y2 = 0;
  for (int i = 0; i < n; ++i) {
    const f128 di = x[i] - y[i];
    d2 += di * di;
    xy += x[i] * y[i];
    y2 += y[i] * y[i];
  }
  const f128 Q = 1 - 2 * xy + y2;
  const f128 ratio = Q / d2;
  if (k == 2) {
    const f128 a = -(ratio - 1) / 2;
    const f128 b = logq(ratio) / 2;
    for (int i = 0; i < n; ++i) w[i] = a * (x[i] - y[i]) + b * y[i];
  } else {
    const f128 a = -(half_power_q(ratio, k) - 1) / k;
    const f128 b = (half_power_q(ratio, k - 2) - 1) / (k - 2);
    for (int i = 0; i < n; ++i) w[i] = a * (x[i] - y[i]) + b * y[i];
  }
}

}  // namespace

double divergence_trace_fd_quad(const CalibrationField& f,
                                const Eigen::VectorXd& x,
                                const TangentFrame& frame) {
  check_point(f, x);
  check_frame(f, frame);
  const int n = f.n();
  const int k = f.k;
  constexpr int kMaxDim = 16;
  if (n > kMaxDim) throw std::invalid_argument("ambient dimension too large for the quad path");

  f128 yq[kMaxDim], xq[kMaxDim], xp[kMaxDim], xm[kMaxDim], wp[kMaxDim], wm[kMaxDim];
  for (int i = 0; i < n; ++i) {
    yq[i] = f.y[i];
    xq[i] = x[i];
  }
  const double dist = (x - f.y).norm();
  const f128 h = static_cast<f128>(std::ldexp(dist, -36));

  f128 sum = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < n; ++i) {
      const f128 e = frame.basis()(i, c);
      xp[i] = xq[i] + h * e;
      xm[i] = xq[i] - h * e;
    }
    eval_w_q(k, n, yq, xp, wp);
    eval_w_q(k, n, yq, xm, wm);
    f128 dot = 0;
    for (int i = 0; i < n; ++i)
      dot += (wp[i] - wm[i]) * static_cast<f128>(frame.basis()(i, c));
    sum += dot / (2 * h);
  }
  return static_cast<double>(sum);
}

#else

double divergence_trace_fd_quad(const CalibrationField& f,
                                const Eigen::VectorXd& x,
                                const TangentFrame& frame) {
  // Long-double fallback; less headroom near the singularity.
  const double dist = (x - f.y).norm();
  return divergence_trace_fd(f, x, frame, std::ldexp(dist, -18));
}

#endif

Eigen::VectorXd asymptotic_leading(const CalibrationField& f, const Eigen::VectorXd& x) {
  if (x.size() != f.y.size())
    throw std::invalid_argument("point dimension does not match the field");
  const Eigen::VectorXd diff = x - f.y;
  const double d2 = diff.squaredNorm();
  if (d2 < f.r_min * f.r_min)
    throw std::domain_error("evaluation point coincides with the singular point y");
  const double scale = half_power(1.0 - f.y.squaredNorm(), f.k) / (f.k * half_power(d2, f.k));
  return -scale * diff;
}

TangentFrame random_frame_stream(Rng& rng, int n, int k) {
  if (k > n) throw std::invalid_argument("frame dimension k exceeds ambient dimension n");
  Eigen::MatrixXd basis(n, k);
  for (;;) {
    for (int c = 0; c < k; ++c) basis.col(c) = rng.gaussian_vector(n);
    // modified Gram-Schmidt, two passes
    bool ok = true;
    for (int pass = 0; pass < 2 && ok; ++pass) {
      for (int c = 0; c < k && ok; ++c) {
        for (int p = 0; p < c; ++p)
          basis.col(c) -= basis.col(p).dot(basis.col(c)) * basis.col(p);
        const double norm = basis.col(c).norm();
        if (norm < 1e-8) ok = false;
        else basis.col(c) /= norm;
      }
    }
    if (ok) return TangentFrame(basis);
  }
}

TangentFrame random_frame(int n, int k, std::uint64_t seed) {
  Rng rng(seed, 0xf7a3e);
  return random_frame_stream(rng, n, k);
}

}  // namespace minarea
