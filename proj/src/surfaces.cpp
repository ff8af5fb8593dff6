#include "minarea/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minarea {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1]
constexpr double kGlNode[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGlWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

constexpr double kConeApexDelta = 1e-3;  // apex neighbourhood never sampled

double clamp_min(double v, double lo) { return v < lo ? lo : v; }

}  // namespace

double unit_ball_volume(int k) {
  if (k < 1) throw std::invalid_argument("dimension must be positive");
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double unit_sphere_area(int k) { return k * unit_ball_volume(k); }

double catenoid_height(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("catenoid waist radius must lie in (0, 1)");
  auto f = [c](double z) {
    const double ch = std::cosh(z / c);
    return c * c * ch * ch + z * z - 1.0;
  };
  double lo = 0.0, hi = 1.0;  // f(0) = c^2 - 1 < 0, f(1) = c^2 cosh^2(1/c) > 0
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AnalyticSurface AnalyticSurface::flat_disk(const Eigen::VectorXd& basepoint,
                                           const Eigen::MatrixXd& frame,
                                           const Eigen::VectorXd& through_point) {
  const int n = static_cast<int>(basepoint.size());
  const int k = static_cast<int>(frame.cols());
  if (frame.rows() != n || through_point.size() != n)
    throw std::invalid_argument("flat disk: inconsistent dimensions");
  if (k < 2 || k > n) throw std::invalid_argument("flat disk: need 2 <= k <= n");
  const Eigen::MatrixXd gram = frame.transpose() * frame;
  if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("flat disk: frame is not orthonormal");

  const Eigen::VectorXd off = through_point - basepoint;
  if ((off - frame * (frame.transpose() * off)).norm() > 1e-10)
    throw std::invalid_argument("flat disk: designated point does not lie on the plane");

  AnalyticSurface s;
  s.k_ = k;
  s.n_ = n;
  s.through_ = through_point;
  s.disk_center_ = basepoint - frame * (frame.transpose() * basepoint);
  const double d = s.disk_center_.norm();
  if (d >= 1.0 - 1e-12)
    throw std::invalid_argument("flat disk: plane does not meet the open unit ball");
  const double rho = std::sqrt(1.0 - d * d);
  if ((through_point - s.disk_center_).norm() > rho + 1e-12)
    throw std::invalid_argument("flat disk: designated point lies outside the unit ball");
  s.params_ = FlatDiskParams{basepoint, frame};
  return s;
}

AnalyticSurface AnalyticSurface::equality_disk(const Eigen::VectorXd& y, int k) {
  const int n = static_cast<int>(y.size());
  if (k < 2 || k > n) throw std::invalid_argument("equality disk: need 2 <= k <= n");
  if (y.norm() >= 1e-15 && k > n - 1)
    throw std::invalid_argument("equality disk: a plane orthogonal to y needs k <= n-1");
  Eigen::MatrixXd frame(n, k);
  if (y.norm() < 1e-15) {
    frame.setZero();
    for (int c = 0; c < k; ++c) frame(c, c) = 1.0;
  } else {
    // orthonormal completion of y/|y|; columns 1..k of the Householder Q
    Eigen::MatrixXd ym = y;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ym);
    const Eigen::MatrixXd q = qr.householderQ();
    frame = q.rightCols(n - 1).leftCols(k);
  }
  return flat_disk(y, frame, y);
}

AnalyticSurface AnalyticSurface::catenoid(double c) {
  AnalyticSurface s;
  s.k_ = 2;
  s.n_ = 3;
  CatenoidPieceParams p;
  p.c = c;
  p.z1 = catenoid_height(c);
  s.params_ = p;
  s.through_ = Eigen::Vector3d(c, 0.0, 0.0);
  s.disk_center_ = Eigen::VectorXd::Zero(3);
  return s;
}

AnalyticSurface AnalyticSurface::clifford_cone() {
  AnalyticSurface s;
  s.k_ = 3;
  s.n_ = 4;
  s.params_ = MinimalConeParams{};
  s.through_ = Eigen::VectorXd::Zero(4);
  s.disk_center_ = Eigen::VectorXd::Zero(4);
  return s;
}

std::string AnalyticSurface::family_name() const {
  if (std::holds_alternative<FlatDiskParams>(params_)) return "flat_disk";
  if (std::holds_alternative<CatenoidPieceParams>(params_)) return "catenoid";
  return "clifford_cone";
}

double AnalyticSurface::plane_distance() const {
  if (!disk_params()) throw std::logic_error("plane_distance: not a flat disk");
  return disk_center_.norm();
}

double AnalyticSurface::disk_radius() const {
  const double d = plane_distance();
  return std::sqrt(1.0 - d * d);
}

double AnalyticSurface::area() const {
  if (disk_params()) {
    const double d = disk_center_.norm();
    return unit_ball_volume(k_) * std::pow(1.0 - d * d, 0.5 * k_);
  }
  if (const auto* cat = catenoid_params()) {
    const double c = cat->c, z1 = cat->z1;
    return 2.0 * M_PI * c * (z1 + 0.5 * c * std::sinh(2.0 * z1 / c));
  }
  return 2.0 * M_PI * M_PI / 3.0;  // cone: link area / k = 2 pi^2 / 3
}

Eigen::Vector3d AnalyticSurface::catenoid_point(double theta, double z) const {
  const auto* cat = catenoid_params();
  if (!cat) throw std::logic_error("catenoid_point: not a catenoid");
  const double r = cat->c * std::cosh(z / cat->c);
  return {r * std::cos(theta), r * std::sin(theta), z};
}

Eigen::MatrixXd AnalyticSurface::catenoid_frame(double theta, double z) const {
  const auto* cat = catenoid_params();
  if (!cat) throw std::logic_error("catenoid_frame: not a catenoid");
  const double sh = std::sinh(z / cat->c);
  const double ch = std::cosh(z / cat->c);
  Eigen::MatrixXd frame(3, 2);
  frame.col(0) << -std::sin(theta), std::cos(theta), 0.0;
  frame.col(1) << sh * std::cos(theta) / ch, sh * std::sin(theta) / ch, 1.0 / ch;
  return frame;
}

namespace {

// --- flat disk ------------------------------------------------------------

// in-plane polar chart centered at the through point; the exclusion circle
// is a coordinate line, so the punched region is integrated exactly
std::vector<SurfaceSample> sample_disk(const AnalyticSurface& s,
                                       const FlatDiskParams& p,
                                       const Eigen::VectorXd& center,
                                       int density, double excl) {
  const int k = static_cast<int>(p.frame.cols());
  const Eigen::VectorXd w = s.through_point() - center;  // in-plane offset
  const double rho = s.disk_radius();
  const double w2 = w.squaredNorm();

  auto smax_along = [&](const Eigen::VectorXd& omega) {
    const double b = w.dot(omega);
    return -b + std::sqrt(b * b + rho * rho - w2);
  };

  std::vector<SurfaceSample> out;
  const int ns = std::max(4, density);

  auto add_ray = [&](const Eigen::VectorXd& omega, double angular_weight) {
    const double smax = smax_along(omega);
    if (smax <= excl) return;
    const double panel = (smax - excl) / ns;
    for (int i = 0; i < ns; ++i) {
      const double a = excl + i * panel;
      for (int g = 0; g < 4; ++g) {
        const double sv = a + 0.5 * panel * (1.0 + kGlNode[g]);
        SurfaceSample smp;
        smp.x = s.through_point() + sv * omega;
        smp.frame = p.frame;
        const double radial = (k == 2) ? sv : sv * sv;
        smp.weight = kGlWeight[g] * 0.5 * panel * radial * angular_weight;
        out.push_back(std::move(smp));
      }
    }
  };

  if (k == 2) {
    const int nphi = std::max(16, 4 * density);
    for (int j = 0; j < nphi; ++j) {
      const double phi = (j + 0.5) * 2.0 * M_PI / nphi;
      const Eigen::VectorXd omega =
          std::cos(phi) * p.frame.col(0) + std::sin(phi) * p.frame.col(1);
      add_ray(omega, 2.0 * M_PI / nphi);
    }
  } else if (k == 3) {
    const int nmu = std::max(4, density / 2);
    const int naz = std::max(8, 2 * density);
    for (int a = 0; a < nmu; ++a) {
      for (int g = 0; g < 4; ++g) {
        const double mu = -1.0 + (a + 0.5 * (1.0 + kGlNode[g])) * 2.0 / nmu;
        const double wmu = kGlWeight[g] / nmu;  // GL panel weight on [-1,1]
        const double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < naz; ++j) {
          const double az = (j + 0.5) * 2.0 * M_PI / naz;
          const Eigen::VectorXd omega = sn * std::cos(az) * p.frame.col(0) +
                                        sn * std::sin(az) * p.frame.col(1) +
                                        mu * p.frame.col(2);
          add_ray(omega, wmu * 2.0 * M_PI / naz);
        }
      }
    }
  } else {
    throw std::invalid_argument("flat disk sampling supports k = 2 and k = 3");
  }
  return out;
}

// --- catenoid ---------------------------------------------------------------

struct CatChart {
  const AnalyticSurface* s;
  double c, z1;
  double dist(double th, double z, const Eigen::VectorXd& y) const {
    return (s->catenoid_point(th, z) - Eigen::Vector3d(y)).norm();
  }
};

// midpoint cells in (theta, z); cells cut by the exclusion sphere are
// refined so the punched boundary error decays with the grid
void cat_emit_cell(const CatChart& ch, const Eigen::VectorXd& y, double excl,
                   double th0, double th1, double za, double zb, int depth,
                   std::vector<SurfaceSample>* out) {
  const double lip = 1.0 + std::cosh(ch.z1 / ch.c);  // speed bound of the chart
  const double half_diag = 0.5 * lip * ((th1 - th0) + (zb - za));
  const double thm = 0.5 * (th0 + th1);
  const double zm = 0.5 * (za + zb);
  const double dm = ch.dist(thm, zm, y);

  const bool fully_outside = dm - half_diag > excl;
  const bool fully_inside = dm + half_diag < excl;
  if (!fully_outside && !fully_inside && depth > 0) {
    cat_emit_cell(ch, y, excl, th0, thm, za, zm, depth - 1, out);
    cat_emit_cell(ch, y, excl, thm, th1, za, zm, depth - 1, out);
    cat_emit_cell(ch, y, excl, th0, thm, zm, zb, depth - 1, out);
    cat_emit_cell(ch, y, excl, thm, th1, zm, zb, depth - 1, out);
    return;
  }
  if (fully_inside || (!fully_outside && dm <= excl)) return;

  const double chv = std::cosh(zm / ch.c);
  SurfaceSample smp;
  smp.x = ch.s->catenoid_point(thm, zm);
  smp.frame = ch.s->catenoid_frame(thm, zm);
  smp.weight = ch.c * chv * chv * (th1 - th0) * (zb - za);
  out->push_back(std::move(smp));
}

std::vector<SurfaceSample> sample_catenoid(const AnalyticSurface& s,
                                           const CatenoidPieceParams& p,
                                           int density, double excl) {
  const int nth = std::max(32, 16 * density);
  const int nz = std::max(16, 8 * density);
  CatChart ch{&s, p.c, p.z1};
  const Eigen::VectorXd y = s.through_point();
  std::vector<SurfaceSample> out;
  out.reserve(static_cast<size_t>(nth) * nz);
  for (int i = 0; i < nth; ++i) {
    const double th0 = i * 2.0 * M_PI / nth;
    const double th1 = (i + 1) * 2.0 * M_PI / nth;
    for (int j = 0; j < nz; ++j) {
      const double za = -p.z1 + j * 2.0 * p.z1 / nz;
      const double zb = -p.z1 + (j + 1) * 2.0 * p.z1 / nz;
      cat_emit_cell(ch, y, excl, th0, th1, za, zb, excl > 0 ? 6 : 0, &out);
    }
  }
  return out;
}

// --- Clifford cone ----------------------------------------------------------

Eigen::VectorXd cone_dir(double u, double v) {
  Eigen::VectorXd w(4);
  const double s = 1.0 / std::sqrt(2.0);
  w << s * std::cos(u), s * std::sin(u), s * std::cos(v), s * std::sin(v);
  return w;
}

Eigen::MatrixXd cone_frame(double u, double v) {
  Eigen::MatrixXd fr(4, 3);
  fr.col(0) = cone_dir(u, v);
  fr.col(1) << -std::sin(u), std::cos(u), 0.0, 0.0;
  fr.col(2) << 0.0, 0.0, -std::sin(v), std::cos(v);
  return fr;
}

std::vector<SurfaceSample> sample_cone(int density, double excl) {
  const double s0 = clamp_min(excl, kConeApexDelta);
  const int nu = std::max(16, 2 * density);
  const int nsp = std::max(4, density / 4);  // radial panels
  std::vector<SurfaceSample> out;
  const double panel = (1.0 - s0) / nsp;
  for (int a = 0; a < nsp; ++a) {
    for (int g = 0; g < 4; ++g) {
      const double sv = s0 + a * panel + 0.5 * panel * (1.0 + kGlNode[g]);
      const double ws = kGlWeight[g] * 0.5 * panel;
      for (int i = 0; i < nu; ++i) {
        const double u = (i + 0.5) * 2.0 * M_PI / nu;
        for (int j = 0; j < nu; ++j) {
          const double v = (j + 0.5) * 2.0 * M_PI / nu;
          SurfaceSample smp;
          smp.x = sv * cone_dir(u, v);
          smp.frame = cone_frame(u, v);
          // volume element s^2/2 ds du dv
          smp.weight = ws * 0.5 * sv * sv * (2.0 * M_PI / nu) * (2.0 * M_PI / nu);
          out.push_back(std::move(smp));
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<SurfaceSample> AnalyticSurface::sample(int density, double exclusion_radius) const {
  if (density < 1) throw std::invalid_argument("sample density must be >= 1");
  if (exclusion_radius < 0) throw std::invalid_argument("exclusion radius must be >= 0");
  if (const auto* disk = disk_params())
    return sample_disk(*this, *disk, disk_center_, density, exclusion_radius);
  if (const auto* cat = catenoid_params())
    return sample_catenoid(*this, *cat, density, exclusion_radius);
  return sample_cone(density, exclusion_radius);
}

std::vector<SliceSample> AnalyticSurface::boundary_slice(double r) const {
  if (!(r > 0)) throw std::invalid_argument("slice radius must be positive");
  std::vector<SliceSample> out;

  if (const auto* disk = disk_params()) {
    const Eigen::VectorXd w = through_ - disk_center_;
    const double rho = disk_radius();
    if (r > 0.98 * (rho - w.norm()))
      throw std::invalid_argument("slice radius too large: sphere leaves the disk");
    if (k_ == 2) {
      const int m = 2048;
      for (int j = 0; j < m; ++j) {
        const double phi = (j + 0.5) * 2.0 * M_PI / m;
        const Eigen::VectorXd omega =
            std::cos(phi) * disk->frame.col(0) + std::sin(phi) * disk->frame.col(1);
        out.push_back({through_ + r * omega, -omega, r * 2.0 * M_PI / m});
      }
    } else if (k_ == 3) {
      const int nmu = 64, naz = 128;
      for (int a = 0; a < nmu; ++a) {
        for (int g = 0; g < 4; ++g) {
          const double mu = -1.0 + (a + 0.5 * (1.0 + kGlNode[g])) * 2.0 / nmu;
          const double wmu = kGlWeight[g] / nmu;
          const double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
          for (int j = 0; j < naz; ++j) {
            const double az = (j + 0.5) * 2.0 * M_PI / naz;
            const Eigen::VectorXd omega = sn * std::cos(az) * disk->frame.col(0) +
                                          sn * std::sin(az) * disk->frame.col(1) +
                                          mu * disk->frame.col(2);
            out.push_back({through_ + r * omega, -omega, r * r * wmu * 2.0 * M_PI / naz});
          }
        }
      }
    } else {
      throw std::invalid_argument("flat disk slices support k = 2 and k = 3");
    }
    return out;
  }

  if (const auto* cat = catenoid_params()) {
    if (r > 0.3 * std::min(cat->c, cat->z1))
      throw std::invalid_argument("slice radius too large for the catenoid chart");
    const int m = 1024;
    const Eigen::Vector3d y3 = through_;
    // star-shaped curve in the chart: bisect the radius along each ray
    std::vector<Eigen::Vector3d> pts(m);
    std::vector<Eigen::Vector2d> prm(m);
    for (int j = 0; j < m; ++j) {
      const double phi = j * 2.0 * M_PI / m;
      const Eigen::Vector2d dir(std::cos(phi) / cat->c, std::sin(phi));
      double lo = 0.0, hi = 2.5 * r;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = (catenoid_point(mid * dir[0], mid * dir[1]) - y3).norm();
        (d < r ? lo : hi) = mid;
      }
      const double t = 0.5 * (lo + hi);
      prm[j] = t * dir;
      pts[j] = catenoid_point(prm[j][0], prm[j][1]);
    }
    for (int j = 0; j < m; ++j) {
      const Eigen::Vector3d& p = pts[j];
      const Eigen::Vector3d prev = pts[(j + m - 1) % m];
      const Eigen::Vector3d next = pts[(j + 1) % m];
      const double weight = 0.5 * ((p - prev).norm() + (next - p).norm());
      const Eigen::MatrixXd frame = catenoid_frame(prm[j][0], prm[j][1]);
      Eigen::Vector3d tau = frame * (frame.transpose() * (next - prev));
      tau.normalize();
      Eigen::Vector3d nu = frame * (frame.transpose() * (y3 - p));
      nu -= nu.dot(tau) * tau;
      nu.normalize();
      out.push_back({p, nu, weight});
    }
    return out;
  }

  // cone: the slice is the link scaled by r; conormal is exactly radial
  if (r >= 1.0) throw std::invalid_argument("slice radius too large for the cone");
  const int m = 128;
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) * 2.0 * M_PI / m;
    for (int j = 0; j < m; ++j) {
      const double v = (j + 0.5) * 2.0 * M_PI / m;
      const Eigen::VectorXd omega = cone_dir(u, v);
      out.push_back({r * omega, -omega,
                     0.5 * r * r * (2.0 * M_PI / m) * (2.0 * M_PI / m)});
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> AnalyticSurface::boundary_points(int count) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  if (const auto* disk = disk_params()) {
    const double rho = disk_radius();
    if (k_ == 2) {
      for (int j = 0; j < count; ++j) {
        const double phi = j * 2.0 * M_PI / count;
        out.push_back(disk_center_ + rho * (std::cos(phi) * disk->frame.col(0) +
                                            std::sin(phi) * disk->frame.col(1)));
      }
    } else {
      const int m = std::max(2, static_cast<int>(std::sqrt(double(count))));
      for (int a = 0; a < m && static_cast<int>(out.size()) < count; ++a) {
        const double mu = -1.0 + (a + 0.5) * 2.0 / m;
        const double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < m && static_cast<int>(out.size()) < count; ++j) {
          const double az = (j + 0.5) * 2.0 * M_PI / m;
          out.push_back(disk_center_ + rho * (sn * std::cos(az) * disk->frame.col(0) +
                                              sn * std::sin(az) * disk->frame.col(1) +
                                              mu * disk->frame.col(2)));
        }
      }
    }
    return out;
  }
  if (const auto* cat = catenoid_params()) {
    for (int j = 0; j < count; ++j) {
      const double phi = j * 4.0 * M_PI / count;
      const double z = (j % 2 == 0) ? cat->z1 : -cat->z1;
      out.push_back(catenoid_point(phi, z));
    }
    return out;
  }
  const int m = std::max(2, static_cast<int>(std::sqrt(double(count))));
  for (int i = 0; i < m && static_cast<int>(out.size()) < count; ++i)
    for (int j = 0; j < m && static_cast<int>(out.size()) < count; ++j)
      out.push_back(cone_dir((i + 0.5) * 2.0 * M_PI / m, (j + 0.5) * 2.0 * M_PI / m));
  return out;
}

}  // namespace minarea
