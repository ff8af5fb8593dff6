#include "minarea/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "minarea/json_writer.hpp"

namespace minarea {

namespace {

constexpr double kGlNode[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGlWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

constexpr double kPinTol = 1e-9;

}  // namespace

double integrate_deficit(const std::vector<SurfaceSample>& samples,
                         const CalibrationField& field, double r) {
  double total = 0;
  for (const auto& s : samples) {
    if ((s.x - field.y).norm() < r)
      throw std::invalid_argument("sample inside the excised ball around y");
    total += s.weight * deficit(field, s.x, TangentFrame(s.frame, 1e-9));
  }
  return total;
}

double min_deficit(const std::vector<SurfaceSample>& samples,
                   const CalibrationField& field) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    lowest = std::min(lowest, deficit(field, s.x, TangentFrame(s.frame, 1e-9)));
  return lowest;
}

double flux_integral(const std::vector<SliceSample>& slice,
                     const CalibrationField& field) {
  double total = 0;
  for (const auto& s : slice)
    total += s.weight * eval_W(field, s.x).dot(s.conormal);
  return total;
}

double equality_residual(const std::vector<SurfaceSample>& samples,
                         const CalibrationField& field) {
  double worst = 0;
  for (const auto& s : samples) {
    const FieldDiagnostics d =
        field_diagnostics(field, s.x, TangentFrame(s.frame, 1e-9));
    worst = std::max(worst, d.normal_xy_sq + d.tangential_y_sq);
  }
  return worst;
}

Extrapolation richardson_extrapolate(const std::vector<LadderPoint>& ladder) {
  if (ladder.size() < 2)
    throw std::invalid_argument("flux ladder needs at least two rungs");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i].r < ladder[i - 1].r))
      throw std::invalid_argument("flux ladder radii must decrease");

  std::vector<LadderPoint> pts = ladder;
  Extrapolation out;
  while (pts.size() >= 3) {
    const size_t m = pts.size();
    const double d1 = std::abs(pts[m - 2].flux - pts[m - 3].flux);
    const double d2 = std::abs(pts[m - 1].flux - pts[m - 2].flux);
    if (d2 > d1 && d1 > 0) {
      pts.pop_back();
      out.dropped_smallest = true;
    } else {
      break;
    }
  }

  const size_t m = pts.size();
  double order = 1.0;
  if (m >= 3) {
    const double d1 = pts[m - 2].flux - pts[m - 3].flux;
    const double d2 = pts[m - 1].flux - pts[m - 2].flux;
    const double rho = pts[m - 3].r / pts[m - 2].r;
    if (std::abs(d2) < 1e-300 || std::abs(d1) < 1e-300) {
      out.value = pts[m - 1].flux;
      out.observed_order = 0;
      return out;
    }
    const double ratio = d1 / d2;
    if (ratio > 0) order = std::clamp(std::log(ratio) / std::log(rho), 0.5, 4.0);
  }
  const double rho_last = pts[m - 2].r / pts[m - 1].r;
  const double d_last = pts[m - 1].flux - pts[m - 2].flux;
  const double denom = std::pow(rho_last, order) - 1.0;
  out.value = pts[m - 1].flux + (std::abs(d_last) < 1e-300 ? 0.0 : d_last / denom);
  out.observed_order = order;
  return out;
}

BoundCheck check_bound(const AnalyticSurface& surface, double tol) {
  BoundCheck out;
  out.area = surface.area();
  out.bound = unit_ball_volume(surface.k()) *
              std::pow(1.0 - surface.through_point().squaredNorm(), 0.5 * surface.k());
  out.margin = out.area - out.bound;
  out.tolerance = tol;
  out.pass = out.margin >= -tol;
  return out;
}

IdentityCheck check_identity(const AnalyticSurface& surface, double r, int density,
                             double tol_rel) {
  const CalibrationField field(surface.through_point(), surface.k());
  const auto samples = surface.sample(density, r);
  IdentityCheck out;
  out.r = r;
  out.density = density;
  out.lhs = integrate_deficit(samples, field, r);
  double punched = 0;
  for (const auto& s : samples) punched += s.weight;
  out.rhs = punched - flux_integral(surface.boundary_slice(r), field);
  out.gap = std::abs(out.lhs - out.rhs);
  out.tolerance = tol_rel;
  out.pass = out.gap <= tol_rel * std::max(1.0, std::abs(out.rhs));
  return out;
}

FluxLimitCheck flux_limit_study(const AnalyticSurface& surface,
                                const std::vector<double>& radii, double tol_rel) {
  const CalibrationField field(surface.through_point(), surface.k());
  FluxLimitCheck out;
  for (double r : radii)
    out.ladder.push_back({r, flux_integral(surface.boundary_slice(r), field)});
  const Extrapolation ex = richardson_extrapolate(out.ladder);
  out.extrapolated = ex.value;
  out.observed_order = ex.observed_order;
  out.dropped_smallest = ex.dropped_smallest;
  out.target = unit_ball_volume(surface.k()) *
               std::pow(1.0 - surface.through_point().squaredNorm(), 0.5 * surface.k());
  out.tolerance = tol_rel;
  out.pass = std::abs(out.extrapolated - out.target) <= tol_rel * out.target;
  return out;
}

// ---------------------------------------------------------------------------
// mesh quadrature

namespace {

// distance from p to the triangle (a,b,c), any ambient dimension
double point_triangle_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::VectorXd ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  const Eigen::VectorXd bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  const Eigen::VectorXd cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const double t = d1 / (d1 - d3);
    return (p - (a + t * ab)).norm();
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const double t = d2 / (d2 - d6);
    return (p - (a + t * ac)).norm();
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + t * (c - b))).norm();
  }
  const double denom = 1.0 / (ab.squaredNorm() * ac.squaredNorm() - ab.dot(ac) * ab.dot(ac));
  const double v = (ac.squaredNorm() * d1 - ab.dot(ac) * d2) * denom;
  const double w = (ab.squaredNorm() * d2 - ab.dot(ac) * d1) * denom;
  return (p - (a + v * ab + w * ac)).norm();
}

struct CornerChart {
  Eigen::VectorXd u1, u2;  // in-plane orthonormal axes at the corner
  double beta = 0;         // opening angle
  Eigen::Vector2d A, B;    // the two other vertices in chart coordinates
};

CornerChart corner_chart(const TriMesh& mesh, int t, int corner_vertex) {
  int c0 = -1;
  for (int e = 0; e < 3; ++e)
    if (mesh.F(t, e) == corner_vertex) c0 = e;
  if (c0 < 0) throw std::logic_error("corner vertex not in triangle");
  const Eigen::VectorXd y = mesh.V.row(corner_vertex).transpose();
  const Eigen::VectorXd a = (mesh.V.row(mesh.F(t, (c0 + 1) % 3)).transpose() - y).eval();
  const Eigen::VectorXd b = (mesh.V.row(mesh.F(t, (c0 + 2) % 3)).transpose() - y).eval();
  CornerChart ch;
  ch.u1 = a / a.norm();
  Eigen::VectorXd w = b - ch.u1.dot(b) * ch.u1;
  if (w.norm() < 1e-300) throw std::runtime_error("degenerate corner at the pinned vertex");
  w -= ch.u1.dot(w) * ch.u1;  // second pass for sliver corners
  ch.u2 = w / w.norm();
  ch.A = Eigen::Vector2d(a.norm(), 0.0);
  ch.B = Eigen::Vector2d(b.dot(ch.u1), b.dot(ch.u2));
  ch.beta = std::atan2(ch.B[1], ch.B[0]);
  if (ch.beta <= 0) throw std::runtime_error("degenerate corner at the pinned vertex");
  return ch;
}

// radius where the ray at angle phi meets the opposite edge
double corner_edge_radius(const CornerChart& ch, double phi) {
  const Eigen::Vector2d d(std::cos(phi), std::sin(phi));
  const Eigen::Vector2d e = ch.B - ch.A;
  const double det = d[0] * (-e[1]) - d[1] * (-e[0]);
  if (std::abs(det) < 1e-300) throw std::runtime_error("degenerate corner geometry");
  const double s = (ch.A[0] * (-e[1]) - ch.A[1] * (-e[0])) / det;
  return s;
}

int pinned_vertex_at(const TriMesh& mesh, const Eigen::VectorXd& y) {
  int best = -1;
  double best_d = kPinTol;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double d = (mesh.V.row(v).transpose() - y).norm();
    if (d <= best_d) {
      best = v;
      best_d = d;
    }
  }
  if (best < 0)
    throw std::invalid_argument(
        "mesh does not pass through y (no vertex within 1e-9 of the prescribed point)");
  return best;
}

}  // namespace

double mesh_slice_max_radius(const TriMesh& mesh, const Eigen::VectorXd& y) {
  const int vy = pinned_vertex_at(mesh, y);
  double r_max = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const bool incident =
        mesh.F(t, 0) == vy || mesh.F(t, 1) == vy || mesh.F(t, 2) == vy;
    if (incident) {
      const CornerChart ch = corner_chart(mesh, t, vy);
      const int probes = 64;
      for (int i = 0; i <= probes; ++i) {
        const double phi = ch.beta * i / probes;
        r_max = std::min(r_max, corner_edge_radius(ch, phi));
      }
    } else {
      const double d = point_triangle_distance(
          y, mesh.V.row(mesh.F(t, 0)).transpose(), mesh.V.row(mesh.F(t, 1)).transpose(),
          mesh.V.row(mesh.F(t, 2)).transpose());
      r_max = std::min(r_max, d);
    }
  }
  return 0.95 * r_max;
}

std::vector<SurfaceSample> mesh_samples(const TriMesh& mesh, const Eigen::VectorXd& y,
                                        int level, double exclusion_radius) {
  if (level < 0 || level > 6) throw std::invalid_argument("mesh quadrature level out of range");
  const int vy = exclusion_radius > 0 ? pinned_vertex_at(mesh, y) : -1;
  std::vector<SurfaceSample> out;

  const int sub = 1 << level;  // subdivision per edge
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (triangle_area(mesh, t) < 1e-300) continue;  // zero-area: contributes nothing
    const bool incident =
        vy >= 0 && (mesh.F(t, 0) == vy || mesh.F(t, 1) == vy || mesh.F(t, 2) == vy);

    if (!incident) {
      if (exclusion_radius > 0) {
        const double d = point_triangle_distance(
            y, mesh.V.row(mesh.F(t, 0)).transpose(), mesh.V.row(mesh.F(t, 1)).transpose(),
            mesh.V.row(mesh.F(t, 2)).transpose());
        if (d < exclusion_radius)
          throw std::invalid_argument(
              "excision radius reaches a triangle that does not touch y; reduce r");
      }
      const Eigen::VectorXd a = mesh.V.row(mesh.F(t, 0)).transpose();
      const Eigen::VectorXd ab = (mesh.V.row(mesh.F(t, 1)).transpose() - a).eval();
      const Eigen::VectorXd ac = (mesh.V.row(mesh.F(t, 2)).transpose() - a).eval();
      const Eigen::MatrixXd frame = frame_of_triangle(mesh, t).basis();
      const double child_weight = triangle_area(mesh, t) / (sub * sub) / 3.0;
      // 3-point symmetric rule on each child of the uniform subdivision
      for (int i = 0; i < sub; ++i) {
        for (int j = 0; i + j < sub; ++j) {
          const int copies = (i + j < sub - 1) ? 2 : 1;
          for (int up = 0; up < copies; ++up) {
            // child triangle corners in barycentric (s,t) coordinates
            Eigen::Vector2d p0(double(i) / sub, double(j) / sub);
            Eigen::Vector2d p1(double(i + 1) / sub, double(j) / sub);
            Eigen::Vector2d p2(double(i) / sub, double(j + 1) / sub);
            if (up == 1) {
              p0 = Eigen::Vector2d(double(i + 1) / sub, double(j) / sub);
              p1 = Eigen::Vector2d(double(i + 1) / sub, double(j + 1) / sub);
              p2 = Eigen::Vector2d(double(i) / sub, double(j + 1) / sub);
            }
            const Eigen::Vector2d pts[3] = {(4.0 * p0 + p1 + p2) / 6.0,
                                            (p0 + 4.0 * p1 + p2) / 6.0,
                                            (p0 + p1 + 4.0 * p2) / 6.0};
            for (const auto& bc : pts) {
              SurfaceSample smp;
              smp.x = a + bc[0] * ab + bc[1] * ac;
              smp.frame = frame;
              smp.weight = child_weight;
              out.push_back(std::move(smp));
            }
          }
        }
      }
      continue;
    }

    // incident triangle: polar coordinates at the corner make the excision
    // boundary a coordinate line
    const CornerChart ch = corner_chart(mesh, t, vy);
    const int nphi = 16 * sub;
    const int ns = 2 * sub;
    Eigen::MatrixXd frame(mesh.n(), 2);
    frame.col(0) = ch.u1;
    frame.col(1) = ch.u2;
    for (int i = 0; i < nphi; ++i) {
      const double phi = ch.beta * (i + 0.5) / nphi;
      const double dphi = ch.beta / nphi;
      const double smax = corner_edge_radius(ch, phi);
      if (smax <= exclusion_radius)
        throw std::invalid_argument("excision radius exceeds an incident triangle; reduce r");
      const Eigen::VectorXd omega = std::cos(phi) * ch.u1 + std::sin(phi) * ch.u2;
      const double panel = (smax - exclusion_radius) / ns;
      for (int pnl = 0; pnl < ns; ++pnl) {
        const double s0 = exclusion_radius + pnl * panel;
        for (int g = 0; g < 4; ++g) {
          const double sv = s0 + 0.5 * panel * (1.0 + kGlNode[g]);
          SurfaceSample smp;
          smp.x = y + sv * omega;
          smp.frame = frame;
          smp.weight = kGlWeight[g] * 0.5 * panel * sv * dphi;
          out.push_back(std::move(smp));
        }
      }
    }
  }
  return out;
}

std::vector<SliceSample> mesh_slice(const TriMesh& mesh, const Eigen::VectorXd& y, double r) {
  if (!(r > 0)) throw std::invalid_argument("slice radius must be positive");
  const int vy = pinned_vertex_at(mesh, y);
  std::vector<SliceSample> out;
  bool any = false;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.F(t, 0) != vy && mesh.F(t, 1) != vy && mesh.F(t, 2) != vy) continue;
    any = true;
    const CornerChart ch = corner_chart(mesh, t, vy);
    const int m = 256;
    for (int i = 0; i < m; ++i) {
      const double phi = ch.beta * (i + 0.5) / m;
      if (corner_edge_radius(ch, phi) <= r)
        throw std::invalid_argument("slice radius exceeds an incident triangle; reduce r");
      const Eigen::VectorXd omega = std::cos(phi) * ch.u1 + std::sin(phi) * ch.u2;
      // conormal: -(x - y) projected to the triangle plane = -omega exactly
      out.push_back({y + r * omega, -omega, r * ch.beta / m});
    }
  }
  if (!any) throw std::invalid_argument("no triangle of the mesh touches y");
  return out;
}

BoundCheck check_bound(const TriMesh& mesh, const Eigen::VectorXd& y, double tol_rel) {
  pinned_vertex_at(mesh, y);  // hypothesis: the mesh passes through y
  BoundCheck out;
  out.area = mesh_area(mesh);
  out.bound = unit_ball_volume(2) * (1.0 - y.squaredNorm());
  out.margin = out.area - out.bound;
  out.tolerance = tol_rel * out.bound;
  out.pass = out.margin >= -out.tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// assembled verification

namespace {

struct SurfaceHooks {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  int k, n;
  Eigen::VectorXd y;
  double area;
  std::function<std::vector<SurfaceSample>(int density, double excl)> sample;
  std::function<std::vector<SliceSample>(double r)> slice;
  double default_identity_r;
  double default_tol_identity = 1e-3;
  int default_density = 48;
  std::vector<double> default_ladder;
  double default_tol_flux;
  double tol_bound_abs;  // resolved absolute bound slack
  double flux_r_max_valid = 0;
};

VerificationReport verify_common(const SurfaceHooks& hooks, const VerifyOptions& opt) {
  VerificationReport rep;
  rep.surface = hooks.name;
  rep.params = hooks.params;
  rep.k = hooks.k;
  rep.n = hooks.n;
  rep.y = hooks.y;
  rep.density = opt.density > 0 ? opt.density : hooks.default_density;

  const CalibrationField field(hooks.y, hooks.k);

  rep.area = hooks.area;
  rep.bound = unit_ball_volume(hooks.k) *
              std::pow(1.0 - hooks.y.squaredNorm(), 0.5 * hooks.k);
  rep.margin = rep.area - rep.bound;
  rep.tol_bound = hooks.tol_bound_abs;
  rep.bound_pass = rep.margin >= -rep.tol_bound;

  rep.identity_r = opt.identity_r > 0 ? opt.identity_r : hooks.default_identity_r;
  rep.tol_identity =
      opt.tol_identity_rel > 0 ? opt.tol_identity_rel : hooks.default_tol_identity;
  const auto samples = hooks.sample(rep.density, rep.identity_r);
  const auto slice = hooks.slice(rep.identity_r);

  rep.deficit_integral = integrate_deficit(samples, field, rep.identity_r);
  rep.deficit_min = min_deficit(samples, field);
  rep.deficit_slack = opt.deficit_slack;
  rep.deficit_pass = rep.deficit_integral >= -opt.deficit_slack;

  double punched_area = 0;
  for (const auto& s : samples) punched_area += s.weight;
  const double flux_at_r = flux_integral(slice, field);
  rep.identity_lhs = rep.deficit_integral;
  rep.identity_rhs = punched_area - flux_at_r;
  rep.identity_gap = std::abs(rep.identity_lhs - rep.identity_rhs);
  rep.identity_pass =
      rep.identity_gap <= rep.tol_identity * std::max(1.0, std::abs(rep.identity_rhs));

  const std::vector<double> ladder =
      opt.r_ladder.empty() ? hooks.default_ladder : opt.r_ladder;
  for (double r : ladder)
    rep.flux_values.push_back({r, flux_integral(hooks.slice(r), field)});
  const Extrapolation ex = richardson_extrapolate(rep.flux_values);
  rep.flux_extrapolated = ex.value;
  rep.flux_observed_order = ex.observed_order;
  rep.flux_dropped_smallest = ex.dropped_smallest;
  rep.flux_limit_target = rep.bound;
  rep.tol_flux = opt.tol_flux_rel > 0 ? opt.tol_flux_rel : hooks.default_tol_flux;
  rep.flux_pass =
      std::abs(rep.flux_extrapolated - rep.flux_limit_target) <= rep.tol_flux * rep.bound;
  rep.flux_r_max_valid = hooks.flux_r_max_valid;

  rep.equality_residual = equality_residual(samples, field);
  rep.equality_threshold = opt.equality_threshold;
  rep.equality_case = rep.equality_residual <= opt.equality_threshold;

  rep.all_pass = rep.bound_pass && rep.identity_pass && rep.flux_pass && rep.deficit_pass;
  return rep;
}

}  // namespace

VerificationReport run_verification(const AnalyticSurface& surface,
                                    const VerifyOptions& options) {
  SurfaceHooks hooks;
  hooks.name = surface.family_name();
  hooks.k = surface.k();
  hooks.n = surface.n();
  hooks.y = surface.through_point();
  hooks.area = surface.area();
  hooks.sample = [&surface](int density, double excl) { return surface.sample(density, excl); };
  hooks.slice = [&surface](double r) { return surface.boundary_slice(r); };
  hooks.tol_bound_abs = options.tol_bound_analytic;

  if (hooks.name == "flat_disk") {
    hooks.params = {{"plane_distance", surface.plane_distance()},
                    {"disk_radius", surface.disk_radius()}};
    hooks.default_density = surface.k() == 2 ? 48 : 8;
    hooks.default_identity_r = 1e-3;
    hooks.default_ladder = {1e-5, 5e-6, 2.5e-6};
    hooks.default_tol_flux = 1e-9;
  } else if (hooks.name == "catenoid") {
    const auto* cat = surface.catenoid_params();
    hooks.params = {{"c", cat->c}, {"z1", cat->z1}};
    hooks.default_density = 48;
    hooks.default_identity_r = 1e-2;
    hooks.default_ladder = {0.04, 0.02, 0.01};
    hooks.default_tol_flux = 5e-3;
  } else {
    hooks.default_density = 12;
    hooks.default_identity_r = 1e-2;
    hooks.default_ladder = {0.04, 0.02, 0.01};
    hooks.default_tol_flux = 5e-3;
  }
  return verify_common(hooks, options);
}

VerificationReport run_verification(const TriMesh& mesh, const Eigen::VectorXd& y,
                                    const VerifyOptions& options) {
  require_valid(mesh, true);
  if (mesh.n() != static_cast<int>(y.size()))
    throw std::invalid_argument("prescribed point dimension does not match the mesh");
  pinned_vertex_at(mesh, y);  // hypothesis: the mesh passes through y

  SurfaceHooks hooks;
  hooks.name = "mesh";
  hooks.k = 2;
  hooks.n = mesh.n();
  hooks.y = y;
  hooks.area = mesh_area(mesh);
  hooks.params = {{"vertices", double(mesh.num_vertices())},
                  {"triangles", double(mesh.num_triangles())}};
  hooks.sample = [&mesh, &y, &options](int, double excl) {
    return mesh_samples(mesh, y, options.mesh_level, excl);
  };
  hooks.slice = [&mesh, &y](double r) { return mesh_slice(mesh, y, r); };

  const double r_safe = mesh_slice_max_radius(mesh, y);
  if (r_safe < 1e-4)
    throw std::invalid_argument("mesh is too fine near y for a meaningful slice radius");
  hooks.flux_r_max_valid = r_safe;
  hooks.default_identity_r = 0.5 * r_safe;
  hooks.default_ladder = {0.8 * r_safe, 0.4 * r_safe, 0.2 * r_safe};
  hooks.default_tol_flux = 0.02;
  hooks.default_tol_identity = 0.02;  // outer-boundary chord flux is O(h^2)
  hooks.tol_bound_abs = options.tol_bound_mesh_rel *
                        (unit_ball_volume(2) * (1.0 - y.squaredNorm()));
  return verify_common(hooks, options);
}

std::string report_to_json(const VerificationReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("kind", "verification");
  w.kv("surface", rep.surface);
  w.key("params").begin_object();
  for (const auto& [name, value] : rep.params) w.kv(name, value);
  w.end_object();
  w.kv("k", rep.k);
  w.kv("n", rep.n);
  w.kv("y", rep.y);
  w.kv("area", rep.area);
  w.kv("bound", rep.bound);
  w.kv("margin", rep.margin);
  w.key("checks").begin_object();
  {
    w.key("bound").begin_object();
    w.kv("tolerance", rep.tol_bound);
    w.kv("pass", rep.bound_pass);
    w.end_object();
    w.key("identity").begin_object();
    w.kv("r", rep.identity_r);
    w.kv("density", rep.density);
    w.kv("lhs", rep.identity_lhs);
    w.kv("rhs", rep.identity_rhs);
    w.kv("gap", rep.identity_gap);
    w.kv("tolerance", rep.tol_identity);
    w.kv("pass", rep.identity_pass);
    w.end_object();
    w.key("flux_limit").begin_object();
    w.kv("target", rep.flux_limit_target);
    w.kv("extrapolated", rep.flux_extrapolated);
    w.kv("observed_order", rep.flux_observed_order);
    w.kv("tolerance", rep.tol_flux);
    w.kv("smallest_dropped", rep.flux_dropped_smallest);
    if (rep.flux_r_max_valid > 0) w.kv("r_max_valid", rep.flux_r_max_valid);
    w.key("ladder").begin_array();
    for (const auto& p : rep.flux_values) {
      w.begin_object();
      w.kv("r", p.r);
      w.kv("flux", p.flux);
      w.end_object();
    }
    w.end_array();
    w.kv("pass", rep.flux_pass);
    w.end_object();
    w.key("deficit").begin_object();
    w.kv("integral", rep.deficit_integral);
    w.kv("min", rep.deficit_min);
    w.kv("slack", rep.deficit_slack);
    w.kv("pass", rep.deficit_pass);
    w.end_object();
    w.key("equality").begin_object();
    w.kv("residual", rep.equality_residual);
    w.kv("threshold", rep.equality_threshold);
    w.kv("is_equality_case", rep.equality_case);
    w.end_object();
  }
  w.end_object();
  w.kv("all_pass", rep.all_pass);
  w.end_object();
  return w.str();
}

std::string ladder_to_csv(const VerificationReport& rep) {
  std::string out = "r,flux\n";
  for (const auto& p : rep.flux_values)
    out += format_double(p.r) + "," + format_double(p.flux) + "\n";
  return out;
}

}  // namespace minarea
