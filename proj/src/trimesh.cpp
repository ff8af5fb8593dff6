#include "minarea/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "minarea/json_writer.hpp"
#include "minarea/rng.hpp"
#include "minarea/surfaces.hpp"

namespace minarea {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

double triangle_area(const TriMesh& mesh, int t) {
  const Eigen::VectorXd u = (mesh.V.row(mesh.F(t, 1)) - mesh.V.row(mesh.F(t, 0))).transpose();
  const Eigen::VectorXd v = (mesh.V.row(mesh.F(t, 2)) - mesh.V.row(mesh.F(t, 0))).transpose();
  // Gram determinant; valid in any ambient dimension
  const double g = u.squaredNorm() * v.squaredNorm() - u.dot(v) * u.dot(v);
  return 0.5 * std::sqrt(std::max(0.0, g));
}

double mesh_area(const TriMesh& mesh) {
  double total = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) total += triangle_area(mesh, t);
  return total;
}

TangentFrame frame_of_triangle(const TriMesh& mesh, int t) {
  const Eigen::VectorXd u = (mesh.V.row(mesh.F(t, 1)) - mesh.V.row(mesh.F(t, 0))).transpose();
  const Eigen::VectorXd v = (mesh.V.row(mesh.F(t, 2)) - mesh.V.row(mesh.F(t, 0))).transpose();
  const double un = u.norm();
  if (un < 1e-300) throw std::invalid_argument("degenerate triangle: zero edge");
  Eigen::MatrixXd basis(mesh.n(), 2);
  basis.col(0) = u / un;
  Eigen::VectorXd w = v - basis.col(0).dot(v) * basis.col(0);
  if (w.norm() < 1e-14 * v.norm())
    throw std::invalid_argument("degenerate triangle: collinear vertices");
  w -= basis.col(0).dot(w) * basis.col(0);  // second pass for sliver triangles
  basis.col(1) = w / w.norm();
  return TangentFrame(basis, 1e-10);
}

MeshChecks check_mesh(const TriMesh& mesh) {
  MeshChecks out;
  const int nv = mesh.num_vertices();

  std::map<EdgeKey, int> edge_count;
  std::map<EdgeKey, int> directed;  // net orientation count
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.F(t, e), b = mesh.F(t, (e + 1) % 3);
      if (a < 0 || a >= nv || b < 0 || b >= nv) {
        out.issues.push_back("triangle " + std::to_string(t) + " references a missing vertex");
        return out;
      }
      if (a == b) out.issues.push_back("triangle " + std::to_string(t) + " repeats a vertex");
      edge_count[edge_key(a, b)] += 1;
      directed[edge_key(a, b)] += (a < b) ? 1 : -1;
    }
  }
  for (const auto& [key, count] : edge_count) {
    if (count > 2) {
      out.edge_manifold = false;
      out.issues.push_back("edge (" + std::to_string(key.first) + "," +
                           std::to_string(key.second) + ") borders " +
                           std::to_string(count) + " triangles");
    } else if (count == 2 && directed[key] != 0) {
      out.oriented = false;
      out.issues.push_back("inconsistent orientation across edge (" +
                           std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    }
  }

  // boundary edges (exactly one incident triangle) must chain into loops
  std::vector<int> boundary_degree(nv, 0);
  for (const auto& [key, count] : edge_count) {
    if (count == 1) {
      boundary_degree[key.first] += 1;
      boundary_degree[key.second] += 1;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (boundary_degree[v] != 0 && boundary_degree[v] != 2) {
      out.boundary_loops_simple = false;
      out.issues.push_back("boundary vertex " + std::to_string(v) + " has " +
                           std::to_string(boundary_degree[v]) + " boundary edges");
    }
    const bool flagged = v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v];
    if (flagged != (boundary_degree[v] > 0))
      out.issues.push_back("boundary flag of vertex " + std::to_string(v) +
                           " disagrees with the triangulation");
  }

  out.min_angle = M_PI;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (triangle_area(mesh, t) < 1e-300) {
      ++out.degenerate_triangles;
      continue;
    }
    for (int e = 0; e < 3; ++e) {
      const Eigen::VectorXd a =
          (mesh.V.row(mesh.F(t, (e + 1) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const Eigen::VectorXd b =
          (mesh.V.row(mesh.F(t, (e + 2) % 3)) - mesh.V.row(mesh.F(t, e))).transpose();
      const double cosang = a.dot(b) / (a.norm() * b.norm());
      out.min_angle = std::min(out.min_angle, std::acos(std::clamp(cosang, -1.0, 1.0)));
    }
  }

  for (int v = 0; v < nv; ++v) {
    out.max_vertex_norm = std::max(out.max_vertex_norm, mesh.V.row(v).norm());
    if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v])
      out.max_boundary_sphere_dev =
          std::max(out.max_boundary_sphere_dev, std::abs(mesh.V.row(v).norm() - 1.0));
  }
  if (mesh.pinned >= 0) {
    if (mesh.pinned >= nv) {
      out.issues.push_back("pinned vertex index out of range");
    } else if (mesh.pin_target.size() == mesh.V.cols()) {
      out.pin_displacement = (mesh.V.row(mesh.pinned).transpose() - mesh.pin_target).norm();
    } else {
      out.issues.push_back("pin target dimension mismatch");
    }
  }
  return out;
}

void require_valid(const TriMesh& mesh, bool require_ball_containment) {
  const MeshChecks c = check_mesh(mesh);
  if (!c.ok()) throw std::runtime_error("invalid mesh: " + c.issues.front());
  if (require_ball_containment && c.max_vertex_norm > 1.0 + 1e-9)
    throw std::runtime_error("invalid mesh: vertex outside the closed unit ball (|v| = " +
                             format_double(c.max_vertex_norm) + ")");
}

TriMesh load_mesh(const std::string& obj_path, bool require_ball_containment) {
  std::ifstream in(obj_path);
  if (!in) throw std::runtime_error(obj_path + ": cannot open");

  int ambient = 3;
  std::vector<Eigen::VectorXd> verts;
  std::vector<Eigen::Vector3i> faces;
  std::vector<int> face_line;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "#") {
      std::string word;
      ss >> word;
      if (word == "ambient") {
        if (!(ss >> ambient) || ambient < 2)
          parse_fail(obj_path, lineno, "malformed ambient-dimension header");
        if (!verts.empty())
          parse_fail(obj_path, lineno, "ambient-dimension header must precede vertices");
      }
      continue;
    }
    if (tag == "v") {
      Eigen::VectorXd v(ambient);
      for (int i = 0; i < ambient; ++i)
        if (!(ss >> v[i]))
          parse_fail(obj_path, lineno,
                     "vertex needs " + std::to_string(ambient) + " coordinates");
      double extra;
      if (ss >> extra) parse_fail(obj_path, lineno, "too many vertex coordinates");
      verts.push_back(std::move(v));
    } else if (tag == "f") {
      Eigen::Vector3i f;
      for (int i = 0; i < 3; ++i) {
        long idx;
        if (!(ss >> idx)) parse_fail(obj_path, lineno, "face needs 3 vertex indices");
        if (idx == 0)
          parse_fail(obj_path, lineno, "face index 0: OBJ indices are 1-based");
        if (idx < 0) parse_fail(obj_path, lineno, "negative face indices are not supported");
        if (idx > static_cast<long>(verts.size()))
          parse_fail(obj_path, lineno, "face index " + std::to_string(idx) +
                                           " exceeds vertex count " +
                                           std::to_string(verts.size()));
        f[i] = static_cast<int>(idx - 1);
      }
      long extra;
      if (ss >> extra) parse_fail(obj_path, lineno, "only triangles are supported");
      faces.push_back(f);
      face_line.push_back(lineno);
    } else if (tag == "vn" || tag == "vt" || tag == "o" || tag == "g" || tag == "s" ||
               tag == "mtllib" || tag == "usemtl") {
      continue;
    } else {
      parse_fail(obj_path, lineno, "unsupported record '" + tag + "'");
    }
  }
  if (verts.empty()) throw std::runtime_error(obj_path + ": no vertices");

  TriMesh mesh;
  mesh.V.resize(static_cast<int>(verts.size()), ambient);
  for (size_t i = 0; i < verts.size(); ++i) mesh.V.row(static_cast<int>(i)) = verts[i];
  mesh.F.resize(static_cast<int>(faces.size()), 3);
  for (size_t i = 0; i < faces.size(); ++i) mesh.F.row(static_cast<int>(i)) = faces[i];

  // manifoldness at load time, with the offending line in the message
  {
    std::map<EdgeKey, int> edge_count;
    for (size_t t = 0; t < faces.size(); ++t) {
      for (int e = 0; e < 3; ++e) {
        const int a = faces[t][e], b = faces[t][(e + 1) % 3];
        if (a == b) parse_fail(obj_path, face_line[t], "degenerate face (repeated vertex)");
        if (++edge_count[edge_key(a, b)] > 2)
          parse_fail(obj_path, face_line[t], "non-manifold edge (" + std::to_string(a + 1) +
                                                 "," + std::to_string(b + 1) + ")");
      }
    }
    mesh.boundary.assign(verts.size(), 0);
    for (const auto& [key, count] : edge_count)
      if (count == 1) {
        mesh.boundary[key.first] = 1;
        mesh.boundary[key.second] = 1;
      }
  }

  // sidecar metadata
  std::ifstream side(obj_path + ".json");
  if (side) {
    nlohmann::json j;
    try {
      side >> j;
    } catch (const std::exception& e) {
      throw std::runtime_error(obj_path + ".json: " + e.what());
    }
    if (j.contains("boundary")) {
      std::vector<std::uint8_t> flags(verts.size(), 0);
      for (const auto& idx : j["boundary"]) {
        const long i = idx.get<long>();
        if (i < 0 || i >= static_cast<long>(verts.size()))
          throw std::runtime_error(obj_path + ".json: boundary index out of range");
        flags[i] = 1;
      }
      mesh.boundary = std::move(flags);
    }
    if (j.contains("pinned") && !j["pinned"].is_null()) {
      const auto& p = j["pinned"];
      const long idx = p.at("index").get<long>();
      if (idx < 0 || idx >= static_cast<long>(verts.size()))
        throw std::runtime_error(obj_path + ".json: pinned index out of range");
      mesh.pinned = static_cast<int>(idx);
      const auto& yv = p.at("y");
      if (static_cast<int>(yv.size()) != ambient)
        throw std::runtime_error(obj_path + ".json: pin target dimension mismatch");
      mesh.pin_target.resize(ambient);
      for (int i = 0; i < ambient; ++i) mesh.pin_target[i] = yv[i].get<double>();
    }
  }

  require_valid(mesh, require_ball_containment);
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::string& obj_path) {
  std::ofstream out(obj_path);
  if (!out) throw std::runtime_error(obj_path + ": cannot open for writing");
  if (mesh.n() != 3) out << "# ambient " << mesh.n() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << "v";
    for (int c = 0; c < mesh.n(); ++c) out << " " << format_double(mesh.V(v, c));
    out << "\n";
  }
  for (int t = 0; t < mesh.num_triangles(); ++t)
    out << "f " << mesh.F(t, 0) + 1 << " " << mesh.F(t, 1) + 1 << " " << mesh.F(t, 2) + 1
        << "\n";
  out.close();

  JsonWriter w;
  w.begin_object();
  w.key("boundary").begin_array();
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v]) w.value(v);
  w.end_array();
  w.key("pinned");
  if (mesh.pinned >= 0) {
    w.begin_object();
    w.kv("index", mesh.pinned);
    w.kv("y", mesh.pin_target);
    w.end_object();
  } else {
    w.null_value();
  }
  w.end_object();
  std::ofstream sj(obj_path + ".json");
  sj << w.str() << "\n";
}

TriMesh make_disk_mesh(const Eigen::VectorXd& y, int rings, int sectors) {
  if (rings < 1 || sectors < 3) throw std::invalid_argument("disk mesh needs rings >= 1, sectors >= 3");
  const AnalyticSurface disk = AnalyticSurface::equality_disk(y, 2);
  const auto* p = disk.disk_params();
  const double rho = disk.disk_radius();
  const int n = static_cast<int>(y.size());

  TriMesh mesh;
  const int nv = 1 + rings * sectors;
  mesh.V.resize(nv, n);
  mesh.V.row(0) = y.transpose();
  for (int i = 1; i <= rings; ++i) {
    const double s = rho * i / rings;
    for (int j = 0; j < sectors; ++j) {
      const double phi = j * 2.0 * M_PI / sectors;
      mesh.V.row(1 + (i - 1) * sectors + j) =
          (y + s * (std::cos(phi) * p->frame.col(0) + std::sin(phi) * p->frame.col(1)))
              .transpose();
    }
  }
  std::vector<Eigen::Vector3i> faces;
  auto ring_vertex = [&](int i, int j) { return 1 + (i - 1) * sectors + (j % sectors); };
  for (int j = 0; j < sectors; ++j)
    faces.emplace_back(0, ring_vertex(1, j), ring_vertex(1, j + 1));
  for (int i = 1; i < rings; ++i) {
    for (int j = 0; j < sectors; ++j) {
      faces.emplace_back(ring_vertex(i, j), ring_vertex(i + 1, j), ring_vertex(i + 1, j + 1));
      faces.emplace_back(ring_vertex(i, j), ring_vertex(i + 1, j + 1), ring_vertex(i, j + 1));
    }
  }
  mesh.F.resize(static_cast<int>(faces.size()), 3);
  for (size_t t = 0; t < faces.size(); ++t) mesh.F.row(static_cast<int>(t)) = faces[t];

  mesh.boundary.assign(nv, 0);
  for (int j = 0; j < sectors; ++j) mesh.boundary[ring_vertex(rings, j)] = 1;
  mesh.pinned = 0;
  mesh.pin_target = y;
  return mesh;
}

namespace {

TriMesh tube_mesh(double c, int stacks, int slices, bool catenoid_profile) {
  if (stacks < 2 || stacks % 2 != 0 || slices < 3)
    throw std::invalid_argument("tube mesh needs even stacks >= 2 and slices >= 3");
  const double z1 = catenoid_height(c);
  const double rim = c * std::cosh(z1 / c);

  TriMesh mesh;
  const int nv = (stacks + 1) * slices;
  mesh.V.resize(nv, 3);
  for (int i = 0; i <= stacks; ++i) {
    const double z = -z1 + 2.0 * z1 * i / stacks;
    const double r = catenoid_profile ? c * std::cosh(z / c) : rim;
    for (int j = 0; j < slices; ++j) {
      const double phi = j * 2.0 * M_PI / slices;
      mesh.V.row(i * slices + j) << r * std::cos(phi), r * std::sin(phi), z;
    }
  }
  std::vector<Eigen::Vector3i> faces;
  auto vid = [&](int i, int j) { return i * slices + (j % slices); };
  for (int i = 0; i < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      faces.emplace_back(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
      faces.emplace_back(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
    }
  }
  mesh.F.resize(static_cast<int>(faces.size()), 3);
  for (size_t t = 0; t < faces.size(); ++t) mesh.F.row(static_cast<int>(t)) = faces[t];

  mesh.boundary.assign(nv, 0);
  for (int j = 0; j < slices; ++j) {
    mesh.boundary[vid(0, j)] = 1;
    mesh.boundary[vid(stacks, j)] = 1;
  }
  // waist vertex at theta = 0, z = 0
  mesh.pinned = vid(stacks / 2, 0);
  mesh.pin_target = Eigen::Vector3d(c, 0.0, 0.0);
  mesh.V.row(mesh.pinned) = mesh.pin_target.transpose();
  return mesh;
}

}  // namespace

TriMesh make_catenoid_mesh(double c, int stacks, int slices) {
  return tube_mesh(c, stacks, slices, true);
}

TriMesh make_cylinder_mesh(double c, int stacks, int slices) {
  return tube_mesh(c, stacks, slices, false);
}

void jitter_interior(TriMesh& mesh, double amplitude, std::uint64_t seed) {
  Rng rng(seed, 0x71773);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (v < static_cast<int>(mesh.boundary.size()) && mesh.boundary[v]) continue;
    if (v == mesh.pinned) continue;
    for (int c = 0; c < mesh.n(); ++c)
      mesh.V(v, c) += rng.uniform(-amplitude, amplitude);
  }
}

}  // namespace minarea
