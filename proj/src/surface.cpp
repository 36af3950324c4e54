#include "maslovcw/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace mcw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int sectors_at(int level) { return 16 << level; }

struct DiskLayout {
  int n_theta;
  int n_rings;
  int vertex(int ring, int j) const {  // ring >= 1
    return 1 + (ring - 1) * n_theta + (j % n_theta + n_theta) % n_theta;
  }
};

// Polar disk mesh: center vertex + n_rings rings of n_theta vertices,
// radius scaled to 1, all triangles counterclockwise.
void append_disk(RefSurface& surf, int level, int chart, double x_offset = 0.0) {
  DiskLayout lay{sectors_at(level), 4 << level};
  const int base = static_cast<int>(surf.vertices.rows());
  const int count = 1 + lay.n_rings * lay.n_theta;
  surf.vertices.conservativeResize(base + count, 2);
  surf.vertices.row(base) << x_offset, 0.0;
  for (int i = 1; i <= lay.n_rings; ++i) {
    const double r = static_cast<double>(i) / lay.n_rings;
    for (int j = 0; j < lay.n_theta; ++j) {
      const double a = kTwoPi * j / lay.n_theta;
      surf.vertices.row(base + lay.vertex(i, j)) << x_offset + r * std::cos(a), r * std::sin(a);
    }
  }
  for (int j = 0; j < lay.n_theta; ++j) {
    surf.triangles.push_back({base, base + lay.vertex(1, j), base + lay.vertex(1, j + 1)});
    surf.triangle_chart.push_back(chart);
  }
  for (int i = 1; i < lay.n_rings; ++i) {
    for (int j = 0; j < lay.n_theta; ++j) {
      const int a = base + lay.vertex(i, j);
      const int b = base + lay.vertex(i, j + 1);
      const int c = base + lay.vertex(i + 1, j);
      const int d = base + lay.vertex(i + 1, j + 1);
      surf.triangles.push_back({a, c, d});
      surf.triangle_chart.push_back(chart);
      surf.triangles.push_back({a, d, b});
      surf.triangle_chart.push_back(chart);
    }
  }
}

std::vector<int> disk_rim(int level, int base) {
  DiskLayout lay{sectors_at(level), 4 << level};
  std::vector<int> rim(lay.n_theta);
  for (int j = 0; j < lay.n_theta; ++j) rim[j] = base + lay.vertex(lay.n_rings, j);
  return rim;
}

RefSurface make_disk(SurfaceKind kind, int level) {
  RefSurface surf;
  surf.kind = kind;
  surf.refinement_level = level;
  append_disk(surf, level, 0);
  BoundaryLoop loop;
  loop.position = [](double t) {
    return Eigen::Vector2d(std::cos(kTwoPi * t), std::sin(kTwoPi * t));
  };
  loop.velocity = [](double t) {
    return Eigen::Vector2d(-kTwoPi * std::sin(kTwoPi * t), kTwoPi * std::cos(kTwoPi * t));
  };
  loop.mesh_vertices = disk_rim(level, 0);
  surf.boundary_loops.push_back(std::move(loop));
  return surf;
}

RefSurface make_annulus(int level) {
  const double r_in = 0.5, r_out = 1.0;
  RefSurface surf;
  surf.kind = SurfaceKind::annulus;
  surf.refinement_level = level;
  const int n_theta = sectors_at(level);
  const int n_cells = 2 << level;
  surf.vertices.resize((n_cells + 1) * n_theta, 2);
  auto vid = [&](int ring, int j) { return ring * n_theta + ((j % n_theta + n_theta) % n_theta); };
  for (int i = 0; i <= n_cells; ++i) {
    const double r = r_in + (r_out - r_in) * i / n_cells;
    for (int j = 0; j < n_theta; ++j) {
      const double a = kTwoPi * j / n_theta;
      surf.vertices.row(vid(i, j)) << r * std::cos(a), r * std::sin(a);
    }
  }
  for (int i = 0; i < n_cells; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = vid(i, j), b = vid(i, j + 1), c = vid(i + 1, j), d = vid(i + 1, j + 1);
      surf.triangles.push_back({a, c, d});
      surf.triangles.push_back({a, d, b});
      surf.triangle_chart.insert(surf.triangle_chart.end(), {0, 0});
    }
  }
  BoundaryLoop outer;
  outer.position = [=](double t) {
    return Eigen::Vector2d(r_out * std::cos(kTwoPi * t), r_out * std::sin(kTwoPi * t));
  };
  outer.velocity = [=](double t) {
    return Eigen::Vector2d(-r_out * kTwoPi * std::sin(kTwoPi * t),
                           r_out * kTwoPi * std::cos(kTwoPi * t));
  };
  for (int j = 0; j < n_theta; ++j) outer.mesh_vertices.push_back(vid(n_cells, j));
  // Inner loop traversed clockwise so the annulus stays on the left.
  BoundaryLoop inner;
  inner.position = [=](double t) {
    return Eigen::Vector2d(r_in * std::cos(-kTwoPi * t), r_in * std::sin(-kTwoPi * t));
  };
  inner.velocity = [=](double t) {
    return Eigen::Vector2d(r_in * kTwoPi * std::sin(-kTwoPi * t),
                           -r_in * kTwoPi * std::cos(-kTwoPi * t));
  };
  inner.mesh_vertices.push_back(vid(0, 0));
  for (int j = n_theta - 1; j >= 1; --j) inner.mesh_vertices.push_back(vid(0, j));
  surf.boundary_loops.push_back(std::move(outer));
  surf.boundary_loops.push_back(std::move(inner));
  return surf;
}

// Two polar disk charts glued along the equator by the transition w = 1/z:
// the chart-1 rim vertex at angle phi is the chart-0 rim vertex at -phi.
RefSurface make_sphere(int level) {
  RefSurface surf;
  surf.kind = SurfaceKind::closed_sphere;
  surf.refinement_level = level;
  append_disk(surf, level, 0);
  const int base1 = static_cast<int>(surf.vertices.rows());
  append_disk(surf, level, 1);
  const auto rim0 = disk_rim(level, 0);
  const auto rim1 = disk_rim(level, base1);
  const int n_theta = sectors_at(level);
  for (int k = 0; k < n_theta; ++k) {
    surf.glued_vertices.push_back({rim0[(n_theta - k) % n_theta], rim1[k]});
  }
  return surf;
}

struct VertexUnion {
  std::vector<int> parent;
  explicit VertexUnion(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

VertexUnion glued_union(const RefSurface& surface) {
  VertexUnion uf(static_cast<int>(surface.vertices.rows()));
  for (const auto& pair : surface.glued_vertices) uf.unite(pair[0], pair[1]);
  return uf;
}

}  // namespace

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "disk") return SurfaceKind::disk;
  if (name == "annulus") return SurfaceKind::annulus;
  if (name == "closed_sphere") return SurfaceKind::closed_sphere;
  if (name == "spherical_cap_domain") return SurfaceKind::spherical_cap_domain;
  if (name == "custom") return SurfaceKind::custom;
  throw Error(errc::unsupported_kind, "unknown surface kind '" + name + "'");
}

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::disk: return "disk";
    case SurfaceKind::annulus: return "annulus";
    case SurfaceKind::closed_sphere: return "closed_sphere";
    case SurfaceKind::spherical_cap_domain: return "spherical_cap_domain";
    case SurfaceKind::custom: return "custom";
  }
  return "custom";
}

int RefSurface::num_charts() const {
  int charts = 1;
  for (int c : triangle_chart) charts = std::max(charts, c + 1);
  return charts;
}

RefSurface build_surface(SurfaceKind kind, int refinement_level) {
  if (refinement_level < 0 || refinement_level > 8) {
    throw Error(errc::validation_error, "refinement_level must lie in [0, 8]");
  }
  switch (kind) {
    case SurfaceKind::disk:
    case SurfaceKind::spherical_cap_domain:
      return make_disk(kind, refinement_level);
    case SurfaceKind::annulus:
      return make_annulus(refinement_level);
    case SurfaceKind::closed_sphere:
      return make_sphere(refinement_level);
    case SurfaceKind::custom:
      break;
  }
  throw Error(errc::unsupported_kind, "build_surface has no builder for this kind");
}

int euler_characteristic(const RefSurface& surface) {
  VertexUnion uf = glued_union(surface);
  std::set<int> verts;
  std::set<std::pair<int, int>> edges;
  for (const auto& tri : surface.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = uf.find(tri[e]);
      const int b = uf.find(tri[(e + 1) % 3]);
      verts.insert(a);
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(surface.triangles.size());
}

void RefSurface::validate() const {
  if (triangle_chart.size() != triangles.size()) {
    throw Error(errc::validation_error, "triangle_chart size mismatch");
  }
  for (size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    const Eigen::Vector2d p0 = vertices.row(tri[0]);
    const Eigen::Vector2d p1 = vertices.row(tri[1]);
    const Eigen::Vector2d p2 = vertices.row(tri[2]);
    const double twice_area =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
    if (!(twice_area > 0.0)) {
      throw Error(errc::validation_error,
                  "triangle " + std::to_string(t) + " is not positively oriented");
    }
  }
  // Directed-edge census after gluing: interior edges are traversed once in
  // each direction; the rest must be covered exactly by the boundary loops in
  // the induced (surface on the left) direction.
  VertexUnion uf = glued_union(*this);
  std::map<std::pair<int, int>, int> directed;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      directed[{uf.find(tri[e]), uf.find(tri[(e + 1) % 3])}] += 1;
    }
  }
  std::set<std::pair<int, int>> boundary;
  for (const auto& [edge, count] : directed) {
    if (count > 1) {
      throw Error(errc::validation_error, "non-manifold directed edge");
    }
    if (!directed.count({edge.second, edge.first})) boundary.insert(edge);
  }
  std::set<std::pair<int, int>> covered;
  for (const auto& loop : boundary_loops) {
    const auto& vs = loop.mesh_vertices;
    for (size_t i = 0; i < vs.size(); ++i) {
      const int a = uf.find(vs[i]);
      const int b = uf.find(vs[(i + 1) % vs.size()]);
      if (!boundary.count({a, b})) {
        throw Error(errc::validation_error,
                    "boundary loop edge is not an induced boundary edge (orientation?)");
      }
      covered.insert({a, b});
    }
  }
  if (covered.size() != boundary.size()) {
    throw Error(errc::validation_error, "boundary loops do not cover the topological boundary");
  }
}

QuadratureRule QuadratureRule::standard() {
  QuadratureRule rule;
  // Degree-2 interior rule.
  rule.triangle_rule = {
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
      {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
  };
  // 4-point Gauss-Legendre mapped to [0,1] (degree 7).
  const double a = 0.3399810435848563, b = 0.8611363115940526;
  const double wa = 0.6521451548625461, wb = 0.3478548451374538;
  rule.edge_rule = {
      {(1.0 - b) / 2.0, wb / 2.0},
      {(1.0 - a) / 2.0, wa / 2.0},
      {(1.0 + a) / 2.0, wa / 2.0},
      {(1.0 + b) / 2.0, wb / 2.0},
  };
  return rule;
}

Complex integrate_2form(const RefSurface& surface, const TwoForm& field,
                        const QuadratureRule& rule) {
  // Antisymmetry spot-check on a few triangles with fixed pseudo-random tangents.
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_unit = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  };
  const size_t checks = std::min<size_t>(surface.triangles.size(), 3);
  for (size_t c = 0; c < checks; ++c) {
    const size_t t = c * (surface.triangles.size() / checks);
    const auto& tri = surface.triangles[t];
    const Eigen::Vector2d p0 = surface.vertices.row(tri[0]);
    const Eigen::Vector2d p1 = surface.vertices.row(tri[1]);
    const Eigen::Vector2d p2 = surface.vertices.row(tri[2]);
    const Eigen::Vector2d q = (p0 + p1 + p2) / 3.0;
    const Eigen::Vector2d u(next_unit(), next_unit());
    const Eigen::Vector2d v(next_unit(), next_unit());
    const RefPoint point{q.x(), q.y(), surface.triangle_chart[t]};
    const Complex fwd = field(point, u, v);
    const Complex bwd = field(point, v, u);
    if (std::abs(fwd + bwd) > 1e-10 * (1.0 + std::abs(fwd))) {
      throw Error(errc::not_antisymmetric, "2-form field is not antisymmetric in its tangents");
    }
  }
  Complex total = 0.0;
  for (size_t t = 0; t < surface.triangles.size(); ++t) {
    const auto& tri = surface.triangles[t];
    const Eigen::Vector2d p0 = surface.vertices.row(tri[0]);
    const Eigen::Vector2d p1 = surface.vertices.row(tri[1]);
    const Eigen::Vector2d p2 = surface.vertices.row(tri[2]);
    const Eigen::Vector2d e1 = p1 - p0;
    const Eigen::Vector2d e2 = p2 - p0;
    Complex acc = 0.0;
    for (const auto& qp : rule.triangle_rule) {
      const Eigen::Vector2d q = qp.b0 * p0 + qp.b1 * p1 + qp.b2 * p2;
      const RefPoint point{q.x(), q.y(), surface.triangle_chart[t]};
      const Complex value = field(point, e1, e2);
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw Error(errc::non_finite_field, "2-form evaluation is not finite");
      }
      acc += qp.weight * value;
    }
    total += 0.5 * acc;
  }
  return total;
}

Complex integrate_1form(const BoundaryLoop& loop, const OneForm& field,
                        const QuadratureRule& rule, int segments) {
  if (segments < 1) {
    throw Error(errc::validation_error, "integrate_1form needs at least one segment");
  }
  const double dt = 1.0 / segments;
  Complex total = 0.0;
  for (int s = 0; s < segments; ++s) {
    for (const auto& node : rule.edge_rule) {
      const double t = (s + node.t) * dt;
      const Eigen::Vector2d p = loop.position(t);
      const Eigen::Vector2d v = loop.velocity(t);
      const RefPoint point{p.x(), p.y(), loop.chart};
      const Complex value = field(point, v);
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw Error(errc::non_finite_field, "1-form evaluation is not finite");
      }
      total += node.weight * dt * value;
    }
  }
  return total;
}

int default_boundary_samples(int refinement_level) { return 16 << refinement_level; }

std::string dump_mesh(const RefSurface& surface) {
  std::ostringstream out;
  out << "OFF\n"
      << surface.vertices.rows() << " " << surface.triangles.size() << " 0\n";
  for (Eigen::Index i = 0; i < surface.vertices.rows(); ++i) {
    out << surface.vertices(i, 0) << " " << surface.vertices(i, 1) << " 0\n";
  }
  for (const auto& tri : surface.triangles) {
    out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  return out.str();
}

}  // namespace mcw
