#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "maslovcw/errors.hpp"
#include "maslovcw/numerics.hpp"

namespace mcw {

enum class SurfaceKind { disk, annulus, closed_sphere, spherical_cap_domain, custom };

SurfaceKind surface_kind_from_string(const std::string& name);
std::string to_string(SurfaceKind kind);

// Point of the reference surface. Planar kinds live in chart 0; the two-chart
// sphere uses charts {0, 1} glued along the unit circle by w = 1/z.
struct RefPoint {
  double x = 0.0;
  double y = 0.0;
  int chart = 0;
};

// Closed boundary loop with an analytic parametrization over t in [0,1).
// Boundary quadrature uses the analytic curve, not the mesh edges.
struct BoundaryLoop {
  std::function<Eigen::Vector2d(double)> position;
  std::function<Eigen::Vector2d(double)> velocity;  // d position / dt
  int chart = 0;
  std::vector<int> mesh_vertices;  // ordered boundary vertex indices
};

// Oriented triangulated reference surface with ordered boundary loops.
struct RefSurface {
  SurfaceKind kind = SurfaceKind::custom;
  int refinement_level = 0;
  Eigen::MatrixX2d vertices;
  std::vector<std::array<int, 3>> triangles;  // positively oriented
  std::vector<int> triangle_chart;            // one entry per triangle
  std::vector<BoundaryLoop> boundary_loops;
  std::vector<std::array<int, 2>> glued_vertices;  // identifications (two-chart sphere)

  int num_charts() const;
  bool closed() const { return boundary_loops.empty(); }

  // Checks triangle orientation and that boundary loops cover exactly the
  // unglued combinatorial boundary with the surface on the left.
  void validate() const;
};

RefSurface build_surface(SurfaceKind kind, int refinement_level);

// V - E + F with glued vertex pairs identified. Combinatorial only.
int euler_characteristic(const RefSurface& surface);

// Barycentric triangle rule (degree >= 2) and Gauss edge rule (degree >= 3).
struct QuadratureRule {
  struct TrianglePoint {
    double b0, b1, b2;  // barycentric coordinates
    double weight;      // weights sum to 1
  };
  struct EdgePoint {
    double t;       // position in [0,1]
    double weight;  // weights sum to 1
  };
  std::vector<TrianglePoint> triangle_rule;
  std::vector<EdgePoint> edge_rule;

  static QuadratureRule standard();
};

// Evaluation of a 2-form: value on an ordered pair of reference tangents at a
// point. Must be antisymmetric in the tangent slots (spot-checked).
using TwoForm =
    std::function<Complex(const RefPoint&, const Eigen::Vector2d&, const Eigen::Vector2d&)>;

// Evaluation of a 1-form on the boundary: value on the loop velocity at a point.
using OneForm = std::function<Complex(const RefPoint&, const Eigen::Vector2d&)>;

Complex integrate_2form(const RefSurface& surface, const TwoForm& field,
                        const QuadratureRule& rule);

// Integral over one closed loop, t from 0 to 1, using the analytic
// parametrization with the composite Gauss edge rule on `segments` panels.
Complex integrate_1form(const BoundaryLoop& loop, const OneForm& field,
                        const QuadratureRule& rule, int segments);

// Default boundary sample count used by routes at a given refinement level.
int default_boundary_samples(int refinement_level);

// Plain-text OFF-style dump for debugging; not load-bearing.
std::string dump_mesh(const RefSurface& surface);

}  // namespace mcw
