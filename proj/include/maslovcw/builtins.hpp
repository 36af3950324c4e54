#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maslovcw/bundle_pair.hpp"
#include "maslovcw/kahler.hpp"

namespace mcw {

// Named abstract pairs.
//
//   disk_example      unit disk, k = 1, flat connection, F = T S^1 (mu = 2)
//   trivial           constant frame, flat connection (mu = 0)
//   rank1_winding     frame e^{i m psi} e1 (mu = 2m)
//   rankk_winding     frame e^{i m psi} (e1..ek) (mu = 2mk)
//   annulus_winding   frames with windings m_outer, m_inner (mu = 2(m_outer+m_inner))
//   random            seeded random pair, see make_random_pair
//   closed_degree     degree-d line bundle over the two-chart sphere (mu = 2d)
struct PairSpec {
  std::string name = "disk_example";
  int rank = 1;
  long m = 1;
  long m_outer = 1;
  long m_inner = 0;
  long degree = 1;
  std::uint64_t seed = 1;
};

BundlePair make_builtin_pair(const PairSpec& spec, std::shared_ptr<const RefSurface> surface);

// Seeded random pair on a surface with boundary: diagonal phase windings
// |m_j| <= 3 composed with a smooth loop of real basis changes, and a random
// h-unitary polynomial connection of degree <= 3. Returns the exact Maslov
// index 2 * sum(m_j) alongside the pair.
struct RandomPair {
  BundlePair pair;
  long exact_mu = 0;
};

RandomPair make_random_pair(std::shared_ptr<const RefSurface> surface, int rank,
                            std::uint64_t seed);

// Random identity-h-skew-Hermitian polynomial connection field (degree <= 3),
// for connection-independence perturbations.
ConnectionField make_random_unitary_connection(int rank, std::uint64_t seed, double amplitude);

// Smooth conformal-plus-congruence metric perturbation of the identity.
MetricField make_perturbed_metric(int rank, std::uint64_t seed, double amplitude);

// Named models: flat_Cn (param n), fubini_study_CP1, round_sphere (radius).
struct ModelSpec {
  std::string name = "flat_Cn";
  int n = 1;
  double radius = 1.0;
};

KahlerModel make_builtin_model(const ModelSpec& spec);

// Named immersions of a reference surface into a model chart.
//
//   scaled_identity   p -> scale * (x + i y), into C^1 / chart (disk kinds)
//   torus_slice       p -> (r1 * scale * (x+iy), c2, ..., cn), |cj| = rj
//   real_slice        p -> (x, y) in R^2 subset C^2
//   chart_identity    per-chart identity (two-chart sphere)
//   adds an interior bump of given amplitude when bump_amplitude > 0
struct ImmersionSpec {
  std::string name = "scaled_identity";
  double scale = 1.0;
  std::vector<double> radii;  // torus_slice
  double bump_amplitude = 0.0;
  std::uint64_t seed = 1;
};

ImmersedSurface make_builtin_immersion(const ImmersionSpec& spec, const ModelSpec& model_spec,
                                       std::shared_ptr<const RefSurface> surface);

// Named constraints: circle (radius; mean_curvature_zero for geodesics of the
// round sphere; soliton for flat self-shrinkers), torus (radii), real_plane.
struct ConstraintSpec {
  std::string name = "circle";
  double radius = 1.0;
  std::vector<double> radii;
  bool mean_curvature_zero = false;  // geodesic: analytic H = 0
  bool drop_mean_curvature = false;  // no analytic H (curved ambient circles)
  bool soliton = false;
};

TotallyRealConstraint make_builtin_constraint(const ConstraintSpec& spec,
                                              const ModelSpec& model_spec);

std::vector<std::string> builtin_summaries();

}  // namespace mcw
