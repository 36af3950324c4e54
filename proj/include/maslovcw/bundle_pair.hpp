#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maslovcw/numerics.hpp"
#include "maslovcw/surface.hpp"

namespace mcw {

// Hermitian metric on the trivialized bundle as a field over the surface.
struct MetricField {
  std::function<HermitianForm(const RefPoint&)> at;
  bool constant = true;

  static MetricField identity(int k);
};

// gl(k,C)-valued connection 1-form in reference coordinates: A = A_x dx + A_y dy.
// A unitary connection stays unitary with respect to its reference metric even
// when the pair's metric field is swapped (the theta route is h-independent).
struct ConnectionField {
  int k = 1;
  std::function<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>(const RefPoint&)> coefficients;
  bool unitary = false;  // h-skew-Hermitian (constant h) / h-compatible (varying h)
  std::optional<MetricField> reference_metric;  // defaults to the pair metric

  static ConnectionField flat(int k);
};

// Totally real boundary frames: one closed frame loop per boundary loop.
struct BoundaryFrameLoop {
  std::function<Frame(double)> frame_of;  // t in [0,1), periodic
  int orientation = +1;
};

struct TotallyRealBoundaryData {
  std::vector<BoundaryFrameLoop> loops;
};

// Trivialized rank-k bundle pair (E, F) over a reference surface.
struct BundlePair {
  std::shared_ptr<const RefSurface> surface;
  int k = 1;
  ConnectionField connection;
  MetricField metric;
  TotallyRealBoundaryData boundary;

  // Ranks consistent, one frame loop per boundary loop, frames nondegenerate
  // and periodic (real spans coincide at t=0 and t=1), orientable closure.
  void validate(int probe_samples = 32) const;
};

// Value of the 2-form tr(R) on the reference basis (d/dx, d/dy) at `point`,
// computed as d(tr A) by central differences. tr(A ^ A) vanishes identically
// (trace of a commutator); |tr(A_x A_y - A_y A_x)| is checked as a cross-check.
Complex curvature_trace(const BundlePair& pair, const RefPoint& point, double step = 1e-4);

// Connection 1-form samples theta(gamma'(t_j)) of the normalized wedge of the
// boundary frame along loop `loop_index`, at `samples` uniform parameters.
// Purely imaginary; requires the connection to be flagged unitary.
std::vector<Complex> boundary_theta(const BundlePair& pair, int loop_index, int samples);

// Shared boundary machinery: theta samples for an arbitrary frame loop with a
// connection-along-the-loop and a metric-along-the-loop. Used by the abstract
// route and by the ambient Maslov 1-form.
std::vector<Complex> theta_along_loop(const std::function<Frame(double)>& frame_of,
                                      const std::function<Eigen::MatrixXcd(double)>& connection_of,
                                      const std::function<HermitianForm(double)>& metric_of,
                                      int samples);

struct ChernWeilResult {
  double mu = 0.0;                // (i/pi) (int_Sigma tr R - int_bdry theta)
  double curvature_part = 0.0;    // (i/pi) int_Sigma tr R
  double boundary_part = 0.0;     // -(i/pi) int_bdry theta
};

ChernWeilResult maslov_chern_weil(const BundlePair& pair, const QuadratureRule& rule,
                                  int boundary_samples);

// Topological route: per boundary loop, the winding of the squared normalized
// complex determinant of the frame, summed over loops. Connection-free.
// For k < dim the determinant is taken on the coordinate k-subspace that
// maximizes |det| at t=0, re-anchored whenever |det| decays below 0.1 of its
// running maximum.
int maslov_topological(const BundlePair& pair, int samples);

// Pair with conjugated connection, metric and frames: mu flips sign.
BundlePair conjugate_pair(const BundlePair& pair);

// Rank-1 pair carrying tr A, the induced wedge metric (Gram determinant) and
// the determinant representative of the frames: same Maslov index.
BundlePair det_pair(const BundlePair& pair);

// Same pair over the orientation-reversed surface: mu flips sign.
BundlePair reverse_orientation(const BundlePair& pair);

// Per-route values plus integrality diagnostics.
struct MaslovReport {
  std::map<std::string, double> mu_by_route;
  std::map<std::string, double> components;  // named integrals
  long mu_rounded = 0;
  double residual = 0.0;  // max over routes |mu - mu_rounded|
  bool consistent = true;

  static MaslovReport assemble(const std::map<std::string, double>& by_route, double tolerance,
                               std::map<std::string, double> components = {});
};

MaslovReport maslov_report(const BundlePair& pair, const QuadratureRule& rule,
                           int boundary_samples, double tolerance);

}  // namespace mcw
