#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maslovcw/bundle_pair.hpp"
#include "maslovcw/numerics.hpp"
#include "maslovcw/surface.hpp"

namespace mcw {

// Chart-based Kahler geometry. Conventions, fixed once for the whole library:
//   h(u, v)   = u^T H(z) conj(v)          Hermitian metric on T^(1,0) in chart frame
//   g(u, v)   = Re h(u, v)                Riemannian metric (chart tangents as C^n)
//   omega(u,v) = g(Ju, v) = -Im h(u, v)   Kahler form
//   rho       = -i ddbar log det H        Ricci 2-form; rho = i tr R of the
//                                         Chern connection, P = 2 rho.
struct KahlerModel {
  std::string name = "custom";
  int n = 1;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXcd&)> metric_at;
  std::optional<std::function<double(const Eigen::VectorXcd&)>> potential;  // g = ddbar K
  // Analytic Ricci evaluator rho(z; u, v) on chart tangents, if available.
  std::optional<std::function<double(const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                                     const Eigen::VectorXcd&)>>
      ricci_analytic;
  std::optional<double> einstein_constant;  // rho = c * omega
  bool metric_constant = false;

  static KahlerModel flat_cn(int n);
  static KahlerModel fubini_study_cpn(int n);     // H = 2 ddbar log(1+|z|^2), c = n+1
  static KahlerModel round_sphere(double radius);  // H = 4 r^2 / (1+|z|^2)^2, c = 1/r^2
  static KahlerModel from_potential(int n, std::function<double(const Eigen::VectorXcd&)> K,
                                    std::string name = "custom_potential");

  double omega(const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
               const Eigen::VectorXcd& v) const;

  // Validates positivity, the potential reproduction and the Einstein
  // relation on a fixed probe grid.
  void validate() const;
};

// Chern connection coefficients Gamma_j(z), j = 1..n, fixed by the
// compatibility convention Gamma_j^T H = d_{z_j} H (finite differences).
std::vector<Eigen::MatrixXcd> chern_connection(const KahlerModel& model, const Eigen::VectorXcd& z,
                                               double step = 1e-4);

// Ricci 2-form on chart tangents: analytic when the model provides it, else
// -i ddbar log det H by nested central differences.
double ricci_form(const KahlerModel& model, const Eigen::VectorXcd& z, const Eigen::VectorXcd& u,
                  const Eigen::VectorXcd& v, double step = 1e-3);

// Immersion of a reference surface into the chart(s) of a model.
struct ImmersedSurface {
  std::shared_ptr<const RefSurface> surface;
  std::function<Eigen::VectorXcd(const RefPoint&)> map;
  // Differential d iota as a pair of complex n-vectors (d/dx, d/dy); finite
  // differences when absent.
  std::optional<std::function<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>(const RefPoint&)>>
      jacobian;

  std::pair<Eigen::VectorXcd, Eigen::VectorXcd> differential(const RefPoint& p) const;
  void validate(const KahlerModel& model) const;  // rank-2 check on probes
};

// Totally real boundary constraint L with optional analytic mean curvature.
struct TotallyRealConstraint {
  std::string name = "custom";
  int n = 1;
  std::function<Frame(const Eigen::VectorXcd&)> tangent_frame;
  std::function<double(const Eigen::VectorXcd&)> chart_distance;  // 0 on L
  bool is_lagrangian = false;
  std::optional<std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>> mean_curvature;
  std::optional<double> soliton_constant;  // H = c * iota_perp
  // A few points on L with tangent velocities, used for validation probes.
  std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> probes;

  static TotallyRealConstraint circle(double radius, bool mean_curvature_zero = false,
                                      bool soliton = false);
  static TotallyRealConstraint torus(std::vector<double> radii, bool soliton = false);
  static TotallyRealConstraint real_plane(int n);

  void validate(const KahlerModel& model) const;
};

// Closed loop inside the chart (typically on L), parametrized over [0,1).
struct ChartLoop {
  std::function<Eigen::VectorXcd(double)> position;
  std::function<Eigen::VectorXcd(double)> velocity;
};

// Boundary loop `index` of an immersed surface pushed into the chart.
ChartLoop immersed_boundary_loop(const ImmersedSurface& immersed, int index);

// Pullback pair of the immersion: E = iota* TM with the pulled-back Chern
// connection and metric, F spanned by the constraint frames along the boundary.
BundlePair pullback_pair(const KahlerModel& model, const ImmersedSurface& immersed,
                         const TotallyRealConstraint& constraint);

// Maslov 1-form samples along a loop in L: xi_J = -Im <nabla w, w>/|w|^2, the
// real form with i xi_J = -theta for the pullback pair.
std::vector<double> xi_J(const KahlerModel& model, const TotallyRealConstraint& constraint,
                         const ChartLoop& loop, int samples);

// Integral of the sampled 1-form over the unit parameter interval.
double integrate_samples(const std::vector<double>& samples);

struct GeometricMaslovReport {
  double mu_geometric = 0.0;     // (1/2pi) int P - (1/pi) int xi_J
  double mu_pullback_cw = 0.0;   // Chern-Weil route on the pullback pair
  std::optional<int> mu_topological;  // absent for closed surfaces
  long mu_rounded = 0;
  double residual = 0.0;
  bool consistent = true;
  double ricci_integral = 0.0;   // int_Sigma rho  (= int P / 2)
  double xi_integral = 0.0;      // int_bdry xi_J
  double alpha_L = 0.0;          // int_Sigma omega (symplectic area)
  std::optional<double> boundary_H_term;  // int_bdry omega(H, .) when H analytic
};

GeometricMaslovReport maslov_geometric(const KahlerModel& model, const ImmersedSurface& immersed,
                                       const TotallyRealConstraint& constraint,
                                       const QuadratureRule& rule, int boundary_samples,
                                       double tolerance);

// int_bdry omega(H, .) from the analytic mean curvature field.
double lagrangian_boundary_term(const KahlerModel& model, const TotallyRealConstraint& constraint,
                                const ChartLoop& loop, int samples);

// n = 1 only: int k ds of the immersed boundary loop, with k the geodesic
// curvature of the chart metric.
double geodesic_curvature_term(const KahlerModel& model, const ChartLoop& loop, int samples);

struct MonotonicityReport {
  double mu = 0.0;
  double alpha_L = 0.0;   // int omega
  double rho_area = 0.0;  // int rho
  std::optional<double> boundary_H_term;
  // pi*mu - c*alpha_L + int omega(H,.) for Kahler-Einstein models with analytic H.
  std::optional<double> einstein_residual;
  // mu + (2 c_sol / pi) * alpha_L for soliton constraints.
  std::optional<double> soliton_residual;
  bool rho_lagrangian = false;
  std::optional<double> mu_over_rho_area;
};

MonotonicityReport monotonicity_report(const KahlerModel& model, const ImmersedSurface& immersed,
                                       const TotallyRealConstraint& constraint,
                                       const QuadratureRule& rule, int boundary_samples,
                                       double tolerance);

}  // namespace mcw
