#include "maslovcw/numerics.hpp"

#include <cmath>
#include <numbers>

namespace mcw {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::degenerate_frame: return "DegenerateFrame";
    case errc::need_refinement: return "NeedRefinement";
    case errc::zero_sample: return "ZeroSample";
    case errc::step_underflow: return "StepUnderflow";
    case errc::not_unitary: return "NotUnitary";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::unsupported_input: return "UnsupportedInput";
    case errc::non_finite_field: return "NonFiniteField";
    case errc::not_antisymmetric: return "NotAntisymmetric";
    case errc::projection_degenerate: return "ProjectionDegenerate";
    case errc::singular_metric: return "SingularMetric";
    case errc::boundary_off_constraint: return "BoundaryOffConstraint";
    case errc::missing_analytic_h: return "MissingAnalyticH";
    case errc::route_disagreement: return "RouteDisagreement";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

Frame::Frame(Eigen::MatrixXcd v, int orient) : vectors(std::move(v)), orientation(orient) {
  if (vectors.cols() > vectors.rows()) {
    throw Error(errc::dimension_mismatch, "frame has more vectors than the ambient dimension");
  }
  if (orientation != 1 && orientation != -1) {
    throw Error(errc::validation_error, "frame orientation must be +1 or -1");
  }
}

Frame Frame::flipped() const {
  Frame out = *this;
  out.vectors.col(0) *= -1.0;
  out.orientation = -orientation;
  return out;
}

HermitianForm::HermitianForm(Eigen::MatrixXcd m, bool check) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(errc::dimension_mismatch, "Hermitian form matrix must be square");
  }
  if (!check) return;
  const double scale = matrix.norm();
  if ((matrix - matrix.adjoint()).norm() > 1e-12 * std::max(scale, 1.0)) {
    throw Error(errc::validation_error, "Hermitian form is not conjugate-symmetric");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(matrix);
  if (llt.info() != Eigen::Success) {
    throw Error(errc::validation_error, "Hermitian form is not positive definite");
  }
}

HermitianForm HermitianForm::identity(int n) {
  HermitianForm h;
  h.matrix = Eigen::MatrixXcd::Identity(n, n);
  return h;
}

Complex HermitianForm::operator()(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
  if (u.size() != matrix.rows() || v.size() != matrix.rows()) {
    throw Error(errc::dimension_mismatch, "vector length does not match the Hermitian form");
  }
  return u.transpose() * matrix * v.conjugate();
}

Eigen::MatrixXcd gram_matrix(const Frame& frame, const HermitianForm& h) {
  if (frame.dim() != h.dim()) {
    throw Error(errc::dimension_mismatch, "frame vectors do not match the Hermitian form size");
  }
  const Eigen::MatrixXcd& s = frame.vectors;
  // gram(i, j) = sigma_i^T M conj(sigma_j)
  return s.transpose() * h.matrix * s.conjugate();
}

double wedge_norm_sq(const Frame& frame, const HermitianForm& h) {
  const Eigen::MatrixXcd gram = gram_matrix(frame, h);
  const double value = gram.determinant().real();
  double diag_product = 1.0;
  for (int i = 0; i < gram.rows(); ++i) diag_product *= gram(i, i).real();
  if (!(value > 1e-12 * diag_product)) {
    throw Error(errc::degenerate_frame, "frame is numerically degenerate (not totally real)");
  }
  return value;
}

Complex wedge_pair_derivative(const Frame& frame, const Eigen::MatrixXcd& derivs,
                              const HermitianForm& h) {
  if (derivs.rows() != frame.dim() || derivs.cols() != frame.rank()) {
    throw Error(errc::dimension_mismatch, "derivative block does not match the frame shape");
  }
  const Eigen::MatrixXcd gram = gram_matrix(frame, h);
  // Row i of the Gram replaced by (h(deriv_i, sigma_j))_j, summed over i.
  const Eigen::MatrixXcd cross = derivs.transpose() * h.matrix * frame.vectors.conjugate();
  Complex total = 0.0;
  Eigen::MatrixXcd work = gram;
  for (int i = 0; i < frame.rank(); ++i) {
    work.row(i) = cross.row(i);
    total += work.determinant();
    work.row(i) = gram.row(i);
  }
  return total;
}

Complex theta_of_velocity(const Frame& frame, const Eigen::MatrixXcd& derivs,
                          const HermitianForm& h) {
  const double norm_sq = wedge_norm_sq(frame, h);
  const Complex pairing = wedge_pair_derivative(frame, derivs, h);
  return Complex(0.0, pairing.imag() / norm_sq);
}

PhaseTrack PhaseTrack::from_samples(Eigen::VectorXcd samples) {
  const auto m = samples.size();
  if (m < 2) {
    throw Error(errc::need_refinement, "phase track needs at least two samples");
  }
  double max_mod = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) max_mod = std::max(max_mod, std::abs(samples[i]));
  if (max_mod <= 0.0) {
    throw Error(errc::zero_sample, "phase track is identically zero");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(samples[i]) < 1e-13 * max_mod) {
      throw Error(errc::zero_sample,
                  "phase track sample " + std::to_string(i) + " has vanishing modulus");
    }
  }
  PhaseTrack track;
  track.unwrapped_angles.resize(m);
  track.unwrapped_angles[0] = std::arg(samples[0]);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const double jump = std::arg(samples[i + 1] / samples[i]);
    if (!(std::abs(jump) < std::numbers::pi / 2)) {
      throw Error(errc::need_refinement,
                  "phase jump of " + std::to_string(jump) + " at sample " + std::to_string(i) +
                      " exceeds pi/2; refine the loop sampling");
    }
    track.unwrapped_angles[i + 1] = track.unwrapped_angles[i] + jump;
  }
  track.samples = std::move(samples);
  return track;
}

int winding_number(const PhaseTrack& track) {
  const auto m = track.samples.size();
  const double closing = std::arg(track.samples[0] / track.samples[m - 1]);
  if (!(std::abs(closing) < std::numbers::pi / 2)) {
    throw Error(errc::need_refinement, "phase jump across the loop closure exceeds pi/2");
  }
  const double total = track.unwrapped_angles[m - 1] + closing - track.unwrapped_angles[0];
  const double turns = total / (2 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-9) {
    throw Error(errc::need_refinement,
                "track does not close to an integer winding (got " + std::to_string(turns) + ")");
  }
  return static_cast<int>(rounded);
}

}  // namespace mcw
