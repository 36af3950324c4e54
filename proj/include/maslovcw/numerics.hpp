#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "maslovcw/errors.hpp"

namespace mcw {

using Complex = std::complex<double>;

// Ordered list of k complex n-vectors (the columns) spanning a totally real
// subspace, k <= n, together with an orientation of the real span.
struct Frame {
  Eigen::MatrixXcd vectors;  // n x k, column j = sigma_j
  int orientation = +1;

  Frame() = default;
  Frame(Eigen::MatrixXcd v, int orient = +1);

  int dim() const { return static_cast<int>(vectors.rows()); }
  int rank() const { return static_cast<int>(vectors.cols()); }

  // Flips the orientation of the real span (negates the first vector and the
  // orientation sign, so the underlying subspace is unchanged).
  Frame flipped() const;
};

// Positive definite conjugate-symmetric form. Convention: h(u, v) is linear
// in u and conjugate-linear in v, i.e. h(u, v) = u^T M conj(v).
struct HermitianForm {
  Eigen::MatrixXcd matrix;

  HermitianForm() = default;
  explicit HermitianForm(Eigen::MatrixXcd m, bool check = true);

  static HermitianForm identity(int n);

  int dim() const { return static_cast<int>(matrix.rows()); }
  Complex operator()(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
};

// gram(i, j) = h(sigma_i, sigma_j). Conjugate-symmetric for every input.
Eigen::MatrixXcd gram_matrix(const Frame& frame, const HermitianForm& h);

// |sigma_1 ^ ... ^ sigma_k|_h^2 = det(gram_matrix). Throws DegenerateFrame
// when the value drops below 1e-12 times the product of the Gram diagonal.
double wedge_norm_sq(const Frame& frame, const HermitianForm& h);

// <nabla(sigma_1 ^ ... ^ sigma_k), sigma_1 ^ ... ^ sigma_k>_h, expanded by the
// Leibniz rule: sum over i of det(Gram with row i replaced by h(deriv_i, sigma_j)).
// derivs column i is the covariant derivative of frame vector i.
Complex wedge_pair_derivative(const Frame& frame, const Eigen::MatrixXcd& derivs,
                              const HermitianForm& h);

// Connection 1-form of the normalized wedge section evaluated on the velocity
// that produced derivs: theta = i * Im(wedge_pair_derivative) / wedge_norm_sq.
// Purely imaginary by construction; valid when the connection is h-compatible.
Complex theta_of_velocity(const Frame& frame, const Eigen::MatrixXcd& derivs,
                          const HermitianForm& h);

// Nonzero complex samples around a closed loop with their unwrapped arguments.
struct PhaseTrack {
  Eigen::VectorXcd samples;
  Eigen::VectorXd unwrapped_angles;  // same length; cumulative argument

  // Unwraps the sample arguments. Enforces the sampling-density contract
  // (consecutive jumps < pi/2, NeedRefinement otherwise) and rejects samples
  // with modulus below 1e-13 times the largest (ZeroSample).
  static PhaseTrack from_samples(Eigen::VectorXcd samples);
};

// Total change of argument around the closed loop divided by 2*pi. Throws
// NeedRefinement if the closed-up total is not an integer to 1e-9.
int winding_number(const PhaseTrack& track);

}  // namespace mcw
