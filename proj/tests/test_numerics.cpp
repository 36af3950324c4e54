#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "maslovcw/numerics.hpp"
#include "test_helpers.hpp"

using namespace mcw;
using mcw::testing::random_hermitian;
using mcw::testing::random_matrix;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Entrywise double-loop evaluation, kept independent of gram_matrix.
Eigen::MatrixXcd brute_force_gram(const Frame& frame, const HermitianForm& h) {
  const int k = frame.rank(), n = frame.dim();
  Eigen::MatrixXcd gram(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Complex acc = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          acc += frame.vectors(a, i) * h.matrix(a, b) * std::conj(frame.vectors(b, j));
        }
      }
      gram(i, j) = acc;
    }
  }
  return gram;
}

Eigen::VectorXcd phase_samples(int m, int count, double modulus_wobble = 0.0) {
  Eigen::VectorXcd samples(count);
  for (int j = 0; j < count; ++j) {
    const double psi = kTwoPi * j / count;
    samples[j] = std::exp(Complex(0, m * psi)) * (1.0 + modulus_wobble * std::cos(psi));
  }
  return samples;
}

}  // namespace

TEST_CASE("gram matrix: orthonormal frames and scaling") {
  const HermitianForm id3 = HermitianForm::identity(3);
  Frame basis(Eigen::MatrixXcd::Identity(3, 3).eval());
  CHECK((gram_matrix(basis, id3) - Eigen::MatrixXcd::Identity(3, 3)).norm() == doctest::Approx(0));

  Eigen::MatrixXcd scaled(3, 1);
  scaled << 2.0, 0.0, 0.0;
  const Eigen::MatrixXcd g = gram_matrix(Frame(scaled), id3);
  CHECK(g(0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("gram matrix agrees with the double-loop oracle and is conjugate-symmetric") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Frame frame(random_matrix(rng, 3, 3));
    const HermitianForm h = random_hermitian(rng, 3);
    const Eigen::MatrixXcd g = gram_matrix(frame, h);
    CHECK((g - brute_force_gram(frame, h)).norm() < 1e-14 * (1.0 + g.norm()));
    CHECK((g - g.adjoint()).norm() < 1e-12 * (1.0 + g.norm()));
  }
}

TEST_CASE("gram matrix rejects dimension mismatches") {
  std::mt19937_64 rng(5);
  Frame frame(random_matrix(rng, 3, 2));
  CHECK_THROWS_AS((void)gram_matrix(frame, HermitianForm::identity(4)), Error);
}

TEST_CASE("wedge norm: orthonormal value, degenerate frames, determinant oracle") {
  const HermitianForm id2 = HermitianForm::identity(2);
  CHECK(wedge_norm_sq(Frame(Eigen::MatrixXcd::Identity(2, 2).eval()), id2) ==
        doctest::Approx(1.0));

  Eigen::MatrixXcd repeated(2, 2);
  repeated << 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS((void)wedge_norm_sq(Frame(repeated), id2), Error);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const Frame frame(random_matrix(rng, 3, 2));
    const HermitianForm h = random_hermitian(rng, 3);
    const double oracle = brute_force_gram(frame, h).determinant().real();
    CHECK(wedge_norm_sq(frame, h) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("wedge norm is invariant under real det +-1 basis changes") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const Frame frame(random_matrix(rng, 3, 3));
    const HermitianForm h = random_hermitian(rng, 3);
    Eigen::MatrixXd b(3, 3);
    do {
      for (int i = 0; i < 9; ++i) b(i / 3, i % 3) = dist(rng);
    } while (std::abs(b.determinant()) < 0.2);
    b /= std::pow(std::abs(b.determinant()), 1.0 / 3.0);  // det -> +-1
    const Frame changed((frame.vectors * b.cast<Complex>()).eval());
    CHECK(wedge_norm_sq(changed, h) ==
          doctest::Approx(wedge_norm_sq(frame, h)).epsilon(1e-10));
  }
}

TEST_CASE("wedge pair derivative: zero derivatives and the disk pairing") {
  const HermitianForm id2 = HermitianForm::identity(2);
  std::mt19937_64 rng(41);
  const Frame frame(random_matrix(rng, 2, 2));
  CHECK(std::abs(wedge_pair_derivative(frame, Eigen::MatrixXcd::Zero(2, 2), id2)) == 0.0);

  // k = 1, sigma = e^{i psi}, deriv = i e^{i psi}: pairing equals i.
  Eigen::MatrixXcd sigma(1, 1), deriv(1, 1);
  const double psi = 0.83;
  sigma(0, 0) = std::exp(Complex(0, psi));
  deriv(0, 0) = Complex(0, 1) * sigma(0, 0);
  const Complex pairing = wedge_pair_derivative(Frame(sigma), deriv, HermitianForm::identity(1));
  CHECK(pairing.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pairing.imag() == doctest::Approx(1.0));
}

TEST_CASE("wedge pair derivative matches the Plucker-coordinate oracle (k = 2)") {
  std::mt19937_64 rng(53);
  const int n = 4;
  auto plucker = [n](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    std::map<std::pair<int, int>, Complex> coords;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) coords[{a, b}] = u[a] * v[b] - u[b] * v[a];
    }
    return coords;
  };
  auto lambda2_inner = [n](const std::map<std::pair<int, int>, Complex>& w,
                           const std::map<std::pair<int, int>, Complex>& wp,
                           const HermitianForm& h) {
    Complex acc = 0.0;
    for (const auto& [ab, wab] : w) {
      for (const auto& [cd, wpcd] : wp) {
        const Complex inner = h.matrix(ab.first, cd.first) * h.matrix(ab.second, cd.second) -
                              h.matrix(ab.first, cd.second) * h.matrix(ab.second, cd.first);
        acc += wab * std::conj(wpcd) * inner;
      }
    }
    return acc;
  };
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::MatrixXcd s = random_matrix(rng, n, 2);
    const Eigen::MatrixXcd d = random_matrix(rng, n, 2);
    const HermitianForm h = random_hermitian(rng, n);
    const auto w = plucker(s.col(0), s.col(1));
    std::map<std::pair<int, int>, Complex> grad;
    for (const auto& [ab, v1] : plucker(d.col(0), s.col(1))) grad[ab] += v1;
    for (const auto& [ab, v2] : plucker(s.col(0), d.col(1))) grad[ab] += v2;
    const Complex oracle = lambda2_inner(grad, w, h);
    const Complex value = wedge_pair_derivative(Frame(s), d, h);
    CHECK(std::abs(value - oracle) < 1e-10 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("theta of velocity: disk value, parallel frames, rescaling, orientation flip") {
  const HermitianForm id1 = HermitianForm::identity(1);
  Eigen::MatrixXcd sigma(1, 1), deriv(1, 1);
  sigma(0, 0) = std::exp(Complex(0, 0.4));
  deriv(0, 0) = Complex(0, 1) * sigma(0, 0);
  const Complex theta = theta_of_velocity(Frame(sigma), deriv, id1);
  CHECK(theta.real() == 0.0);
  CHECK(theta.imag() == doctest::Approx(1.0));

  CHECK(std::abs(theta_of_velocity(Frame(sigma), Eigen::MatrixXcd::Zero(1, 1), id1)) == 0.0);

  std::mt19937_64 rng(67);
  const Frame frame(random_matrix(rng, 3, 3));
  const Eigen::MatrixXcd derivs = random_matrix(rng, 3, 3);
  const HermitianForm h = random_hermitian(rng, 3);
  const Complex base = theta_of_velocity(frame, derivs, h);
  // Positive real rescaling of a frame vector leaves theta unchanged
  // (derivative rescaled with it, no d(log f) imaginary part).
  Frame scaled = frame;
  scaled.vectors.col(1) *= 2.5;
  Eigen::MatrixXcd scaled_derivs = derivs;
  scaled_derivs.col(1) *= 2.5;
  CHECK(theta_of_velocity(scaled, scaled_derivs, h).imag() ==
        doctest::Approx(base.imag()).epsilon(1e-12));

  Frame flipped = frame.flipped();
  Eigen::MatrixXcd flipped_derivs = derivs;
  flipped_derivs.col(0) *= -1.0;
  CHECK(theta_of_velocity(flipped, flipped_derivs, h).imag() ==
        doctest::Approx(base.imag()).epsilon(1e-12));
}

TEST_CASE("winding number: canonical examples") {
  CHECK(winding_number(
            PhaseTrack::from_samples(Eigen::VectorXcd::Constant(32, Complex(2.0, 1.0)))) == 0);
  CHECK(winding_number(PhaseTrack::from_samples(phase_samples(1, 64))) == 1);
  // Positive modulus factor does not change the winding.
  CHECK(winding_number(PhaseTrack::from_samples(phase_samples(3, 128, 0.2))) == 3);
}

TEST_CASE("winding number: refinement and zero-sample errors") {
  CHECK_THROWS_AS((void)PhaseTrack::from_samples(phase_samples(3, 8)), Error);
  Eigen::VectorXcd with_zero = phase_samples(1, 32);
  with_zero[5] = 0.0;
  CHECK_THROWS_AS((void)PhaseTrack::from_samples(with_zero), Error);
}

TEST_CASE("winding number properties: products, conjugation, positive factors") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> m_dist(-3, 3);
  for (int trial = 0; trial < 6; ++trial) {
    const int m1 = m_dist(rng), m2 = m_dist(rng);
    const int count = 256;
    const Eigen::VectorXcd a = phase_samples(m1, count, 0.1);
    const Eigen::VectorXcd b = phase_samples(m2, count, 0.15);
    const int wa = winding_number(PhaseTrack::from_samples(a));
    const int wb = winding_number(PhaseTrack::from_samples(b));
    CHECK(winding_number(PhaseTrack::from_samples(a.cwiseProduct(b))) == wa + wb);
    CHECK(winding_number(PhaseTrack::from_samples(a.conjugate())) == -wa);
    Eigen::VectorXcd scaled = a;
    for (int j = 0; j < count; ++j) {
      scaled[j] *= 1.0 + 0.5 * std::sin(kTwoPi * j / count + 0.3);
    }
    CHECK(winding_number(PhaseTrack::from_samples(scaled)) == wa);
  }
}

TEST_CASE("hermitian form validation") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, Complex(0, 1), Complex(0, 1), 1.0;  // symmetric, not Hermitian
  CHECK_THROWS_AS(HermitianForm{bad}, Error);
  Eigen::MatrixXcd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(HermitianForm{indefinite}, Error);
}
