#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "maslovcw/builtins.hpp"
#include "maslovcw/bundle_pair.hpp"
#include "test_helpers.hpp"

using namespace mcw;
using mcw::testing::PolyConnection;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::shared_ptr<const RefSurface> disk(int level) {
  return std::make_shared<RefSurface>(build_surface(SurfaceKind::disk, level));
}

BundlePair rank1_pair(std::shared_ptr<const RefSurface> surface, long m) {
  PairSpec spec;
  spec.name = "rank1_winding";
  spec.m = m;
  return make_builtin_pair(spec, std::move(surface));
}

// Independent winding oracle: mu = 2 * winding(det of the frame samples).
long winding_oracle(const BundlePair& pair, int samples) {
  long mu = 0;
  for (const auto& loop : pair.boundary.loops) {
    Eigen::VectorXcd dets(samples);
    for (int j = 0; j < samples; ++j) {
      dets[j] = loop.frame_of(static_cast<double>(j) / samples).vectors.determinant();
    }
    mu += 2 * winding_number(PhaseTrack::from_samples(dets));
  }
  return mu;
}

}  // namespace

TEST_CASE("curvature trace: flat, linear and random polynomial fields") {
  const auto surface = disk(2);
  BundlePair pair;
  pair.surface = surface;
  pair.k = 2;
  pair.connection = ConnectionField::flat(2);
  pair.metric = MetricField::identity(2);
  CHECK(std::abs(curvature_trace(pair, RefPoint{0.3, -0.2})) == 0.0);

  // A = x dy Id_k: tr R = k, symbolic exterior derivative oracle.
  for (int k : {1, 3}) {
    BundlePair linear;
    linear.surface = surface;
    linear.k = k;
    linear.metric = MetricField::identity(k);
    linear.connection.k = k;
    linear.connection.coefficients = [k](const RefPoint& p) {
      return std::make_pair(Eigen::MatrixXcd::Zero(k, k).eval(),
                            (p.x * Eigen::MatrixXcd::Identity(k, k)).eval());
    };
    const Complex value = curvature_trace(linear, RefPoint{0.1, 0.4});
    CHECK(value.real() == doctest::Approx(k).epsilon(1e-8));
    CHECK(value.imag() == doctest::Approx(0.0).epsilon(1e-10));
  }

  for (std::uint64_t seed : {3ull, 11ull}) {
    const PolyConnection conn = PolyConnection::random(3, seed, 0.5);
    BundlePair random_pair;
    random_pair.surface = surface;
    random_pair.k = 3;
    random_pair.metric = MetricField::identity(3);
    random_pair.connection = conn.field();
    for (const auto& probe : {RefPoint{0.2, 0.1}, RefPoint{-0.4, 0.5}, RefPoint{0.0, -0.7}}) {
      const Complex fd = curvature_trace(random_pair, probe);
      const Complex exact = conn.exact_curvature_trace(probe.x, probe.y);
      CHECK(std::abs(fd - exact) < 1e-6 * (1.0 + std::abs(exact)));
    }
  }

  CHECK_THROWS_AS((void)curvature_trace(pair, RefPoint{0, 0}, 1e-10), Error);
}

TEST_CASE("boundary theta: disk example, constant frames, winding frames") {
  const auto surface = disk(3);
  PairSpec spec;
  spec.name = "disk_example";
  const BundlePair example = make_builtin_pair(spec, surface);
  const auto theta = boundary_theta(example, 0, 128);
  for (const Complex& v : theta) {
    CHECK(v.real() == 0.0);
    // Loop parameter t runs over [0,1): theta(d/dt) = 2 pi * theta(d/dpsi).
    CHECK(v.imag() / kTwoPi == doctest::Approx(1.0).epsilon(1e-6));
  }

  PairSpec trivial;
  trivial.name = "trivial";
  const BundlePair constant = make_builtin_pair(trivial, surface);
  for (const Complex& v : boundary_theta(constant, 0, 64)) {
    CHECK(std::abs(v) == 0.0);
  }

  for (long m : {-2L, 3L}) {
    const BundlePair pair = rank1_pair(surface, m);
    for (const Complex& v : boundary_theta(pair, 0, 256)) {
      CHECK(v.imag() / kTwoPi == doctest::Approx(double(m)).epsilon(1e-5));
    }
  }
}

TEST_CASE("boundary theta refuses non-unitary connections") {
  const auto surface = disk(2);
  BundlePair pair;
  pair.surface = surface;
  pair.k = 1;
  pair.metric = MetricField::identity(1);
  pair.connection.k = 1;
  pair.connection.unitary = true;  // flagged, but Hermitian rather than skew
  pair.connection.reference_metric = MetricField::identity(1);
  pair.connection.coefficients = [](const RefPoint& p) {
    Eigen::MatrixXcd a(1, 1);
    a(0, 0) = p.x;
    return std::make_pair(a, a);
  };
  PairSpec spec;
  spec.name = "trivial";
  pair.boundary = make_builtin_pair(spec, surface).boundary;
  CHECK_THROWS_AS((void)boundary_theta(pair, 0, 64), Error);
}

TEST_CASE("maslov routes on the disk example") {
  PairSpec spec;
  spec.name = "disk_example";
  const BundlePair pair = make_builtin_pair(spec, disk(4));
  const ChernWeilResult cw = maslov_chern_weil(pair, QuadratureRule::standard(), 256);
  CHECK(std::abs(cw.mu - 2.0) < 1e-6);
  CHECK(maslov_topological(pair, 256) == 2);
}

TEST_CASE("trivial pair has exactly zero index") {
  PairSpec spec;
  spec.name = "trivial";
  const BundlePair pair = make_builtin_pair(spec, disk(3));
  CHECK(maslov_chern_weil(pair, QuadratureRule::standard(), 128).mu == 0.0);
  CHECK(maslov_topological(pair, 128) == 0);
}

TEST_CASE("rank-1 winding pairs: mu = 2m against the winding oracle") {
  const auto surface = disk(4);
  for (long m = -2; m <= 3; ++m) {
    const BundlePair pair = rank1_pair(surface, m);
    const double mu = maslov_chern_weil(pair, QuadratureRule::standard(), 256).mu;
    CHECK(mu == doctest::Approx(2.0 * m).epsilon(1e-6));
    CHECK(winding_oracle(pair, 256) == 2 * m);
    CHECK(maslov_topological(pair, 256) == 2 * m);
  }
}

TEST_CASE("rank-k winding pairs: mu = 2mk") {
  const auto surface = disk(3);
  for (int k : {2, 3}) {
    for (long m : {-1L, 2L}) {
      PairSpec spec;
      spec.name = "rankk_winding";
      spec.rank = k;
      spec.m = m;
      const BundlePair pair = make_builtin_pair(spec, surface);
      CHECK(maslov_topological(pair, 256) == 2 * m * k);
      CHECK(maslov_chern_weil(pair, QuadratureRule::standard(), 256).mu ==
            doctest::Approx(2.0 * m * k).epsilon(1e-5));
    }
  }
}

TEST_CASE("annulus pairs sum the loop windings") {
  PairSpec spec;
  spec.name = "annulus_winding";
  spec.m_outer = 2;
  spec.m_inner = 1;
  const auto surface = std::make_shared<RefSurface>(build_surface(SurfaceKind::annulus, 3));
  const BundlePair pair = make_builtin_pair(spec, surface);
  CHECK(maslov_topological(pair, 256) == 6);
  CHECK(maslov_chern_weil(pair, QuadratureRule::standard(), 256).mu ==
        doctest::Approx(6.0).epsilon(1e-5));
}

TEST_CASE("conjugation negates the index") {
  PairSpec spec;
  spec.name = "disk_example";
  const BundlePair pair = make_builtin_pair(spec, disk(3));
  const BundlePair conj = conjugate_pair(pair);
  CHECK(maslov_topological(conj, 256) == -2);
  CHECK(maslov_chern_weil(conj, QuadratureRule::standard(), 256).mu ==
        doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("surface orientation flip negates the index") {
  const RandomPair random = make_random_pair(disk(3), 2, 99);
  const BundlePair flipped = reverse_orientation(random.pair);
  const double mu = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
  const double mu_flipped = maslov_chern_weil(flipped, QuadratureRule::standard(), 256).mu;
  CHECK(std::lround(mu_flipped) == -std::lround(mu));
  CHECK(maslov_topological(flipped, 256) == -random.exact_mu);
}

TEST_CASE("det pair: identity on rank one, same index on random rank-2 pairs") {
  PairSpec spec;
  spec.name = "disk_example";
  const BundlePair pair = make_builtin_pair(spec, disk(3));
  const BundlePair det1 = det_pair(pair);
  CHECK(maslov_topological(det1, 256) == maslov_topological(pair, 256));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomPair random = make_random_pair(disk(2), 2, seed);
    const BundlePair det = det_pair(random.pair);
    CHECK(maslov_topological(det, 512) == random.exact_mu);
    CHECK(maslov_topological(random.pair, 512) == random.exact_mu);
  }
}

TEST_CASE("frame orientation flip leaves the index unchanged") {
  const RandomPair random = make_random_pair(disk(3), 2, 12345);
  BundlePair flipped = random.pair;
  auto frame_of = flipped.boundary.loops[0].frame_of;
  flipped.boundary.loops[0].frame_of = [frame_of](double t) { return frame_of(t).flipped(); };
  const double mu = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
  const double mu_flipped = maslov_chern_weil(flipped, QuadratureRule::standard(), 256).mu;
  CHECK(std::abs(mu - mu_flipped) < 1e-3);
}

TEST_CASE("random pairs: integrality and agreement of the two routes") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int rank = 1 + static_cast<int>(seed % 3);
    const RandomPair random = make_random_pair(disk(3), rank, seed);
    const double cw = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
    const int top = maslov_topological(random.pair, 256);
    CHECK(top == random.exact_mu);
    CHECK(std::abs(cw - top) < 2e-3);
  }
}

TEST_CASE("connection independence: adding a unitary field does not move mu") {
  const RandomPair random = make_random_pair(disk(4), 2, 2024);
  const double base = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
  BundlePair shifted = random.pair;
  const ConnectionField extra = make_random_unitary_connection(2, 777, 0.3);
  auto a = random.pair.connection.coefficients;
  auto b = extra.coefficients;
  shifted.connection.coefficients = [a, b](const RefPoint& p) {
    auto [ax, ay] = a(p);
    auto [bx, by] = b(p);
    return std::make_pair((ax + bx).eval(), (ay + by).eval());
  };
  const double moved = maslov_chern_weil(shifted, QuadratureRule::standard(), 256).mu;
  CHECK(std::abs(moved - base) < 1e-3);
}

TEST_CASE("metric independence: conformal-plus-congruence perturbations") {
  const RandomPair random = make_random_pair(disk(4), 2, 4242);
  const double base = maslov_chern_weil(random.pair, QuadratureRule::standard(), 256).mu;
  BundlePair perturbed = random.pair;
  perturbed.metric = make_perturbed_metric(2, 555, 0.2);
  const double moved = maslov_chern_weil(perturbed, QuadratureRule::standard(), 256).mu;
  CHECK(std::abs(moved - base) < 1e-3);
}

TEST_CASE("closed sphere pairs: twice the first Chern number") {
  const auto sphere = std::make_shared<RefSurface>(build_surface(SurfaceKind::closed_sphere, 3));
  for (long d : {-1L, 2L}) {
    PairSpec spec;
    spec.name = "closed_degree";
    spec.degree = d;
    const BundlePair pair = make_builtin_pair(spec, sphere);
    const ChernWeilResult cw = maslov_chern_weil(pair, QuadratureRule::standard(), 64);
    CHECK(cw.mu == doctest::Approx(2.0 * d).epsilon(1e-4));
    CHECK_THROWS_AS((void)maslov_topological(pair, 64), Error);
  }
}

TEST_CASE("non-orientable boundary data is rejected") {
  BundlePair pair;
  pair.surface = disk(2);
  pair.k = 1;
  pair.connection = ConnectionField::flat(1);
  pair.metric = MetricField::identity(1);
  BoundaryFrameLoop mobius;
  mobius.frame_of = [](double t) {
    Eigen::MatrixXcd f(1, 1);
    f(0, 0) = std::exp(Complex(0, std::numbers::pi * t));  // half turn
    return Frame(std::move(f));
  };
  pair.boundary.loops.push_back(std::move(mobius));
  CHECK_THROWS_AS(pair.validate(), Error);
}

TEST_CASE("degenerate boundary frames are rejected") {
  BundlePair pair;
  pair.surface = disk(2);
  pair.k = 2;
  pair.connection = ConnectionField::flat(2);
  pair.metric = MetricField::identity(2);
  BoundaryFrameLoop loop;
  loop.frame_of = [](double) {
    Eigen::MatrixXcd f(2, 2);
    f << 1.0, 1.0, 0.0, 0.0;  // repeated vector
    return Frame(std::move(f));
  };
  pair.boundary.loops.push_back(std::move(loop));
  CHECK_THROWS_AS(pair.validate(), Error);
}

TEST_CASE("maslov report assembles integrality diagnostics") {
  PairSpec spec;
  spec.name = "disk_example";
  const BundlePair pair = make_builtin_pair(spec, disk(3));
  const MaslovReport report = maslov_report(pair, QuadratureRule::standard(), 256, 1e-3);
  CHECK(report.mu_rounded == 2);
  CHECK(report.residual < 1e-6);
  CHECK(report.consistent);
  CHECK(report.mu_by_route.count("cw") == 1);
  CHECK(report.mu_by_route.count("top") == 1);
  CHECK(report.components.count("int_curvature") == 1);
}
