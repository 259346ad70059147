#include "nvfq/qstate.hpp"

#include <doctest.h>

#include <random>

using namespace nvfq;

namespace {

const cd I(0, 1);

Matrix4c random_density(SeedStream& rng) {
  std::normal_distribution<double> n;
  Matrix4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cd(n(rng), n(rng));
  Matrix4c rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("Pauli algebra holds in both qubit conventions") {
  CHECK((spin_ops::sigma_x() * spin_ops::sigma_y() - I * spin_ops::sigma_z()).norm() < 1e-15);
  CHECK((flux_ops::sigma_x() * flux_ops::sigma_y() - I * flux_ops::sigma_z()).norm() < 1e-15);
  CHECK((flux_ops::sigma_y() * flux_ops::sigma_z() - I * flux_ops::sigma_x()).norm() < 1e-15);
  CHECK((spin_ops::raising() * Vector2c(1, 0) - Vector2c(0, 1)).norm() < 1e-15);
  CHECK((flux_ops::raising() * flux_ops::ground() - flux_ops::excited()).norm() < 1e-15);
  CHECK((flux_ops::lowering() * flux_ops::excited() - flux_ops::ground()).norm() < 1e-15);
}

TEST_CASE("sigma_{+-,x} are the x-basis ladder operators") {
  const Matrix2c half_z_minus_iy = (flux_ops::sigma_z() - I * flux_ops::sigma_y()) / 2.0;
  const Matrix2c half_z_plus_iy = (flux_ops::sigma_z() + I * flux_ops::sigma_y()) / 2.0;
  CHECK((flux_ops::raising_x() - half_z_minus_iy).norm() < 1e-15);
  CHECK((flux_ops::lowering_x() - half_z_plus_iy).norm() < 1e-15);
  // sigma_+ = (sx - s_{+,x} + s_{-,x}) / 2
  const Matrix2c rebuilt =
      (flux_ops::sigma_x() - flux_ops::raising_x() + flux_ops::lowering_x()) / 2.0;
  CHECK((flux_ops::raising() - rebuilt).norm() < 1e-15);
}

TEST_CASE("tensor") {
  SUBCASE("identity") {
    CHECK(tensor(Matrix2c::Identity(), Matrix2c::Identity()).isApprox(Matrix4c::Identity()));
  }
  SUBCASE("spin sigma_z on |1,+> has eigenvalue +1") {
    const Vector4c one_plus = Vector4c::Unit(2);
    CHECK((tensor(spin_ops::sigma_z(), Matrix2c::Identity()) * one_plus - one_plus).norm() < 1e-15);
  }
  SUBCASE("sigma_x (x) sigma_x against a hand expansion") {
    // spin sx = [[0,1],[1,0]], flux sx = diag(1,-1) in the working basis
    Matrix4c expected = Matrix4c::Zero();
    expected(0, 2) = 1;
    expected(1, 3) = -1;
    expected(2, 0) = 1;
    expected(3, 1) = -1;
    CHECK((tensor(spin_ops::sigma_x(), flux_ops::sigma_x()) - expected).norm() == 0);
  }
  SUBCASE("dimension mismatch is rejected") {
    Eigen::MatrixXcd three = Eigen::MatrixXcd::Identity(3, 3);
    CHECK_THROWS_AS(tensor(three, Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
  }
  SUBCASE("tensor of Hermitians is Hermitian") {
    const Matrix4c m = tensor(spin_ops::sigma_y(), flux_ops::sigma_y());
    CHECK(hermiticity_error(m) == 0);
  }
}

TEST_CASE("partial_trace") {
  SUBCASE("product state") {
    const Matrix4c rho = Vector4c::Unit(0) * Vector4c::Unit(0).adjoint();
    Matrix2c plus = Matrix2c::Zero();
    plus(0, 0) = 1;
    CHECK((partial_trace(rho, Party::spin) - plus).norm() < 1e-15);
  }
  SUBCASE("maximally entangled state") {
    Vector4c bell = Vector4c::Zero();
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    const Matrix4c rho = bell * bell.adjoint();
    CHECK((partial_trace(rho, Party::spin) - Matrix2c::Identity() / 2.0).norm() < 1e-15);
    CHECK((partial_trace(rho, Party::flux) - Matrix2c::Identity() / 2.0).norm() < 1e-15);
  }
  SUBCASE("random states keep unit trace; the map is linear") {
    SeedStream rng(7);
    for (int k = 0; k < 50; ++k) {
      const Matrix4c a = random_density(rng), b = random_density(rng);
      for (Party p : {Party::spin, Party::flux}) {
        CHECK(std::abs(partial_trace(a, p).trace() - cd(1)) < 1e-12);
        const Matrix2c lhs = partial_trace(Matrix4c(0.3 * a + 0.7 * b), p);
        const Matrix2c rhs = 0.3 * partial_trace(a, p) + 0.7 * partial_trace(b, p);
        CHECK((lhs - rhs).norm() < 1e-14);
      }
    }
  }
  SUBCASE("inverts tensor") {
    const Matrix2c s = Qubit2State<double>::from_angles(0.3, 1.1).density();
    const Matrix2c f = Qubit2State<double>::from_angles(1.2, -0.4).density();
    CHECK((partial_trace(tensor(s, f), Party::flux) - s).norm() < 1e-15);
    CHECK((partial_trace(tensor(s, f), Party::spin) - f).norm() < 1e-15);
  }
}

TEST_CASE("states normalize and reject zero vectors") {
  const Qubit2State<double> q(Vector2c(3, cd(0, 4)));
  CHECK(std::abs(q.amplitudes().squaredNorm() - 1) < 1e-12);
  CHECK_THROWS_AS(Qubit2State<double>(Vector2c(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(JointState<double>(Vector4c::Zero()), std::invalid_argument);
  const JointState<double> j(Vector4c(1, 2, 3, cd(0, 4)));
  CHECK(std::abs(j.amplitudes().squaredNorm() - 1) < 1e-12);

  const auto a = Qubit2State<double>::from_angles(0.7, 2.5);
  CHECK(a.angle() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(a.phase() == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("JointDensityMatrix validates its invariants") {
  Matrix4c rho = Matrix4c::Identity() / 4.0;
  CHECK_NOTHROW(JointDensityMatrix<double>{rho});
  Matrix4c skew = rho;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(JointDensityMatrix<double>{skew}, std::invalid_argument);
  CHECK_THROWS_AS(JointDensityMatrix<double>{Matrix4c(2.0 * rho)}, std::invalid_argument);
  Matrix4c negative = Matrix4c::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(JointDensityMatrix<double>{negative}, std::invalid_argument);
}

TEST_CASE("fidelity") {
  const Qubit2State<double> zero(Vector2c(1, 0));
  CHECK(fidelity(zero.density(), zero) == doctest::Approx(1));
  CHECK(fidelity(Matrix2c(Matrix2c::Identity() / 2.0), Qubit2State<double>::from_angles(0.4, 1))
        == doctest::Approx(0.5));
  // flux-style |+> written in the (|0>,|1>) basis, against |0>
  const Qubit2State<double> plus(Vector2c(1, 1));
  CHECK(fidelity(plus.density(), zero) == doctest::Approx(0.5));

  SeedStream rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto a = haar_random_state(rng), b = haar_random_state(rng);
    const double f = fidelity(a.density(), b);
    CHECK(f >= -1e-12);
    CHECK(f <= 1 + 1e-10);
    CHECK(infidelity(a.amplitudes(), b.amplitudes()) == doctest::Approx(1 - f).epsilon(1e-12));
  }
}

TEST_CASE("Bloch vectors use the spin convention") {
  const Qubit2State<double> zero(Vector2c(1, 0));
  CHECK((bloch_vector(zero.density()) - Vector3d(0, 0, -1)).norm() < 1e-15);
  const Vector3d r(0.3, -0.5, 0.2);
  CHECK((bloch_vector(density_from_bloch(r)) - r).norm() < 1e-15);
  // cos t|0> + e^{ip} sin t|1>: z = -cos 2t, x = sin 2t cos p, y = -sin 2t sin p
  const auto s = Qubit2State<double>::from_angles(0.4, 1.0);
  const Vector3d b = bloch_vector(s.density());
  CHECK(b.z() == doctest::Approx(-std::cos(0.8)));
  CHECK(b.x() == doctest::Approx(std::sin(0.8) * std::cos(1.0)));
  CHECK(b.y() == doctest::Approx(-std::sin(0.8) * std::sin(1.0)));
}

TEST_CASE("haar_random_state") {
  SUBCASE("reproducible for a fixed seed") {
    SeedStream a(42), b(42);
    for (int k = 0; k < 10; ++k)
      CHECK(haar_random_state(a).amplitudes() == haar_random_state(b).amplitudes());
  }
  SUBCASE("moments of the uniform sphere") {
    SeedStream rng(2024);
    constexpr int n = 100000;
    Vector3d mean = Vector3d::Zero();
    double z2 = 0;
    for (int k = 0; k < n; ++k) {
      const Vector3d r = bloch_vector(haar_random_state(rng).density());
      mean += r;
      z2 += r.z() * r.z();
    }
    mean /= n;
    CHECK(std::abs(mean.x()) < 0.02);
    CHECK(std::abs(mean.y()) < 0.02);
    CHECK(std::abs(mean.z()) < 0.02);
    CHECK(std::abs(z2 / n - 1.0 / 3) < 0.01);
  }
}
