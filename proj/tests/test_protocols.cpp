#include "nvfq/protocols.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nvfq;

namespace {

constexpr double pi = std::numbers::pi;
const cd I(0, 1);

const Matrix2c spin_zero = Qubit2State<double>(Vector2c(1, 0)).density();

Vector4c numeric_effective(const InitialStateSpec& spec, double t) {
  if (t == 0) return spec.state().amplitudes();
  IntegratorConfig cfg;
  cfg.t_max = t;
  cfg.record_stride = 1 << 30;
  return evolve_schrodinger(build_effective(SystemParams{}), spec.state(), cfg).states.back();
}

double variance(const std::vector<double>& v) {
  double m = 0, s = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("closed-form resonant evolution") {
  SUBCASE("|0,+> is a dark state") {
    const InitialStateSpec s{0, 0, 0, 0};
    for (double t : {0.0, 1.0, pi, 5.5})
      CHECK((analytic_evolution(s, t).amplitudes() - Vector4c::Unit(0)).norm() < 1e-15);
  }
  SUBCASE("|1,+> goes to -i|0,-> at t = pi/g") {
    const InitialStateSpec s{pi / 2, 0, 0, 0};
    CHECK((analytic_evolution(s, pi).amplitudes() + I * Vector4c::Unit(1)).norm() < 1e-15);
  }
  SUBCASE("|0,-> goes to -i|1,+> at t = pi/g") {
    const InitialStateSpec s{0, 0, pi / 2, 0};
    CHECK((analytic_evolution(s, pi).amplitudes() + I * Vector4c::Unit(2)).norm() < 1e-15);
  }
  SUBCASE("coupling strength rescales time") {
    const InitialStateSpec s{0.3, 1.2, 0.9, -0.4};
    CHECK((analytic_evolution(s, 2.0, 0.5).amplitudes() - analytic_evolution(s, 1.0).amplitudes())
              .norm() < 1e-15);
  }
}

TEST_CASE("interaction-picture P1") {
  CHECK(analytic_p1_interaction(pi / 4, 0, 0) == doctest::Approx(1));
  CHECK(analytic_p1_interaction(pi / 4, 0, 2 * pi) == doctest::Approx(0).scale(1));
  for (double phi : {0.0, 1.0, 4.0})
    for (double t : {0.0, 0.7, 9.0}) CHECK(analytic_p1_interaction(0, phi, t) == doctest::Approx(0.5));

  // With the spin in |0> it is the flux population of the analytic state.
  for (double alpha : {0.1, 0.6, 1.3})
    for (double phi : {0.0, 2.0})
      for (double t : {0.0, 1.1, 3.7}) {
        const InitialStateSpec s{0, 0, alpha, phi};
        CHECK(excited_flux_population(analytic_evolution(s, t).amplitudes()) ==
              doctest::Approx(analytic_p1_interaction(alpha, phi, t)).epsilon(1e-12));
      }
}

TEST_CASE("numerical effective evolution matches the closed form") {
  for (double theta : {0.0, 0.8})
    for (double varphi : {0.0, 2.1})
      for (double alpha : {0.4, pi / 2})
        for (double phi : {0.0, 5.0})
          for (double t : {0.0, pi / 4, pi, 2 * pi}) {
            const InitialStateSpec s{theta, varphi, alpha, phi};
            CHECK(infidelity(numeric_effective(s, t), analytic_evolution(s, t).amplitudes()) < 1e-8);
          }
}

TEST_CASE("transfer phase map") {
  const Matrix2c d = transfer_phase_map();
  CHECK(std::abs(d(0, 0) - cd(1)) == 0);
  CHECK(std::abs(d(1, 1) - cd(0, -1)) == 0);
  CHECK(transfer_time(SystemParams{}) == doctest::Approx(pi));
  CHECK(transfer_time(SystemParams{}.with_coupling(2)) == doctest::Approx(pi / 2));
  CHECK_THROWS_AS(transfer_time(SystemParams{}.with_coupling(0)), DomainError);

  // spin (a, b) (x) |+>  ->  |0> (x) (a, -i b)
  const InitialStateSpec s{0.7, 1.9, 0, 0};
  const Vector4c out = analytic_evolution(s, pi).amplitudes();
  const Vector2c spin = s.spin().amplitudes();
  CHECK((out - product_state(Vector2c(1, 0), Vector2c(d * spin))).norm() < 1e-14);
}

TEST_CASE("propagate and frame helpers") {
  const ProtocolOptions opts;
  const Matrix4c rho = InitialStateSpec{0.3, 0.2, 0.5, 0.1}.state().density();
  CHECK(propagate(rho, 0, DecoherenceModel::none(), opts) == rho);
  CHECK_THROWS_AS(propagate(rho, -1, DecoherenceModel::none(), opts), std::invalid_argument);
  CHECK((to_rotating_frame(rho, opts.system, 0) - rho).norm() < 1e-15);
  // Populations in the working basis do not change between frames.
  const Matrix4c r = to_rotating_frame(rho, opts.system, 0.37);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r(k, k) - rho(k, k)) < 1e-14);
}

TEST_CASE("detection without decoherence") {
  DetectionOptions opts;
  const auto result =
      detection_scan({0, 0.5, 1, 2}, DecoherenceModel::none(), Qubit2State<double>(), opts);
  REQUIRE(result.curves.size() == 4);
  REQUIRE(result.resonance.has_value());
  CHECK(*result.resonance == 0);

  const auto& on = result.curves[0];
  CHECK(on.crosses_half);
  double lowest = 1;
  for (double v : on.envelope.signed_envelope) lowest = std::min(lowest, v);
  CHECK(lowest < 0.01);
  for (std::size_t k = 1; k < result.curves.size(); ++k) {
    CHECK_FALSE(result.curves[k].crosses_half);
    CHECK(result.curves[k].visibility < result.curves[k - 1].visibility);
  }

  // Baseline: no coupling, pure Rabi oscillation of full amplitude.
  for (double v : on.baseline.signed_envelope) CHECK(v == doctest::Approx(1).epsilon(1e-3));

  const auto& rep = result.report;
  CHECK(rep.scalar("resonance_found") == 1);
  CHECK(rep.scalar("crosses_half_det=0") == 1);
  CHECK(rep.table("detect_p1").columns.size() == 8);
  CHECK(rep.table("detect_p1").index.back() == doctest::Approx(4));
  CHECK(rep.table("detect_envelope_det=2").columns.size() == 4);
}

TEST_CASE("detection input validation") {
  CHECK_THROWS_AS(detection_scan({}, DecoherenceModel::none(), Qubit2State<double>()),
                  std::invalid_argument);
  DetectionOptions opts;
  opts.samples_per_rabi_period = 2;
  CHECK_THROWS_AS(detection_scan({0}, DecoherenceModel::none(), Qubit2State<double>(), opts),
                  std::invalid_argument);
}

TEST_CASE("spin initialization") {
  SUBCASE("one round resets any pure state without decoherence") {
    SeedStream rng(11);
    for (int k = 0; k < 10; ++k) {
      const auto r = initialize_spin(haar_random_state(rng).density(), 1, DecoherenceModel::none());
      CHECK(r.fidelity[0] == doctest::Approx(1).epsilon(1e-9));
    }
  }
  SUBCASE("|0> is a fixed point") {
    const auto r = initialize_spin(spin_zero, 4, DecoherenceModel::none());
    for (double f : r.fidelity) CHECK(f == doctest::Approx(1).epsilon(1e-9));
    CHECK(r.report.table("init_fidelity").index_name == "iteration");
  }
  SUBCASE("repeated rounds help under decoherence") {
    const auto dec = rates_from_microseconds(20, 15);
    const auto r = initialize_spin(Qubit2State<double>(Vector2c(0, 1)).density(), 5, dec);
    for (std::size_t k = 1; k < r.fidelity.size(); ++k) CHECK(r.fidelity[k] >= r.fidelity[k - 1]);
    CHECK(r.fidelity.back() < 1);
  }
  SUBCASE("ensemble average equals the average of single runs") {
    const auto dec = rates_from_microseconds(10, 10);
    const auto avg = initialization_average(dec, 6, 3, 99);
    SeedStream rng(99);
    std::vector<double> mean(3, 0);
    for (int s = 0; s < 6; ++s) {
      const auto r = initialize_spin(haar_random_state(rng).density(), 3, dec);
      for (int k = 0; k < 3; ++k) mean[k] += r.fidelity[k] / 6;
    }
    for (int k = 0; k < 3; ++k) CHECK(avg.mean[k] == doctest::Approx(mean[k]).epsilon(1e-10));
    CHECK(avg.report.scalar("average_fidelity") == avg.mean.back());
  }
  SUBCASE("worker count does not change the result") {
    const auto dec = rates_from_microseconds(20, 15);
    const auto a = initialization_average(dec, 40, 2, 5, {}, 1);
    const auto b = initialization_average(dec, 40, 2, 5, {}, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(initialize_spin(spin_zero, 0, DecoherenceModel::none()), std::invalid_argument);
    CHECK_THROWS_AS(initialization_average(DecoherenceModel::none(), 0, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("quantum memory") {
  SUBCASE("perfect transfer without decoherence") {
    for (double alpha : {0.0, 0.4, pi / 4, pi / 2})
      for (double phi : {0.0, 1.3, 4.4})
        CHECK(memory_transfer(alpha, phi, DecoherenceModel::none()).fidelity ==
              doctest::Approx(1).epsilon(1e-8));
  }
  SUBCASE("fidelity does not depend on phi") {
    const auto dec = rates_from_microseconds(20, 15);
    std::vector<double> f;
    for (int k = 0; k < 16; ++k) f.push_back(memory_transfer(0.6, 2 * pi * k / 16, dec).fidelity);
    CHECK(variance(f) < 1e-6);
  }
  SUBCASE("best at alpha = 0, worst at alpha = pi/2") {
    const auto dec = rates_from_microseconds(10, 10);
    const double best = memory_transfer(0, 0, dec).fidelity;
    const double worst = memory_transfer(pi / 2, 0, dec).fidelity;
    for (double alpha : {0.3, 0.7, 1.1, 1.4}) {
      const double f = memory_transfer(alpha, 0, dec).fidelity;
      CHECK(f < best);
      CHECK(f > worst);
    }
  }
  SUBCASE("report carries the transfer curve") {
    const auto r = memory_transfer(pi / 2, 0, DecoherenceModel::none());
    const auto& t = r.report.table("memory_transfer");
    REQUIRE(t.index.size() == 101);
    CHECK(t.index.back() == doctest::Approx(0.5));
    CHECK(t.columns[0].second.front() == doctest::Approx(0).scale(1));
    CHECK(t.columns[0].second.back() == doctest::Approx(1));
  }
}

TEST_CASE("spin rotations") {
  const auto none = DecoherenceModel::none();
  SUBCASE("beta = 0 is the identity") {
    const auto s = Qubit2State<double>::from_angles(0.7, 2.0);
    const auto r = rotate_spin(s, {0, 0.5}, none);
    CHECK(r.fidelity == doctest::Approx(1).epsilon(1e-9));
    CHECK(fidelity(r.final_spin, s) == doctest::Approx(1).epsilon(1e-9));
  }
  SUBCASE("beta = pi/2 flips |0> to |1>") {
    const auto r = rotate_spin(Qubit2State<double>(), {pi / 2, 0}, none);
    CHECK(std::real(r.final_spin(1, 1)) == doctest::Approx(1).epsilon(1e-9));
  }
  SUBCASE("random cases against the 2x2 oracle") {
    SeedStream rng(17);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int k = 0; k < 10; ++k) {
      const auto s = haar_random_state(rng);
      const RotationSpec rot{u(rng), u(rng)};
      const Qubit2State<double> expected(rot.matrix() * s.amplitudes());
      const auto r = rotate_spin(s, rot, none);
      CHECK(1 - fidelity(r.final_spin, expected) < 1e-8);
    }
  }
  SUBCASE("matrix follows the stated action and composes") {
    const RotationSpec a{0.3, 0.8}, b{0.5, 0.8}, ab{0.8, 0.8};
    const Matrix2c m = a.matrix();
    CHECK(std::abs(m(0, 0) - std::cos(0.3)) < 1e-15);
    CHECK(std::abs(m(1, 0) - std::polar(std::sin(0.3), 0.8)) < 1e-15);
    CHECK(std::abs(m(0, 1) + std::polar(std::sin(0.3), -0.8)) < 1e-15);
    CHECK((m * m.adjoint() - Matrix2c::Identity()).norm() < 1e-15);
    CHECK((a.matrix() * b.matrix() - ab.matrix()).norm() < 1e-14);
  }
  SUBCASE("idle segment without coupling is harmless in a closed system") {
    const auto s = Qubit2State<double>::from_angles(1.0, 0.3);
    CHECK(rotate_spin(s, {0.4, 1.0}, none, {}, 2.0).fidelity == doctest::Approx(1).epsilon(1e-9));
    CHECK_THROWS_AS(rotate_spin(s, {0.4, 1.0}, none, {}, -1), std::invalid_argument);
  }
  SUBCASE("idling under decoherence costs fidelity") {
    const auto dec = rates_from_microseconds(10, 10);
    const auto s = Qubit2State<double>::from_angles(0.5, 0.0);
    CHECK(rotate_spin(s, {0.4, 0}, dec, {}, 2.0).fidelity < rotate_spin(s, {0.4, 0}, dec).fidelity);
  }
}

TEST_CASE("spin tomography") {
  const auto none = DecoherenceModel::none();
  SeedStream rng(1);
  SUBCASE("|0> is read back exactly") {
    const auto r = tomography(spin_zero, none, rng);
    CHECK((r.bloch - Vector3d(0, 0, -1)).norm() < 1e-8);
    CHECK(r.theta == doctest::Approx(0).scale(1).epsilon(1e-8));
    CHECK(r.fidelity == doctest::Approx(1).epsilon(1e-8));
  }
  SUBCASE("angles are recovered") {
    const auto s = Qubit2State<double>::from_angles(pi / 4, pi / 3);
    const auto r = tomography(s.density(), none, rng);
    CHECK(std::abs(r.theta - pi / 4) < 1e-8);
    CHECK(std::abs(r.varphi - pi / 3) < 1e-8);
    CHECK(r.report.scalar("fidelity") == doctest::Approx(1).epsilon(1e-8));
  }
  SUBCASE("mixed inputs reconstruct but have no pure-state fidelity") {
    const Matrix2c mixed = density_from_bloch<double>(Vector3d(0.2, 0.1, -0.3));
    const auto r = tomography(mixed, none, rng);
    CHECK((r.bloch - Vector3d(0.2, 0.1, -0.3)).norm() < 1e-8);
    CHECK(std::isnan(r.fidelity));
  }
  SUBCASE("shot noise") {
    TomographyOptions opts;
    opts.shots = 20000;
    const auto s = Qubit2State<double>::from_angles(0.9, 4.0);
    const auto r = tomography(s.density(), none, rng, opts);
    CHECK(r.fidelity > 0.99);
    CHECK_FALSE(r.low_shot_warning);
    CHECK(r.report.warnings.empty());
    CHECK(r.bloch.norm() <= 1 + 1e-12);

    opts.shots = 10;
    const auto low = tomography(s.density(), none, rng, opts);
    CHECK(low.low_shot_warning);
    CHECK(low.report.warnings.size() == 1);
    CHECK(low.bloch.norm() <= 1 + 1e-12);

    opts.shots = 0;
    CHECK_THROWS_AS(tomography(s.density(), none, rng, opts), std::invalid_argument);
  }
  SUBCASE("closed-system Haar average is one") {
    const auto avg = tomography_average(none, 50, 3);
    CHECK(avg.mean[0] == doctest::Approx(1).epsilon(1e-8));
  }
  SUBCASE("decoherence lowers the average, less so for longer coherence times") {
    const auto short_t = tomography_average(rates_from_microseconds(10, 10), 200, 3);
    const auto long_t = tomography_average(rates_from_microseconds(20, 15), 200, 3);
    CHECK(short_t.mean[0] < long_t.mean[0]);
    CHECK(long_t.mean[0] < 1);
    CHECK(short_t.mean[0] > 0.5);
  }
}

TEST_CASE("tomography under decoherence tracks the initialization row" * doctest::may_fail()) {
  const auto dec = rates_from_microseconds(20, 15);
  const auto tomo = tomography_average(dec, 500, 1);
  const auto init = initialization_average(dec, 500, 1, 1);
  CHECK(std::abs(tomo.mean[0] - init.mean[0]) <= 0.01);
}

TEST_CASE("rotating-wave validation") {
  SUBCASE("no coupling: both models stay put") {
    const auto v = validate_rwa(SystemParams{}.with_coupling(0), {0, 1}, 0.05, {}, 11);
    for (double d : v.max_deviation) CHECK(d < 1e-12);
    for (const auto& [det, curves] : v.curves)
      for (double p : curves.first) CHECK(p == doctest::Approx(1));
  }
  SUBCASE("table layout") {
    const auto v = validate_rwa(SystemParams{}, {0}, 0.02, {}, 5);
    const auto& t = v.report.table("validate_rwa");
    CHECK(t.index.size() == 5);
    CHECK(t.index.back() == doctest::Approx(0.02));
    CHECK(t.columns[0].first == "exact_det=0");
    CHECK(t.columns[1].first == "effective_det=0");
    CHECK(v.max_deviation[0] < 0.05);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(validate_rwa(SystemParams{}, {0}, 1, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_rwa(SystemParams{}, {0}, 0, {}, 11), std::invalid_argument);
  }
}

TEST_CASE("report lookups") {
  ProtocolReport r;
  r.add_scalar("x", 2.5, Model::effective, DecoherenceModel::none());
  CHECK(r.scalar("x") == 2.5);
  CHECK(r.scalars[0].decoherence == "none");
  CHECK_THROWS_AS(r.scalar("y"), std::out_of_range);
  CHECK_THROWS_AS(r.table("t"), std::out_of_range);
  DataTable t("t");
  t.index = {0, 1};
  CHECK_THROWS_AS(t.add_column("c", {1.0}), std::invalid_argument);
}
