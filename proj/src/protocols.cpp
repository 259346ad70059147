#include "nvfq/protocols.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nvfq {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Matrix4c rho -> <+|rho_flux|->.
cd flux_coherence(const Matrix4c& rho) { return rho(0, 1) + rho(2, 3); }

// Linear map on spin density matrices, tabulated on four pure inputs.
class SpinChannel {
 public:
  template <typename Map>
  explicit SpinChannel(Map map) {
    const Matrix2c zero = Qubit2State<double>(Vector2c(1, 0)).density();
    const Matrix2c one = Qubit2State<double>(Vector2c(0, 1)).density();
    const Matrix2c x_plus = density_from_bloch<double>(Vector3d(1, 0, 0));
    const Matrix2c y_plus = density_from_bloch<double>(Vector3d(0, 1, 0));
    images_ = {map(zero), map(one), map(x_plus), map(y_plus)};
  }

  Matrix2c operator()(const Matrix2c& rho) const {
    const Vector3d r = bloch_vector(rho);
    // rho = [(1 - x - y)(P0 + P1) + z (P1 - P0) + 2x Px + 2y Py] / 2
    const double c = 1 - r.x() - r.y();
    return 0.5 * ((c - r.z()) * images_[0] + (c + r.z()) * images_[1] +
                  2 * r.x() * images_[2] + 2 * r.y() * images_[3]);
  }

 private:
  std::array<Matrix2c, 4> images_;
};

// Runs f(i) for i in [0, n) on up to `workers` threads; results land in
// per-index slots so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, int workers, F f) {
  const auto threads = static_cast<std::size_t>(std::clamp(workers, 1, 64));
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void mean_and_error(const std::vector<std::vector<double>>& samples, std::size_t columns,
                    EnsembleAverage& out) {
  const auto n = static_cast<double>(samples.size());
  out.mean.assign(columns, 0.0);
  out.standard_error.assign(columns, 0.0);
  for (const auto& s : samples)
    for (std::size_t k = 0; k < columns; ++k) out.mean[k] += s[k];
  for (auto& m : out.mean) m /= n;
  if (samples.size() < 2) return;
  for (const auto& s : samples)
    for (std::size_t k = 0; k < columns; ++k)
      out.standard_error[k] += (s[k] - out.mean[k]) * (s[k] - out.mean[k]);
  for (auto& e : out.standard_error) e = std::sqrt(e / (n - 1) / n);
}

Matrix2c project_to_ball(const Matrix2c& rho) {
  Vector3d r = bloch_vector(rho);
  const double n = r.norm();
  if (n > 1) r /= n;
  return density_from_bloch(r);
}

// Flux qubit reduced state after transferring the spin state onto |+>.
Matrix2c transferred_flux(const Matrix2c& spin, const DecoherenceModel& dec,
                          const ProtocolOptions& options) {
  const Matrix2c plus = Qubit2State<double>().density();
  const Matrix4c rho = tensor(spin, plus);
  return partial_trace(propagate(rho, transfer_time(options.system), dec, options), Party::spin);
}

}  // namespace

std::string to_string(Model model) { return model == Model::exact ? "exact" : "effective"; }

Matrix2c RotationSpec::matrix() const {
  const double c = std::cos(beta), s = std::sin(beta);
  Matrix2c r;
  r << c, -std::polar(s, -chi), std::polar(s, chi), c;
  return r;
}

void DataTable::add_column(std::string column, std::vector<double> values) {
  if (values.size() != index.size())
    throw std::invalid_argument("DataTable: column " + column + " has the wrong length");
  columns.emplace_back(std::move(column), std::move(values));
}

void ProtocolReport::add_scalar(std::string name, double value, Model model,
                                const DecoherenceModel& dec) {
  scalars.push_back({std::move(name), value, model, dec.label});
}

double ProtocolReport::scalar(std::string_view name) const {
  for (const auto& s : scalars)
    if (s.name == name) return s.value;
  throw std::out_of_range("ProtocolReport: no scalar named " + std::string(name));
}

const DataTable& ProtocolReport::table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw std::out_of_range("ProtocolReport: no table named " + std::string(name));
}

JointState<double> analytic_evolution(const InitialStateSpec& spec, double t, double g) {
  Vector4c c = spec.state().amplitudes();
  // The coupling only mixes |0,-> and |1,+>.
  const double co = std::cos(g * t / 2), si = std::sin(g * t / 2);
  const cd i(0, 1);
  const cd a = c(1), b = c(2);
  c(1) = co * a - i * si * b;
  c(2) = -i * si * a + co * b;
  return JointState<double>(c);
}

double analytic_p1_interaction(double alpha, double phi, double t, double g) {
  return 0.5 * (1 + std::sin(2 * alpha) * std::cos(phi) * std::cos(g * t / 2));
}

Matrix2c transfer_phase_map() {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = 1;
  d(1, 1) = cd(0, -1);
  return d;
}

double transfer_time(const SystemParams& sp) {
  if (sp.g == 0) throw DomainError("transfer_time: coupling is zero");
  return kPi / std::abs(sp.g);
}

HamiltonianModel interaction_generator(const SystemParams& sp, Model model) {
  return model == Model::exact ? build_interaction(sp) : build_effective(sp, Branch::plus);
}

Matrix4c propagate(const Matrix4c& rho, double t, const DecoherenceModel& dec,
                   const ProtocolOptions& options) {
  if (t < 0) throw std::invalid_argument("propagate: negative duration");
  if (t == 0) return rho;
  const HamiltonianModel h = interaction_generator(options.system, options.model);
  IntegratorConfig cfg = options.integrator;
  cfg.t_max = t;
  cfg.record_stride = INT_MAX;
  cfg.store_states = true;
  const auto traj = evolve_lindblad(h, dec, JointDensityMatrix<double>(rho), cfg);
  return traj.states.back();
}

Matrix4c to_rotating_frame(const Matrix4c& rho_interaction, const SystemParams& sp, double t) {
  const Matrix4c u = free_propagator(sp, t);
  return u * rho_interaction * u.adjoint();
}

DetectionResult detection_scan(const std::vector<double>& detunings, const DecoherenceModel& dec,
                               const Qubit2State<double>& spin_init,
                               const DetectionOptions& options) {
  if (detunings.empty()) throw std::invalid_argument("detection_scan: no detunings");
  if (options.samples_per_rabi_period < 4)
    throw std::invalid_argument("detection_scan: need at least 4 samples per Rabi period");
  if (!(options.window_periods > 0))
    throw std::invalid_argument("detection_scan: window must be positive");

  double fastest_carrier = 0;
  for (double d : detunings)
    fastest_carrier = std::max(fastest_carrier, std::abs(options.system.with_detuning(d).Omega));
  if (fastest_carrier == 0)
    throw DomainError("detection_scan: Rabi frequency vanishes for every detuning");
  const double ds = 2 * kPi / (fastest_carrier * options.samples_per_rabi_period);
  const double g = options.system.g == 0 ? 1.0 : std::abs(options.system.g);
  const double window = options.window_periods * 2 * kPi / g;
  const auto count = static_cast<long>(std::ceil(window / ds - 1e-9));

  const Qubit2State<double> flux_one = Qubit2State<double>::from_angles(kPi / 4, 0);
  const JointDensityMatrix<double> rho0(JointState<double>::product(spin_init, flux_one));

  auto run = [&](const SystemParams& sp) {
    const HamiltonianModel h = interaction_generator(sp, options.model);
    IntegratorConfig cfg = sampled_config(h, options.integrator, ds, count);
    cfg.store_states = false;
    const double omega = sp.Omega;
    Observable<Matrix4c> p1{"P1_rotating", [omega](double t, const Matrix4c& rho) {
                              return 0.5 + std::real(flux_coherence(rho) * std::polar(1.0, -omega * t));
                            }};
    auto traj = evolve_lindblad(h, dec, rho0, cfg, {p1});
    return std::pair{std::move(traj.times), traj.observable("P1_rotating")};
  };

  DetectionResult result;
  result.report.protocol = "detect";
  result.report.parameters = {{"window_periods", format(options.window_periods)},
                              {"samples_per_rabi_period", std::to_string(options.samples_per_rabi_period)},
                              {"spin_theta", format(spin_init.angle())},
                              {"spin_varphi", format(spin_init.phase())}};

  for (double d : detunings) {
    const SystemParams sp = options.system.with_detuning(d);
    DetectionCurve curve;
    curve.detuning = d;
    auto [times, p1] = run(sp);
    auto [base_times, base_p1] = run(sp.with_coupling(0));
    if (result.times.empty()) result.times = times;
    curve.p1 = std::move(p1);
    curve.baseline_p1 = std::move(base_p1);

    const double carrier = std::abs(sp.Omega);
    if (carrier == 0) throw DomainError("detection_scan: Rabi frequency vanishes at a detuning");
    curve.envelope = extract_envelope(times, curve.p1, carrier, options.envelope);
    curve.baseline = extract_envelope(base_times, curve.baseline_p1, carrier, options.envelope);
    curve.visibility = visibility_against(curve.envelope, curve.baseline);
    // Search half-width in carrier periods.
    const auto bins = static_cast<std::size_t>(
        std::max(1.0, std::round(options.minimum_window_periods * carrier / g)));
    curve.crosses_half = crosses_half(curve.envelope, bins);
    curve.max_minimum_separation = max_minimum_separation(curve.envelope, curve.baseline, bins);
    result.curves.push_back(std::move(curve));
  }

  double best = -1;
  for (const auto& c : result.curves) {
    if (c.crosses_half && c.visibility > best) {
      best = c.visibility;
      result.resonance = c.detuning;
    }
  }

  auto& report = result.report;
  DataTable raw{"detect_p1"};
  for (double t : result.times) raw.index.push_back(t / (2 * kPi));
  for (const auto& c : result.curves) {
    raw.add_column("P1_det=" + format(c.detuning), c.p1);
    raw.add_column("P1_g0_det=" + format(c.detuning), c.baseline_p1);
  }
  report.tables.push_back(std::move(raw));

  for (const auto& c : result.curves) {
    DataTable env{"detect_envelope_det=" + format(c.detuning)};
    for (double t : c.envelope.times) env.index.push_back(t / (2 * kPi));
    env.add_column("upper", c.envelope.upper);
    env.add_column("lower", c.envelope.lower);
    env.add_column("envelope", c.envelope.signed_envelope);
    std::vector<double> base(c.baseline.signed_envelope);
    base.resize(env.index.size(), std::numeric_limits<double>::quiet_NaN());
    env.add_column("envelope_g0", std::move(base));
    report.tables.push_back(std::move(env));

    const std::string suffix = "_det=" + format(c.detuning);
    report.add_scalar("visibility" + suffix, c.visibility, options.model, dec);
    report.add_scalar("crosses_half" + suffix, c.crosses_half ? 1 : 0, options.model, dec);
    report.add_scalar("min_separation" + suffix, c.max_minimum_separation, options.model, dec);
  }
  report.add_scalar("resonance_found", result.resonance ? 1 : 0, options.model, dec);
  if (result.resonance)
    report.add_scalar("resonance_detuning", *result.resonance, options.model, dec);
  return result;
}

InitializationResult initialize_spin(const Matrix2c& spin, int iterations,
                                     const DecoherenceModel& dec, const ProtocolOptions& options) {
  if (iterations < 1) throw std::invalid_argument("initialize_spin: iterations must be >= 1");
  const Matrix2c plus = Qubit2State<double>().density();
  const double t = transfer_time(options.system);
  InitializationResult result;
  Matrix2c rho = spin;
  for (int k = 0; k < iterations; ++k) {
    rho = partial_trace(propagate(tensor(rho, plus), t, dec, options), Party::flux);
    result.fidelity.push_back(std::real(rho(0, 0)));
  }
  result.final_spin = rho;

  auto& report = result.report;
  report.protocol = "init";
  report.parameters = {{"iterations", std::to_string(iterations)}};
  DataTable table{"init_fidelity"};
  table.index_name = "iteration";
  for (int k = 1; k <= iterations; ++k) table.index.push_back(k);
  table.add_column("fidelity", result.fidelity);
  report.tables.push_back(std::move(table));
  for (int k = 0; k < iterations; ++k)
    report.add_scalar("fidelity_n=" + std::to_string(k + 1), result.fidelity[k], options.model, dec);
  return result;
}

EnsembleAverage initialization_average(const DecoherenceModel& dec, int samples, int iterations,
                                       std::uint64_t seed, const ProtocolOptions& options,
                                       int workers) {
  if (samples < 1) throw std::invalid_argument("initialization_average: samples must be >= 1");
  if (iterations < 1) throw std::invalid_argument("initialization_average: iterations must be >= 1");
  const Matrix2c plus = Qubit2State<double>().density();
  const double t = transfer_time(options.system);
  const SpinChannel round([&](const Matrix2c& rho) {
    return partial_trace(propagate(tensor(rho, plus), t, dec, options), Party::flux);
  });

  SeedStream rng(seed);
  std::vector<Qubit2State<double>> inputs;
  inputs.reserve(samples);
  for (int s = 0; s < samples; ++s) inputs.push_back(haar_random_state(rng));

  std::vector<std::vector<double>> fidelities(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    Matrix2c rho = inputs[i].density();
    for (int k = 0; k < iterations; ++k) {
      rho = round(rho);
      fidelities[i].push_back(std::real(rho(0, 0)));
    }
  });

  EnsembleAverage out;
  mean_and_error(fidelities, static_cast<std::size_t>(iterations), out);
  auto& report = out.report;
  report.protocol = "init";
  report.parameters = {{"samples", std::to_string(samples)},
                       {"iterations", std::to_string(iterations)},
                       {"seed", std::to_string(seed)}};
  DataTable table{"init_fidelity"};
  table.index_name = "iteration";
  for (int k = 1; k <= iterations; ++k) table.index.push_back(k);
  table.add_column("average_fidelity", out.mean);
  table.add_column("standard_error", out.standard_error);
  report.tables.push_back(std::move(table));
  for (int k = 0; k < iterations; ++k) {
    report.add_scalar("average_fidelity_n=" + std::to_string(k + 1), out.mean[k], options.model, dec);
    report.add_scalar("standard_error_n=" + std::to_string(k + 1), out.standard_error[k],
                      options.model, dec);
  }
  report.add_scalar("average_fidelity", out.mean.back(), options.model, dec);
  return out;
}

SpinResult memory_transfer(double alpha, double phi, const DecoherenceModel& dec,
                           const ProtocolOptions& options) {
  const Qubit2State<double> flux = Qubit2State<double>::from_angles(alpha, phi);
  const Qubit2State<double> target(transfer_phase_map() * flux.amplitudes());
  const JointDensityMatrix<double> rho0(
      Matrix4c(tensor(Qubit2State<double>().density(), flux.density())));

  constexpr long kSamples = 100;
  const HamiltonianModel h = interaction_generator(options.system, options.model);
  IntegratorConfig cfg =
      sampled_config(h, options.integrator, transfer_time(options.system) / kSamples, kSamples);
  const Observable<Matrix4c> spin_fidelity{
      "spin_fidelity", [&target](double, const Matrix4c& rho) {
        return fidelity(Matrix2c(partial_trace(rho, Party::flux)), target);
      }};
  const auto traj = evolve_lindblad(h, dec, rho0, cfg, {spin_fidelity});

  SpinResult result;
  result.final_spin = partial_trace(traj.states.back(), Party::flux);
  result.fidelity = fidelity(result.final_spin, target);

  auto& report = result.report;
  report.protocol = "memory";
  report.parameters = {{"alpha", format(alpha)}, {"phi", format(phi)}};
  DataTable table("memory_transfer");
  const double g = std::abs(options.system.g);
  for (double t : traj.times) table.index.push_back(t * g / (2 * kPi));
  table.add_column("spin_fidelity", traj.observable("spin_fidelity"));
  table.add_column("P1", traj.observable("P1"));
  report.tables.push_back(std::move(table));
  report.add_scalar("fidelity", result.fidelity, options.model, dec);
  return result;
}

SpinResult rotate_spin(const Qubit2State<double>& spin, const RotationSpec& rotation,
                       const DecoherenceModel& dec, const ProtocolOptions& options,
                       double idle_time) {
  if (idle_time < 0) throw std::invalid_argument("rotate_spin: negative idle time");
  const double t = transfer_time(options.system);
  const Matrix2c plus = Qubit2State<double>().density();

  Matrix4c rho = propagate(tensor(spin.density(), plus), t, dec, options);
  const Matrix2c d_inv = transfer_phase_map().adjoint();
  const Matrix4c pulse = local(Party::flux, Matrix2c(d_inv * rotation.matrix() * d_inv));
  rho = pulse * rho * pulse.adjoint();
  if (idle_time > 0) {
    ProtocolOptions idle = options;
    idle.system = options.system.with_coupling(0);
    rho = propagate(rho, idle_time, dec, idle);
  }
  rho = propagate(rho, t, dec, options);

  SpinResult result;
  result.final_spin = partial_trace(rho, Party::flux);
  const Qubit2State<double> target(rotation.matrix() * spin.amplitudes());
  result.fidelity = fidelity(result.final_spin, target);

  auto& report = result.report;
  report.protocol = "rotate";
  report.parameters = {{"beta", format(rotation.beta)},
                       {"chi", format(rotation.chi)},
                       {"idle_time", format(idle_time)}};
  report.add_scalar("fidelity", result.fidelity, options.model, dec);
  return result;
}

namespace {

TomographyResult reconstruct(const Matrix2c& spin, const Matrix2c& flux, SeedStream& rng,
                             const TomographyOptions& options) {
  TomographyResult result;
  const std::array<Matrix2c, 3> paulis = {flux_ops::sigma_x(), flux_ops::sigma_y(),
                                          flux_ops::sigma_z()};
  for (int k = 0; k < 3; ++k) {
    double e = std::real((flux * paulis[k]).trace());
    if (options.shots) {
      const int n = *options.shots;
      if (n < 1) throw std::invalid_argument("tomography: shots must be >= 1");
      std::binomial_distribution<int> counts(n, std::clamp((1 + e) / 2, 0.0, 1.0));
      e = 2.0 * counts(rng) / n - 1;
    }
    result.flux_expectations(k) = e;
  }
  if (options.shots && *options.shots < 100) result.low_shot_warning = true;

  Matrix2c flux_estimate = 0.5 * Matrix2c::Identity();
  for (int k = 0; k < 3; ++k) flux_estimate += 0.5 * result.flux_expectations(k) * paulis[k];
  const Matrix2c d = transfer_phase_map();
  Matrix2c estimate = d.adjoint() * flux_estimate * d;
  if (options.project_to_ball) estimate = project_to_ball(estimate);
  result.estimate = estimate;
  result.bloch = bloch_vector(estimate);
  result.theta = 0.5 * std::acos(std::clamp(-result.bloch.z(), -1.0, 1.0));
  result.varphi = std::atan2(-result.bloch.y(), result.bloch.x());
  if (result.varphi < 0) result.varphi += 2 * kPi;

  Eigen::SelfAdjointEigenSolver<Matrix2c> es(spin);
  if (es.eigenvalues()(1) > 1 - 1e-9) {
    result.fidelity = fidelity(estimate, Qubit2State<double>(es.eigenvectors().col(1)));
  } else {
    result.fidelity = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace

TomographyResult tomography(const Matrix2c& spin, const DecoherenceModel& dec, SeedStream& rng,
                            const TomographyOptions& options) {
  TomographyResult result = reconstruct(spin, transferred_flux(spin, dec, options), rng, options);
  auto& report = result.report;
  report.protocol = "tomo";
  if (options.shots) report.parameters.emplace_back("shots", std::to_string(*options.shots));
  if (result.low_shot_warning)
    report.warnings.push_back("fewer than 100 shots per axis; estimates are noisy");
  report.add_scalar("bloch_x", result.bloch.x(), options.model, dec);
  report.add_scalar("bloch_y", result.bloch.y(), options.model, dec);
  report.add_scalar("bloch_z", result.bloch.z(), options.model, dec);
  report.add_scalar("theta", result.theta, options.model, dec);
  report.add_scalar("varphi", result.varphi, options.model, dec);
  report.add_scalar("fidelity", result.fidelity, options.model, dec);
  return result;
}

EnsembleAverage tomography_average(const DecoherenceModel& dec, int samples, std::uint64_t seed,
                                   const TomographyOptions& options, int workers) {
  if (samples < 1) throw std::invalid_argument("tomography_average: samples must be >= 1");
  const SpinChannel transfer(
      [&](const Matrix2c& rho) { return transferred_flux(rho, dec, options); });

  // Inputs and measurement seeds are drawn up front so the result does not
  // depend on the number of workers.
  SeedStream rng(seed);
  std::vector<Qubit2State<double>> inputs;
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < samples; ++s) {
    inputs.push_back(haar_random_state(rng));
    seeds.push_back(rng());
  }
  std::vector<std::vector<double>> fidelities(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    SeedStream local_rng(seeds[i]);
    const Matrix2c spin = inputs[i].density();
    fidelities[i] = {reconstruct(spin, transfer(spin), local_rng, options).fidelity};
  });

  EnsembleAverage out;
  mean_and_error(fidelities, 1, out);
  auto& report = out.report;
  report.protocol = "tomo";
  report.parameters = {{"samples", std::to_string(samples)}, {"seed", std::to_string(seed)}};
  if (options.shots) {
    report.parameters.emplace_back("shots", std::to_string(*options.shots));
    if (*options.shots < 100)
      report.warnings.push_back("fewer than 100 shots per axis; estimates are noisy");
  }
  report.add_scalar("average_fidelity", out.mean[0], options.model, dec);
  report.add_scalar("standard_error", out.standard_error[0], options.model, dec);
  return out;
}

RwaValidation validate_rwa(const SystemParams& sp, const std::vector<double>& detunings,
                           double window_periods, const IntegratorConfig& integrator, int points) {
  if (points < 2) throw std::invalid_argument("validate_rwa: need at least two points");
  if (!(window_periods > 0)) throw std::invalid_argument("validate_rwa: window must be positive");
  const double g = sp.g == 0 ? 1.0 : std::abs(sp.g);
  const long count = points - 1;
  const double spacing = window_periods * 2 * kPi / g / static_cast<double>(count);

  // |1,+> sits at index 2 of the working basis.
  const JointState<double> psi0(Vector4c::Unit(2));
  const Observable<Vector4c> population{
      "P_1+", [](double, const Vector4c& y) { return std::norm(y(2)); }};

  RwaValidation out;
  DataTable table{"validate_rwa"};
  for (long k = 0; k <= count; ++k) {
    out.times.push_back(spacing * static_cast<double>(k));
    table.index.push_back(out.times.back() * g / (2 * kPi));
  }
  out.report.protocol = "validate-rwa";
  out.report.parameters = {{"window_periods", format(window_periods)},
                           {"points", std::to_string(points)}};

  for (double d : detunings) {
    const SystemParams p = sp.with_detuning(d);
    auto run = [&](const HamiltonianModel& h) {
      IntegratorConfig cfg = sampled_config(h, integrator, spacing, count);
      cfg.store_states = false;
      return evolve_schrodinger(h, psi0, cfg, {population}).observable("P_1+");
    };
    std::vector<double> exact = run(build_interaction(p));
    std::vector<double> effective = run(build_effective(p, Branch::plus));
    double worst = 0;
    for (std::size_t k = 0; k < exact.size(); ++k)
      worst = std::max(worst, std::abs(exact[k] - effective[k]));
    out.max_deviation.push_back(worst);
    table.add_column("exact_det=" + format(d), exact);
    table.add_column("effective_det=" + format(d), effective);
    out.report.add_scalar("max_deviation_det=" + format(d), worst, Model::exact,
                          DecoherenceModel::none());
    out.curves.push_back({d, {std::move(exact), std::move(effective)}});
  }
  out.report.tables.push_back(std::move(table));
  return out;
}

}  // namespace nvfq
