#include "nvfq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nvfq {

DecoherenceModel DecoherenceModel::from_rates(double gamma_x, double gamma_minus,
                                              double gamma_plus, std::string label) {
  if (gamma_x < 0 || gamma_minus < 0 || gamma_plus < 0)
    throw DomainError("DecoherenceModel: rates must be non-negative");
  DecoherenceModel d;
  d.gamma_x = gamma_x;
  d.gamma_minus = gamma_minus;
  d.gamma_plus = gamma_plus;
  d.label = std::move(label);
  return d;
}

DecoherenceModel DecoherenceModel::with_symmetric_rates() const {
  DecoherenceModel d = *this;
  d.gamma_plus = d.gamma_minus;
  d.label = label + ",symmetric";
  return d;
}

std::array<JumpTerm, 3> DecoherenceModel::jump_terms() const {
  return {JumpTerm{gamma_x, local(Party::flux, flux_ops::sigma_x())},
          JumpTerm{gamma_minus, local(Party::flux, flux_ops::lowering_x())},
          JumpTerm{gamma_plus, local(Party::flux, flux_ops::raising_x())}};
}

DecoherenceModel rates_from_times(double t1, double tnu) {
  if (!(t1 > 0) || !(tnu > 0))
    throw DomainError("rates_from_times: T1 and Tnu must be positive");
  DecoherenceModel d;
  d.t1 = t1;
  d.tnu = tnu;
  d.gamma_x = 0.25 / t1;
  d.gamma_minus = 0.25 / t1;
  d.gamma_plus = 0.25 / t1 + 1.0 / tnu;
  std::ostringstream os;
  os << "T1=" << t1 << ",Tnu=" << tnu;
  d.label = os.str();
  return d;
}

DecoherenceModel rates_from_microseconds(double t1_us, double tnu_us, const UnitBridge& bridge) {
  if (!(t1_us > 0) || !(tnu_us > 0))
    throw DomainError("rates_from_microseconds: T1 and Tnu must be positive");
  DecoherenceModel d = rates_from_times(bridge.from_microseconds(t1_us),
                                        bridge.from_microseconds(tnu_us));
  std::ostringstream os;
  os << "T1=" << t1_us << "us,Tnu=" << tnu_us << "us";
  d.label = os.str();
  return d;
}

double resolve_step(const HamiltonianModel& h, const IntegratorConfig& cfg) {
  const double w = h.fastest_frequency();
  const double bound = w > 0 ? 2 * std::numbers::pi / w / IntegratorConfig::min_points_per_period
                             : std::numeric_limits<double>::infinity();
  if (cfg.dt > 0) {
    if (cfg.dt > bound * (1 + 1e-12)) {
      std::ostringstream os;
      os << "time step " << cfg.dt << " exceeds resolution bound " << bound << " for "
         << to_string(h.frame()) << "-frame model";
      throw IntegrationError(os.str(), 0.0);
    }
    return cfg.dt;
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h(0.0), Eigen::EigenvaluesOnly);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  double dt = std::min(bound, radius > 0 ? IntegratorConfig::max_phase_per_step / radius
                                         : std::numeric_limits<double>::infinity());
  if (!std::isfinite(dt)) dt = cfg.t_max > 0 ? cfg.t_max / 100 : 0.01;
  return std::min(dt, 0.05);
}

IntegratorConfig sampled_config(const HamiltonianModel& h, const IntegratorConfig& base,
                                double spacing, long count) {
  if (!(spacing > 0) || count < 1)
    throw std::invalid_argument("sampled_config: need a positive spacing and count");
  IntegratorConfig cfg = base;
  cfg.t_max = spacing * static_cast<double>(count);
  const double dt = resolve_step(h, cfg);
  const auto substeps = static_cast<int>(std::max(1.0, std::ceil(spacing / dt - 1e-9)));
  cfg.dt = spacing / substeps;
  cfg.record_stride = substeps;
  return cfg;
}

double excited_flux_population(const Matrix4c& rho) {
  const Matrix2c reduced = partial_trace(rho, Party::spin);
  const Vector2c one = flux_ops::excited();
  return std::real(one.dot(reduced * one));
}

double excited_flux_population(const Vector4c& psi) {
  return excited_flux_population(Matrix4c(psi * psi.adjoint()));
}

Matrix4c lindblad_rhs(const Matrix4c& h, const DecoherenceModel& dec, const Matrix4c& rho) {
  const cd i(0, 1);
  Matrix4c out = -i * (h * rho - rho * h);
  for (const auto& [rate, a] : dec.jump_terms()) {
    if (rate == 0) continue;
    const Matrix4c ada = a.adjoint() * a;
    out += rate * (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  return out;
}

namespace {

// Generic driver shared by the pure-state and density-matrix propagators.
// `rhs(t, y)` is the time derivative, `step_check(t, y)` runs after every
// step and `record_check(t, y)` before a state is recorded; both throw
// IntegrationError on a breach.
template <typename State, typename Rhs, typename StepCheck, typename RecordCheck>
Trajectory<State> integrate(const State& y0, double dt, const IntegratorConfig& cfg, Rhs rhs,
                            StepCheck step_check, RecordCheck record_check,
                            const std::vector<Observable<State>>& observables) {
  if (!(cfg.t_max > 0)) throw std::invalid_argument("IntegratorConfig: t_max must be positive");
  if (cfg.record_stride < 1)
    throw std::invalid_argument("IntegratorConfig: record_stride must be >= 1");

  Trajectory<State> traj;
  traj.observables.reserve(observables.size());
  for (const auto& o : observables) traj.observables.emplace_back(o.name, std::vector<double>{});

  auto record = [&](double t, const State& y) {
    record_check(t, y);
    traj.times.push_back(t);
    if (cfg.store_states) traj.states.push_back(y);
    for (std::size_t k = 0; k < observables.size(); ++k)
      traj.observables[k].second.push_back(observables[k].evaluate(t, y));
  };

  State y = y0;
  record(0.0, y);

  if (cfg.method == Method::rk4) {
    const auto n = static_cast<long long>(std::ceil(cfg.t_max / dt - 1e-9));
    const double h = cfg.t_max / static_cast<double>(n);
    const auto reserve = static_cast<std::size_t>(n / cfg.record_stride + 2);
    traj.times.reserve(reserve);
    if (cfg.store_states) traj.states.reserve(reserve);
    for (auto& [name, v] : traj.observables) v.reserve(reserve);
    for (long long k = 0; k < n; ++k) {
      const double t = h * static_cast<double>(k);
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + h / 2, State(y + h / 2 * k1));
      const State k3 = rhs(t + h / 2, State(y + h / 2 * k2));
      const State k4 = rhs(t + h, State(y + h * k3));
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      const double t_next = h * static_cast<double>(k + 1);
      step_check(t_next, y);
      if ((k + 1) % cfg.record_stride == 0 || k + 1 == n) record(t_next, y);
    }
    return traj;
  }

  // Dormand-Prince 5(4) with the records on the grid k * dt * stride.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double spacing = dt * cfg.record_stride;
  const double h_max = dt;
  double h = dt;
  double t = 0;
  long long next_record = 1;
  State k1 = rhs(t, y);
  while (t < cfg.t_max * (1 - 1e-14)) {
    const double target = std::min(cfg.t_max, spacing * static_cast<double>(next_record));
    const double step = std::min({h, h_max, target - t});
    const State k2 = rhs(t + c2 * step, State(y + step * a21 * k1));
    const State k3 = rhs(t + c3 * step, State(y + step * (a31 * k1 + a32 * k2)));
    const State k4 = rhs(t + c4 * step, State(y + step * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 =
        rhs(t + c5 * step, State(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = rhs(t + step, State(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                                     a65 * k5)));
    const State y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = rhs(t + step, y_new);
    const State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double ratio = 0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double scale =
          cfg.adaptive_atol +
          cfg.adaptive_rtol * std::max(std::abs(y.data()[i]), std::abs(y_new.data()[i]));
      ratio = std::max(ratio, std::abs(err.data()[i]) / scale);
    }
    if (!std::isfinite(ratio)) throw IntegrationError("non-finite state in adaptive step", t);
    if (ratio <= 1) {
      t += step;
      y = y_new;
      k1 = k7;
      step_check(t, y);
      if (std::abs(t - target) <= 1e-12 * std::max(1.0, target)) {
        t = target;
        record(t, y);
        ++next_record;
      }
    }
    const double factor = ratio == 0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h = std::min(h_max, step * factor);
    if (h < 1e-14 * std::max(1.0, cfg.t_max))
      throw IntegrationError("adaptive step size underflow", t);
  }
  return traj;
}

}  // namespace

StateTrajectory evolve_schrodinger(const HamiltonianModel& h, const JointState<double>& psi0,
                                   const IntegratorConfig& cfg,
                                   const std::vector<Observable<Vector4c>>& extra) {
  const double dt = resolve_step(h, cfg);
  const cd minus_i(0, -1);
  const bool is_static = h.is_static();
  const Matrix4c h_static = h(0.0);
  auto rhs = [&](double t, const Vector4c& y) -> Vector4c {
    return minus_i * ((is_static ? h_static : h(t)) * y);
  };
  auto step_check = [&](double t, const Vector4c& y) {
    const double n = y.squaredNorm();
    if (!std::isfinite(n) || std::abs(n - 1) > cfg.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << std::abs(n - 1) << " exceeds " << cfg.norm_tolerance;
      throw IntegrationError(os.str(), t);
    }
  };
  std::vector<Observable<Vector4c>> observables;
  observables.push_back(
      {"P1", [](double, const Vector4c& y) { return excited_flux_population(y); }});
  observables.insert(observables.end(), extra.begin(), extra.end());
  return integrate<Vector4c>(psi0.amplitudes(), dt, cfg, rhs, step_check,
                             [](double, const Vector4c&) {}, observables);
}

DensityTrajectory evolve_lindblad(const HamiltonianModel& h, const DecoherenceModel& dec,
                                  const JointDensityMatrix<double>& rho0,
                                  const IntegratorConfig& cfg,
                                  const std::vector<Observable<Matrix4c>>& extra) {
  const double dt = resolve_step(h, cfg);
  const cd minus_i(0, -1);

  // d rho = K rho + rho K^dagger + sum rate a rho a^dagger with
  // K = -iH - 1/2 sum rate a^dagger a.
  Matrix4c damping = Matrix4c::Zero();
  std::vector<std::pair<double, Matrix4c>> jumps;
  for (const auto& [rate, a] : dec.jump_terms()) {
    if (rate < 0) throw DomainError("evolve_lindblad: negative decoherence rate");
    if (rate == 0) continue;
    damping += 0.5 * rate * a.adjoint() * a;
    jumps.emplace_back(rate, a);
  }
  const bool is_static = h.is_static();
  const Matrix4c k_static = minus_i * h(0.0) - damping;
  auto rhs = [&](double t, const Matrix4c& rho) -> Matrix4c {
    const Matrix4c k = is_static ? k_static : Matrix4c(minus_i * h(t) - damping);
    Matrix4c out = k * rho;
    out += out.adjoint().eval();
    for (const auto& [rate, a] : jumps) out.noalias() += rate * (a * rho * a.adjoint());
    return out;
  };
  auto step_check = [&](double t, const Matrix4c& rho) {
    const double tr = std::abs(rho.trace() - cd(1));
    if (!std::isfinite(tr) || tr > cfg.trace_tolerance) {
      std::ostringstream os;
      os << "trace drift " << tr << " exceeds " << cfg.trace_tolerance;
      throw IntegrationError(os.str(), t);
    }
    const double herm = hermiticity_error(rho);
    if (herm > cfg.hermiticity_tolerance) {
      std::ostringstream os;
      os << "hermiticity error " << herm << " exceeds " << cfg.hermiticity_tolerance;
      throw IntegrationError(os.str(), t);
    }
  };
  auto record_check = [&](double t, const Matrix4c& rho) {
    const auto d = diagnose(rho);
    if (d.min_eigenvalue < cfg.positivity_floor) {
      std::ostringstream os;
      os << "negative eigenvalue " << d.min_eigenvalue << " below " << cfg.positivity_floor;
      throw IntegrationError(os.str(), t);
    }
  };
  std::vector<Observable<Matrix4c>> observables;
  observables.push_back(
      {"P1", [](double, const Matrix4c& r) { return excited_flux_population(r); }});
  observables.insert(observables.end(), extra.begin(), extra.end());
  return integrate<Matrix4c>(rho0.matrix(), dt, cfg, rhs, step_check, record_check, observables);
}

}  // namespace nvfq
