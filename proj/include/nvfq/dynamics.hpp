// Time propagation of pure states (Schroedinger) and density matrices
// (Lindblad master equation with flux-qubit dissipators).
#pragma once

#include "nvfq/hamiltonians.hpp"
#include "nvfq/qstate.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvfq {

/// Bridge between coupling units and laboratory time.  With g/2pi = 100 kHz
/// one coupling period 2pi/g is 10 us.
struct UnitBridge {
  double g_over_2pi_hz = 1e5;

  /// Microseconds -> units of 1/g.
  double from_microseconds(double us) const {
    return us * 1e-6 * 2 * std::numbers::pi * g_over_2pi_hz;
  }
  double to_microseconds(double t) const {
    return t / (2 * std::numbers::pi * g_over_2pi_hz) * 1e6;
  }
  double coupling_period_us() const { return 1e6 / g_over_2pi_hz; }
};

struct JumpTerm {
  double rate;
  Matrix4c op;
};

/// Rates for the three flux-qubit dissipators L[sx], L[s_{-,x}], L[s_{+,x}].
/// T1, Tnu and the rates share one time unit (rates are its inverse).
struct DecoherenceModel {
  double t1 = std::numeric_limits<double>::infinity();
  double tnu = std::numeric_limits<double>::infinity();
  double gamma_x = 0;
  double gamma_minus = 0;
  double gamma_plus = 0;
  std::string label = "none";

  static DecoherenceModel none() { return {}; }

  /// Explicit rates, for nulling experiments.
  static DecoherenceModel from_rates(double gamma_x, double gamma_minus, double gamma_plus,
                                     std::string label = "custom");

  /// Copy with gamma_plus forced down to gamma_minus.
  DecoherenceModel with_symmetric_rates() const;

  bool is_none() const { return gamma_x == 0 && gamma_minus == 0 && gamma_plus == 0; }

  std::array<JumpTerm, 3> jump_terms() const;
};

/// Gamma_x = Gamma_- = 1/(4 T1), Gamma_+ = 1/(4 T1) + 1/Tnu.  Either time may
/// be +infinity.  Throws DomainError for non-positive times.
DecoherenceModel rates_from_times(double t1, double tnu);

/// rates_from_times with microsecond inputs, returned in units of g.
DecoherenceModel rates_from_microseconds(double t1_us, double tnu_us,
                                         const UnitBridge& bridge = {});

enum class Method { rk4, adaptive };

struct IntegratorConfig {
  /// Time step in units of 1/g; zero selects the automatic step.
  double dt = 0;
  Method method = Method::rk4;
  double t_max = 2 * std::numbers::pi;
  /// Record every n-th step (and always the last one).
  int record_stride = 1;
  bool store_states = true;

  double norm_tolerance = 1e-6;
  double trace_tolerance = 1e-8;
  double hermiticity_tolerance = 1e-8;
  double positivity_floor = -1e-8;

  double adaptive_rtol = 1e-10;
  double adaptive_atol = 1e-12;

  /// Minimum number of steps per period of the fastest frequency.
  static constexpr double min_points_per_period = 20;
  /// Cap on ||H|| dt used when choosing the automatic step.
  static constexpr double max_phase_per_step = 0.005;
};

/// Step actually used for a model: the requested one, or the automatic one.
/// Throws IntegrationError when a requested step violates the resolution
/// bound dt <= (2pi / w_fast) / 20.
double resolve_step(const HamiltonianModel& h, const IntegratorConfig& cfg);

/// Copy of `base` whose records fall on the grid k * spacing, k = 0..count:
/// the step is the resolved one shrunk to divide `spacing` evenly.
IntegratorConfig sampled_config(const HamiltonianModel& h, const IntegratorConfig& base,
                                double spacing, long count);

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  /// First offending time, units of 1/g.
  double time() const { return time_; }

 private:
  double time_;
};

template <typename State>
struct Observable {
  std::string name;
  std::function<double(double, const State&)> evaluate;
};

/// Time series of states plus named observables.  Times are stored in units
/// of 1/g; times_in_periods() converts to units of 2pi/g.
template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<std::pair<std::string, std::vector<double>>> observables;

  const std::vector<double>& observable(const std::string& name) const {
    for (const auto& [n, v] : observables)
      if (n == name) return v;
    throw std::out_of_range("Trajectory: no observable named " + name);
  }

  std::vector<double> times_in_periods() const {
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = times[i] / (2 * std::numbers::pi);
    return out;
  }
};

using StateTrajectory = Trajectory<Vector4c>;
using DensityTrajectory = Trajectory<Matrix4c>;

/// P1 = Tr_spin <1_fq| rho |1_fq> in whatever frame rho is expressed.
double excited_flux_population(const Matrix4c& rho);
double excited_flux_population(const Vector4c& psi);

StateTrajectory evolve_schrodinger(const HamiltonianModel& h, const JointState<double>& psi0,
                                   const IntegratorConfig& cfg,
                                   const std::vector<Observable<Vector4c>>& extra = {});

DensityTrajectory evolve_lindblad(const HamiltonianModel& h, const DecoherenceModel& dec,
                                  const JointDensityMatrix<double>& rho0,
                                  const IntegratorConfig& cfg,
                                  const std::vector<Observable<Matrix4c>>& extra = {});

/// Right-hand side of the master equation, exposed for testing.
Matrix4c lindblad_rhs(const Matrix4c& h, const DecoherenceModel& dec, const Matrix4c& rho);

}  // namespace nvfq
