// Spin-flux qubit protocols: coupling detection, spin initialization,
// quantum memory, spin rotation and spin tomography.
//
// All protocols propagate in the interaction picture of H0, where the
// dissipators keep their form and the fast Rabi phase is known in closed
// form.  Laboratory (rotating-frame) signals are rebuilt from
// free_propagator() when needed.
#pragma once

#include "nvfq/dynamics.hpp"
#include "nvfq/envelope.hpp"
#include "nvfq/hamiltonians.hpp"
#include "nvfq/qstate.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nvfq {

/// Coupling model: the full interaction-picture Hamiltonian, or its
/// rotating-wave approximation.
enum class Model { exact, effective };

std::string to_string(Model model);

/// Product state (cos t|0> + e^{i vp} sin t|1>)(cos a|+> + e^{i p} sin a|->).
struct InitialStateSpec {
  double theta = 0;
  double varphi = 0;
  double alpha = 0;
  double phi = 0;

  Qubit2State<double> spin() const { return Qubit2State<double>::from_angles(theta, varphi); }
  Qubit2State<double> flux() const { return Qubit2State<double>::from_angles(alpha, phi); }
  JointState<double> state() const { return JointState<double>::product(spin(), flux()); }
};

/// |0> -> cos b|0> + e^{ic} sin b|1>, |1> -> cos b|1> - e^{-ic} sin b|0>.
struct RotationSpec {
  double beta = 0;
  double chi = 0;

  Matrix2c matrix() const;
};

struct ScalarResult {
  std::string name;
  double value = 0;
  Model model = Model::effective;
  std::string decoherence;
};

/// Column-oriented table; the index column comes first.
struct DataTable {
  DataTable() = default;
  explicit DataTable(std::string table_name) : name(std::move(table_name)) {}

  std::string name;
  std::string index_name = "t_in_coupling_periods";
  std::vector<double> index;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  void add_column(std::string column, std::vector<double> values);
};

struct ProtocolReport {
  std::string protocol;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ScalarResult> scalars;
  std::vector<DataTable> tables;
  std::vector<std::string> warnings;

  void add_scalar(std::string name, double value, Model model, const DecoherenceModel& dec);
  double scalar(std::string_view name) const;
  const DataTable& table(std::string_view name) const;
};

struct ProtocolOptions {
  SystemParams system;
  Model model = Model::effective;
  /// dt (0 = automatic) and method are honoured; t_max and record_stride are
  /// set by each protocol.
  IntegratorConfig integrator;
};

// ---------------------------------------------------------------------------
// Closed-form resonant dynamics

/// State at time t (units 1/g) under the static effective coupling.
JointState<double> analytic_evolution(const InitialStateSpec& spec, double t, double g = 1);

/// Excited flux population in the interaction picture,
/// (1 + sin 2a cos p cos(g t / 2)) / 2.
double analytic_p1_interaction(double alpha, double phi, double t, double g = 1);

/// Fixed phase picked up by a complete transfer: spin |0>,|1> land on flux
/// |+>, -i|->, and flux |+>,|-> land on spin |0>, -i|1>.
Matrix2c transfer_phase_map();

/// Duration of a complete transfer, pi/g.
double transfer_time(const SystemParams& sp);

// ---------------------------------------------------------------------------
// Building blocks

/// Interaction-picture generator for the chosen model.
HamiltonianModel interaction_generator(const SystemParams& sp, Model model);

/// Evolves a joint density matrix for a duration t in the interaction
/// picture and returns the final state.
Matrix4c propagate(const Matrix4c& rho, double t, const DecoherenceModel& dec,
                   const ProtocolOptions& options);

/// Rotating-frame density matrix from an interaction-picture one.
Matrix4c to_rotating_frame(const Matrix4c& rho_interaction, const SystemParams& sp, double t);

// ---------------------------------------------------------------------------
// Coupling detection

struct DetectionOptions : ProtocolOptions {
  double window_periods = 4;       ///< duration in units of 2pi/g
  int samples_per_rabi_period = 16;
  EnvelopeOptions envelope;
  /// Half-width of the slow-minimum search, units of 2pi/g.
  double minimum_window_periods = 0.05;
};

struct DetectionCurve {
  double detuning = 0;  ///< Omega + delta
  std::vector<double> p1;           ///< rotating-frame signal
  std::vector<double> baseline_p1;  ///< same with g = 0
  Envelope envelope;
  Envelope baseline;
  double visibility = 0;
  bool crosses_half = false;
  double max_minimum_separation = 0;
};

struct DetectionResult {
  std::vector<double> times;  ///< shared sample grid, units 1/g
  std::vector<DetectionCurve> curves;
  /// Detuning whose envelope crosses 1/2; empty when none does.  With several
  /// crossings the largest visibility wins.
  std::optional<double> resonance;
  ProtocolReport report;
};

/// Flux qubit starts in |1>, spin in `spin_init`; the rotating-frame P1 is
/// recorded for each Omega + delta in `detunings` plus the g = 0 baseline.
DetectionResult detection_scan(const std::vector<double>& detunings, const DecoherenceModel& dec,
                               const Qubit2State<double>& spin_init,
                               const DetectionOptions& options = {});

// ---------------------------------------------------------------------------
// Spin initialization

struct InitializationResult {
  std::vector<double> fidelity;  ///< after each round
  Matrix2c final_spin;
  ProtocolReport report;
};

/// Rounds of: flux prepared in |+>, interact for pi/g, discard the flux qubit.
InitializationResult initialize_spin(const Matrix2c& spin, int iterations,
                                     const DecoherenceModel& dec,
                                     const ProtocolOptions& options = {});

struct EnsembleAverage {
  std::vector<double> mean;            ///< per iteration
  std::vector<double> standard_error;  ///< Monte-Carlo
  ProtocolReport report;
};

/// initialize_spin averaged over Haar-random spin inputs.
EnsembleAverage initialization_average(const DecoherenceModel& dec, int samples, int iterations,
                                       std::uint64_t seed, const ProtocolOptions& options = {},
                                       int workers = 1);

// ---------------------------------------------------------------------------
// Quantum memory and rotations

struct SpinResult {
  Matrix2c final_spin;
  double fidelity = 0;
  ProtocolReport report;
};

/// Spin in |0>, flux in cos a|+> + e^{ip} sin a|->; after pi/g the fidelity
/// of the spin with cos a|0> + e^{ip} sin a|1> (transfer phase undone).
SpinResult memory_transfer(double alpha, double phi, const DecoherenceModel& dec,
                           const ProtocolOptions& options = {});

/// Transfer to the flux qubit, instantaneous flux pulse with the coupling
/// off (optionally followed by `idle_time` of flux-only decoherence),
/// transfer back.  The pulse is pre-compensated for the transfer phase so
/// that the net spin map is RotationSpec::matrix().
SpinResult rotate_spin(const Qubit2State<double>& spin, const RotationSpec& rotation,
                       const DecoherenceModel& dec, const ProtocolOptions& options = {},
                       double idle_time = 0);

// ---------------------------------------------------------------------------
// Tomography

struct TomographyOptions : ProtocolOptions {
  /// Shots per Pauli axis; empty uses exact expectation values.
  std::optional<int> shots;
  /// Rescale a reconstructed Bloch vector longer than one.
  bool project_to_ball = true;
};

struct TomographyResult {
  Vector3d flux_expectations;  ///< <sx>, <sy>, <sz> of the flux qubit
  Vector3d bloch;              ///< reconstructed spin Bloch vector
  double theta = 0;            ///< spin polar half-angle estimate
  double varphi = 0;           ///< spin phase estimate
  Matrix2c estimate;
  double fidelity = 0;  ///< with the input when it is pure, else NaN
  bool low_shot_warning = false;
  ProtocolReport report;
};

TomographyResult tomography(const Matrix2c& spin, const DecoherenceModel& dec,
                            SeedStream& rng, const TomographyOptions& options = {});

/// tomography() averaged over Haar-random pure inputs.
EnsembleAverage tomography_average(const DecoherenceModel& dec, int samples, std::uint64_t seed,
                                   const TomographyOptions& options = {}, int workers = 1);

// ---------------------------------------------------------------------------
// Rotating-wave validation

struct RwaValidation {
  std::vector<double> times;
  std::vector<std::pair<double, std::pair<std::vector<double>, std::vector<double>>>> curves;
  std::vector<double> max_deviation;  ///< per detuning
  ProtocolReport report;
};

/// Population of |1,+> under the exact and effective models over
/// [0, window] for each detuning Omega + delta.
RwaValidation validate_rwa(const SystemParams& sp, const std::vector<double>& detunings,
                           double window_periods = 2, const IntegratorConfig& integrator = {},
                           int points = 2001);

}  // namespace nvfq
