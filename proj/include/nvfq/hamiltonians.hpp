// Frame-tagged Hamiltonian generators for the driven flux qubit coupled to
// an NV spin.  hbar = 1 and every frequency is an angular frequency in units
// of the nominal coupling g (so SystemParams::g is 1 unless switched off).
#pragma once

#include "nvfq/qstate.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace nvfq {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// SI device parameters.  Angular quantities are in rad/s.
struct PhysicalParams {
  double zero_field_splitting = 2 * std::numbers::pi * 2.88e9;  ///< D
  double gyromagnetic_ratio = 2 * std::numbers::pi * 28e9;     ///< |gamma_e|, rad/(s T)
  double b_ext = 0;                                             ///< T
  double persistent_current = 500e-9;                           ///< I_p, A
  double distance = 15e-9;                                      ///< r, m
  double mu0 = 4e-7 * std::numbers::pi;                         ///< T m / A
  double applied_flux = 2.067833848e-15 / 2;                    ///< Phi, Wb
  double flux_quantum = 2.067833848e-15;                        ///< Phi_0, Wb
  double loop_area = 0;                                         ///< A, m^2
  double drive_amplitude = 0;                                   ///< B_0, T
};

/// omega_s = D + gamma_e B_ext
double spin_frequency(const PhysicalParams& p);

/// g = gamma_e mu0 I_p / (sqrt(2) 2 pi r).  Throws DomainError for r <= 0.
double coupling_strength(const PhysicalParams& p);

/// Omega = I_p A B_0 / hbar
double drive_rabi_frequency(const PhysicalParams& p);

/// epsilon = 2 I_p (Phi - Phi_0/2) / hbar
double flux_bias(const PhysicalParams& p);

/// Model frequencies in units of g.  The detuning delta is derived from
/// omega_s and Delta and cannot be set on its own.
struct SystemParams {
  double omega_s = 28800;
  double Delta = 25800;
  double Omega = -3000;
  double g = 1;
  double epsilon = 0;

  double delta() const { return omega_s - Delta; }
  /// Omega + delta, zero on the working resonance.
  double detuning() const { return Omega + delta(); }

  /// Same device with Omega chosen so that Omega + delta = detuning.
  SystemParams with_detuning(double detuning) const {
    SystemParams p = *this;
    p.Omega = detuning - delta();
    return p;
  }

  SystemParams with_coupling(double coupling) const {
    SystemParams p = *this;
    p.g = coupling;
    return p;
  }

  static SystemParams from_physical(const PhysicalParams& p, double drive_frequency);

  bool operator==(const SystemParams&) const = default;
};

enum class Frame { lab, rotating, interaction, effective };

std::string to_string(Frame frame);

/// Branch of the effective coupling; `plus` is static when Omega = -delta.
enum class Branch { plus, minus };

/// `full` keeps Omega cos(Delta t) sigma_x; `co_rotating` keeps only the part
/// that survives the transformation to the rotating frame.
enum class DriveTerms { full, co_rotating };

/// A Hermitian generator t -> H(t) on the joint space.
class HamiltonianModel {
 public:
  using Generator = std::function<Matrix4c(double)>;

  HamiltonianModel(Frame frame, Generator generator, double fastest_frequency, bool is_static);

  static HamiltonianModel constant(Frame frame, const Matrix4c& h, double fastest_frequency);

  Matrix4c operator()(double t) const { return generator_(t); }

  Frame frame() const { return frame_; }
  /// Largest angular frequency present; sets the integrator resolution bound.
  double fastest_frequency() const { return fastest_frequency_; }
  bool is_static() const { return is_static_; }

 private:
  Frame frame_;
  Generator generator_;
  double fastest_frequency_;
  bool is_static_;
};

/// H(t) = w_s sz/2 + Delta sz/2 + eps sx/2 + g sx sx + Omega sx cos(Delta t)
HamiltonianModel build_lab(const SystemParams& sp, DriveTerms drive = DriveTerms::full);

struct RotatingFrameHamiltonian {
  HamiltonianModel free;         ///< H0 = delta/2 sz^s + Omega/2 sx^fq
  HamiltonianModel interaction;  ///< g (s+ e^{iDt} + h.c.)(s+ e^{iDt} + h.c.)
};

RotatingFrameHamiltonian build_rotating(const SystemParams& sp);

/// H0 + H_int as one rotating-frame generator.
HamiltonianModel build_rotating_total(const SystemParams& sp);

/// e^{iH0 t} H_int(t) e^{-iH0 t}, written out term by term.
HamiltonianModel build_interaction(const SystemParams& sp);

/// Rotating-wave coupling in the interaction picture of H0.
HamiltonianModel build_effective(const SystemParams& sp, Branch branch = Branch::plus);

/// H0 + H_eff expressed back in the rotating frame; static for either branch.
HamiltonianModel build_effective_rotating(const SystemParams& sp, Branch branch = Branch::plus);

/// H0, time independent.
Matrix4c free_hamiltonian(const SystemParams& sp);

/// e^{-i H0 t}.  H0 is diagonal in the working basis.
Matrix4c free_propagator(const SystemParams& sp, double t);

/// U_s(t) = exp(-i Delta t (sz^s + sz^fq)/2), which maps rotating-frame
/// states to the lab frame.
Matrix4c lab_frame_transform(const SystemParams& sp, double t);

}  // namespace nvfq
