#include "nvfq/hamiltonians.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace nvfq {

namespace {

constexpr double kHbar = 1.054571817e-34;

const Matrix4c& spin_z() {
  static const Matrix4c m = local(Party::spin, spin_ops::sigma_z());
  return m;
}
const Matrix4c& flux_z() {
  static const Matrix4c m = local(Party::flux, flux_ops::sigma_z());
  return m;
}
const Matrix4c& flux_x() {
  static const Matrix4c m = local(Party::flux, flux_ops::sigma_x());
  return m;
}

cd phase(double angle) { return std::polar(1.0, angle); }

Matrix4c with_adjoint(const Matrix4c& m) { return m + m.adjoint(); }

}  // namespace

double spin_frequency(const PhysicalParams& p) {
  return p.zero_field_splitting + p.gyromagnetic_ratio * p.b_ext;
}

double coupling_strength(const PhysicalParams& p) {
  if (!(p.distance > 0)) throw DomainError("coupling_strength: distance r must be positive");
  return p.gyromagnetic_ratio * p.mu0 * p.persistent_current /
         (std::sqrt(2.0) * 2 * std::numbers::pi * p.distance);
}

double drive_rabi_frequency(const PhysicalParams& p) {
  return p.persistent_current * p.loop_area * p.drive_amplitude / kHbar;
}

double flux_bias(const PhysicalParams& p) {
  return 2 * p.persistent_current * (p.applied_flux - p.flux_quantum / 2) / kHbar;
}

SystemParams SystemParams::from_physical(const PhysicalParams& p, double drive_frequency) {
  const double g = coupling_strength(p);
  if (!(g > 0)) throw DomainError("SystemParams::from_physical: coupling must be positive");
  SystemParams sp;
  sp.omega_s = spin_frequency(p) / g;
  sp.Delta = drive_frequency / g;
  sp.Omega = drive_rabi_frequency(p) / g;
  sp.g = 1;
  sp.epsilon = flux_bias(p) / g;
  return sp;
}

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::lab: return "lab";
    case Frame::rotating: return "rotating";
    case Frame::interaction: return "interaction";
    case Frame::effective: return "effective";
  }
  return "unknown";
}

HamiltonianModel::HamiltonianModel(Frame frame, Generator generator, double fastest_frequency,
                                   bool is_static)
    : frame_(frame),
      generator_(std::move(generator)),
      fastest_frequency_(fastest_frequency),
      is_static_(is_static) {}

HamiltonianModel HamiltonianModel::constant(Frame frame, const Matrix4c& h,
                                            double fastest_frequency) {
  return HamiltonianModel(frame, [h](double) { return h; }, fastest_frequency, true);
}

HamiltonianModel build_lab(const SystemParams& sp, DriveTerms drive) {
  const Matrix4c spin_flux_xx = tensor(spin_ops::sigma_x(), flux_ops::sigma_x());
  const Matrix4c h_static = sp.omega_s / 2 * spin_z() + sp.Delta / 2 * flux_z() +
                            sp.epsilon / 2 * flux_x() + sp.g * spin_flux_xx;
  const double fastest = std::abs(sp.omega_s) + std::abs(sp.Delta) + std::abs(sp.Omega) +
                         std::abs(sp.epsilon) + 2 * std::abs(sp.g);
  const double omega = sp.Delta;  // drive locked to the flux-qubit gap
  if (drive == DriveTerms::full) {
    const Matrix4c sx = flux_x();
    return HamiltonianModel(
        Frame::lab,
        [h_static, sx, omega, amp = sp.Omega](double t) -> Matrix4c {
          return h_static + amp * std::cos(omega * t) * sx;
        },
        fastest, sp.Omega == 0);
  }
  const Matrix4c up = local(Party::flux, flux_ops::raising());
  return HamiltonianModel(
      Frame::lab,
      [h_static, up, omega, amp = sp.Omega](double t) -> Matrix4c {
        return h_static + amp / 2 * with_adjoint(phase(-omega * t) * up);
      },
      fastest, sp.Omega == 0);
}

Matrix4c free_hamiltonian(const SystemParams& sp) {
  return sp.delta() / 2 * spin_z() + sp.Omega / 2 * flux_x();
}

Matrix4c free_propagator(const SystemParams& sp, double t) {
  // H0 diagonal entries: spin -+delta/2, flux +-Omega/2.
  Matrix4c u = Matrix4c::Zero();
  for (int s = 0; s < 2; ++s)
    for (int f = 0; f < 2; ++f) {
      const double energy = (s == 0 ? -1 : 1) * sp.delta() / 2 + (f == 0 ? 1 : -1) * sp.Omega / 2;
      u(2 * s + f, 2 * s + f) = phase(-energy * t);
    }
  return u;
}

Matrix4c lab_frame_transform(const SystemParams& sp, double t) {
  const Matrix4c generator = spin_z() + flux_z();
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(generator);
  const Eigen::Vector4d w = es.eigenvalues();
  Eigen::Vector4cd d;
  for (int i = 0; i < 4; ++i) d(i) = phase(-sp.Delta * t * w(i) / 2);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

RotatingFrameHamiltonian build_rotating(const SystemParams& sp) {
  const Matrix4c h0 = free_hamiltonian(sp);
  const Matrix4c sp_up = local(Party::spin, spin_ops::raising());
  const Matrix4c fq_up = local(Party::flux, flux_ops::raising());
  const double g = sp.g;
  const double d = sp.Delta;
  // Expanded product: s+f+ e^{2iDt} + s+f- + s-f+ + s-f- e^{-2iDt}.
  const Matrix4c up_up = sp_up * fq_up;
  const Matrix4c up_down = sp_up * fq_up.adjoint();
  auto hint = [g, d, up_up, up_down](double t) -> Matrix4c {
    return g * with_adjoint(phase(2 * d * t) * up_up + up_down);
  };
  return {HamiltonianModel::constant(Frame::rotating, h0,
                                     std::abs(sp.delta()) + std::abs(sp.Omega)),
          HamiltonianModel(Frame::rotating, hint, 2 * std::abs(d), g == 0)};
}

HamiltonianModel build_rotating_total(const SystemParams& sp) {
  auto [free, interaction] = build_rotating(sp);
  const double fastest = std::max(2 * std::abs(sp.Delta),
                                  std::abs(sp.delta()) + std::abs(sp.Omega) + 2 * std::abs(sp.g));
  const Matrix4c h0 = free(0.0);
  return HamiltonianModel(
      Frame::rotating,
      [h0, hint = std::move(interaction)](double t) -> Matrix4c { return h0 + hint(t); }, fastest,
      sp.g == 0);
}

HamiltonianModel build_interaction(const SystemParams& sp) {
  // With sigma_{+-}^fq = (sx -+ s_{+,x} +- s_{-,x})/2 and H0 acting as
  // s+^s -> e^{i delta t}, s_{+,x} -> e^{i Omega t}, s_{-,x} -> e^{-i Omega t}.
  const Matrix4c s_up = local(Party::spin, spin_ops::raising());
  const Matrix4c fx = flux_x();
  const Matrix4c fx_up = local(Party::flux, flux_ops::raising_x());
  const Matrix4c fx_down = local(Party::flux, flux_ops::lowering_x());
  const Matrix4c a_x = s_up * fx;
  const Matrix4c a_up = s_up * fx_up;
  const Matrix4c a_down = s_up * fx_down;
  const double g = sp.g, big = 2 * sp.Delta + sp.delta(), small = sp.delta(), om = sp.Omega;
  auto h = [=](double t) -> Matrix4c {
    const cd fast = phase(big * t);
    const cd slow = phase(small * t);
    const cd rabi = phase(om * t);
    const cd rabi_c = std::conj(rabi);
    const Matrix4c upper = fast * (a_x - rabi * a_up + rabi_c * a_down) +
                           slow * (a_x - rabi_c * a_down + rabi * a_up);
    return g / 2 * with_adjoint(upper);
  };
  const double fastest = std::abs(big) + std::abs(om);
  return HamiltonianModel(Frame::interaction, h, fastest, g == 0);
}

HamiltonianModel build_effective(const SystemParams& sp, Branch branch) {
  const Matrix4c s_up = local(Party::spin, spin_ops::raising());
  const double g = sp.g;
  if (branch == Branch::plus) {
    const Matrix4c coupling = s_up * local(Party::flux, flux_ops::raising_x());
    const double rate = sp.Omega + sp.delta();
    const double fastest = std::max(std::abs(rate), std::abs(g));
    if (rate == 0) {
      return HamiltonianModel::constant(Frame::effective, g / 2 * with_adjoint(coupling), fastest);
    }
    return HamiltonianModel(
        Frame::effective,
        [coupling, g, rate](double t) -> Matrix4c {
          return g / 2 * with_adjoint(phase(rate * t) * coupling);
        },
        fastest, g == 0);
  }
  const Matrix4c coupling = s_up * local(Party::flux, flux_ops::lowering_x());
  const double rate = sp.delta() - sp.Omega;
  const double fastest = std::max(std::abs(rate), std::abs(g));
  if (rate == 0) {
    return HamiltonianModel::constant(Frame::effective, -g / 2 * with_adjoint(coupling), fastest);
  }
  return HamiltonianModel(
      Frame::effective,
      [coupling, g, rate](double t) -> Matrix4c {
        return -g / 2 * with_adjoint(phase(rate * t) * coupling);
      },
      fastest, g == 0);
}

HamiltonianModel build_effective_rotating(const SystemParams& sp, Branch branch) {
  const Matrix4c s_up = local(Party::spin, spin_ops::raising());
  const Matrix4c coupling =
      branch == Branch::plus
          ? Matrix4c(sp.g / 2 * with_adjoint(s_up * local(Party::flux, flux_ops::raising_x())))
          : Matrix4c(-sp.g / 2 * with_adjoint(s_up * local(Party::flux, flux_ops::lowering_x())));
  return HamiltonianModel::constant(Frame::rotating, free_hamiltonian(sp) + coupling,
                                    std::abs(sp.delta()) + std::abs(sp.Omega) + std::abs(sp.g));
}

}  // namespace nvfq
