// Complex linear algebra on the spin (2), flux-qubit (2) and joint (4)
// Hilbert spaces.
//
// Basis conventions used everywhere in the library:
//   spin:   index 0 -> |0> (m_S = 0), index 1 -> |1> (m_S = +1),
//           sigma_z = |1><1| - |0><0|
//   flux:   index 0 -> |+>, index 1 -> |->, with |+-> = (|1> +- |0>)/sqrt(2)
//           (eigenbasis of the flux-qubit sigma_x)
//   joint:  spin (x) flux, i.e. (|0,+>, |0,->, |1,+>, |1,->)
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace nvfq {

template <typename Scalar>
using Vector2 = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<std::complex<Scalar>, 4, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using cd = std::complex<double>;
using Vector2c = Vector2<double>;
using Vector4c = Vector4<double>;
using Matrix2c = Matrix2<double>;
using Matrix4c = Matrix4<double>;
using Vector3d = Eigen::Vector3d;

/// Subsystem selector for partial traces and local operators.
enum class Party { spin, flux };

/// Default seed stream for every stochastic routine.
using SeedStream = std::mt19937_64;

// ---------------------------------------------------------------------------
// Single-qubit operators

/// Pauli operators written in a qubit's own index order.  For the spin this is
/// (|0>,|1>) with |1> the upper level, so sigma_z = diag(-1, 1).
namespace spin_ops {

template <typename Scalar = double>
Matrix2<Scalar> identity() {
  return Matrix2<Scalar>::Identity();
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_x() {
  Matrix2<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_y() {
  using C = std::complex<Scalar>;
  Matrix2<Scalar> m;
  m << C(0), C(0, 1), C(0, -1), C(0);
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_z() {
  Matrix2<Scalar> m;
  m << -1, 0, 0, 1;
  return m;
}

/// sigma_+ = |1><0|
template <typename Scalar = double>
Matrix2<Scalar> raising() {
  Matrix2<Scalar> m;
  m << 0, 0, 1, 0;
  return m;
}

/// sigma_- = |0><1|
template <typename Scalar = double>
Matrix2<Scalar> lowering() {
  Matrix2<Scalar> m;
  m << 0, 1, 0, 0;
  return m;
}

}  // namespace spin_ops

/// Flux-qubit operators.  The physical operators are defined in the
/// {|0>,|1>} basis exactly as for the spin; the matrices returned here are
/// their representation in the (|+>,|->) working basis.
namespace flux_ops {

template <typename Scalar = double>
Matrix2<Scalar> identity() {
  return Matrix2<Scalar>::Identity();
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_x() {
  Matrix2<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_y() {
  using C = std::complex<Scalar>;
  Matrix2<Scalar> m;
  m << C(0), C(0, 1), C(0, -1), C(0);
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> sigma_z() {
  Matrix2<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

/// sigma_+ = |1><0| (raising in the sigma_z sense).
template <typename Scalar = double>
Matrix2<Scalar> raising() {
  using C = std::complex<Scalar>;
  return (sigma_x<Scalar>() + C(0, 1) * sigma_y<Scalar>()) / Scalar(2);
}

/// sigma_- = |0><1|
template <typename Scalar = double>
Matrix2<Scalar> lowering() {
  using C = std::complex<Scalar>;
  return (sigma_x<Scalar>() - C(0, 1) * sigma_y<Scalar>()) / Scalar(2);
}

/// sigma_{+,x} = |+><-| = (sigma_z - i sigma_y)/2
template <typename Scalar = double>
Matrix2<Scalar> raising_x() {
  Matrix2<Scalar> m;
  m << 0, 1, 0, 0;
  return m;
}

/// sigma_{-,x} = |-><+| = (sigma_z + i sigma_y)/2
template <typename Scalar = double>
Matrix2<Scalar> lowering_x() {
  Matrix2<Scalar> m;
  m << 0, 0, 1, 0;
  return m;
}

/// Columns are |+> and |-> expressed in the (|0>,|1>) basis, so an operator
/// O in the working basis reads V O V^dagger in the computational basis.
template <typename Scalar = double>
Matrix2<Scalar> x_to_z_basis() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2<Scalar> v;
  v << s, -s, s, s;
  return v;
}

/// Excited flux state |1> = (|+> + |->)/sqrt(2) in the working basis.
template <typename Scalar = double>
Vector2<Scalar> excited() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return Vector2<Scalar>(s, s);
}

/// Ground flux state |0> = (|+> - |->)/sqrt(2) in the working basis.
template <typename Scalar = double>
Vector2<Scalar> ground() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return Vector2<Scalar>(s, -s);
}

}  // namespace flux_ops

// ---------------------------------------------------------------------------
// Tensor structure

namespace detail {

template <typename Derived>
void require_qubit_operator(const Eigen::MatrixBase<Derived>& m, const char* what) {
  constexpr int rows = Derived::RowsAtCompileTime;
  constexpr int cols = Derived::ColsAtCompileTime;
  static_assert(rows == Eigen::Dynamic || rows == 2, "tensor: operand must be 2x2");
  static_assert(cols == Eigen::Dynamic || cols == 2, "tensor: operand must be 2x2");
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument(std::string("tensor: ") + what + " operand is " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected 2x2");
  }
}

}  // namespace detail

/// Kronecker product in the fixed order spin (x) flux.  Dynamic-size operands
/// are checked at run time and rejected with std::invalid_argument.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& spin, const Eigen::MatrixBase<DerivedB>& flux) {
  using Complex = typename DerivedA::Scalar;
  using Real = typename Complex::value_type;
  detail::require_qubit_operator(spin, "spin");
  detail::require_qubit_operator(flux, "flux");
  Matrix4<Real> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = spin(i, j) * flux;
  return out;
}

/// Operator acting on one party only, extended by the identity.
template <typename Derived>
auto local(Party party, const Eigen::MatrixBase<Derived>& op) {
  using Real = typename Derived::Scalar::value_type;
  return party == Party::spin ? tensor(op, Matrix2<Real>::Identity())
                              : tensor(Matrix2<Real>::Identity(), op);
}

template <typename Scalar>
Vector4<Scalar> product_state(const Vector2<Scalar>& spin, const Vector2<Scalar>& flux) {
  Vector4<Scalar> out;
  out << spin(0) * flux(0), spin(0) * flux(1), spin(1) * flux(0), spin(1) * flux(1);
  return out;
}

/// Change of basis from the working basis to the product sigma_z basis
/// (|0,0>,|0,1>,|1,0>,|1,1>).
template <typename Scalar = double>
Matrix4<Scalar> working_to_product_z() {
  return tensor(Matrix2<Scalar>::Identity(), flux_ops::x_to_z_basis<Scalar>());
}

/// Traces out `traced` and returns the reduced state of the other party.
template <typename Scalar>
Matrix2<Scalar> partial_trace(const Matrix4<Scalar>& rho, Party traced) {
  Matrix2<Scalar> out = Matrix2<Scalar>::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k) {
        out(a, b) += traced == Party::spin ? rho(2 * k + a, 2 * k + b) : rho(2 * a + k, 2 * b + k);
      }
  return out;
}

template <typename Derived>
typename Derived::Scalar::value_type hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar::value_type tol) {
  return hermiticity_error(m) <= tol;
}

// ---------------------------------------------------------------------------
// States

/// Normalized single-qubit pure state cos(t)|a> + e^{ip} sin(t)|b>.  The
/// first basis vector is |0> for the spin and |+> for the flux qubit.
template <typename Scalar = double>
class Qubit2State {
 public:
  Qubit2State() : amplitudes_(1, 0) {}

  explicit Qubit2State(const Vector2<Scalar>& amplitudes) : amplitudes_(amplitudes) {
    const Scalar n = amplitudes_.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw std::invalid_argument("Qubit2State: amplitudes must have finite nonzero norm");
    amplitudes_ /= n;
  }

  static Qubit2State from_angles(Scalar angle, Scalar phase) {
    return Qubit2State(Vector2<Scalar>(std::cos(angle), std::polar(std::sin(angle), phase)));
  }

  const Vector2<Scalar>& amplitudes() const { return amplitudes_; }
  Matrix2<Scalar> density() const { return amplitudes_ * amplitudes_.adjoint(); }

  /// Polar parameterization; the half angle runs over [0, pi/2].
  Scalar angle() const { return std::atan2(std::abs(amplitudes_(1)), std::abs(amplitudes_(0))); }
  Scalar phase() const {
    if (std::abs(amplitudes_(1)) == Scalar(0) || std::abs(amplitudes_(0)) == Scalar(0))
      return Scalar(0);
    Scalar p = std::arg(amplitudes_(1) * std::conj(amplitudes_(0)));
    return p < 0 ? p + 2 * std::numbers::pi_v<Scalar> : p;
  }

 private:
  Vector2<Scalar> amplitudes_;
};

/// Normalized pure state of the joint system in the working basis.
template <typename Scalar = double>
class JointState {
 public:
  JointState() : amplitudes_(Vector4<Scalar>::UnitX()) {}

  explicit JointState(const Vector4<Scalar>& amplitudes) : amplitudes_(amplitudes) {
    const Scalar n = amplitudes_.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw std::invalid_argument("JointState: amplitudes must have finite nonzero norm");
    amplitudes_ /= n;
  }

  static JointState product(const Qubit2State<Scalar>& spin, const Qubit2State<Scalar>& flux) {
    return JointState(product_state(spin.amplitudes(), flux.amplitudes()));
  }

  const Vector4<Scalar>& amplitudes() const { return amplitudes_; }
  Matrix4<Scalar> density() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector4<Scalar> amplitudes_;
};

struct DensityDiagnostics {
  double hermiticity = 0;     ///< max |rho - rho^dagger| element
  double trace_error = 0;     ///< |Tr rho - 1|
  double min_eigenvalue = 0;  ///< of the Hermitian part
};

template <typename Scalar>
DensityDiagnostics diagnose(const Matrix4<Scalar>& rho) {
  DensityDiagnostics d;
  d.hermiticity = static_cast<double>(hermiticity_error(rho));
  d.trace_error = static_cast<double>(std::abs(rho.trace() - std::complex<Scalar>(1)));
  const Matrix4<Scalar> h = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix4<Scalar>> es(h, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = static_cast<double>(es.eigenvalues().minCoeff());
  return d;
}

/// Density operator on the joint space with validated invariants.
template <typename Scalar = double>
class JointDensityMatrix {
 public:
  static constexpr double hermiticity_tolerance = 1e-10;
  static constexpr double trace_tolerance = 1e-10;
  static constexpr double positivity_floor = -1e-8;

  explicit JointDensityMatrix(const Matrix4<Scalar>& matrix) : matrix_(matrix) {
    const auto d = diagnose(matrix_);
    if (d.hermiticity > hermiticity_tolerance)
      throw std::invalid_argument("JointDensityMatrix: not Hermitian");
    if (d.trace_error > trace_tolerance)
      throw std::invalid_argument("JointDensityMatrix: trace differs from 1");
    if (d.min_eigenvalue < positivity_floor)
      throw std::invalid_argument("JointDensityMatrix: negative eigenvalue");
  }

  explicit JointDensityMatrix(const JointState<Scalar>& psi) : matrix_(psi.density()) {}

  const Matrix4<Scalar>& matrix() const { return matrix_; }

 private:
  Matrix4<Scalar> matrix_;
};

// ---------------------------------------------------------------------------
// Figures of merit

/// <psi|rho|psi> for a pure target.
template <typename Scalar>
Scalar fidelity(const Matrix2<Scalar>& rho, const Qubit2State<Scalar>& psi) {
  const Vector2<Scalar>& v = psi.amplitudes();
  return std::real(v.dot(rho * v));
}

template <typename Scalar>
Scalar fidelity(const Matrix4<Scalar>& rho, const JointState<Scalar>& psi) {
  const Vector4<Scalar>& v = psi.amplitudes();
  return std::real(v.dot(rho * v));
}

/// 1 - |<a|b>|^2
template <typename Derived>
double infidelity(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return 1.0 - std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

/// (<sigma_x>, <sigma_y>, <sigma_z>) with the spin Pauli convention.  The same
/// function applied to a flux density matrix in the working basis returns the
/// Bloch vector with respect to the flux (|+>,|->) axis labels.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> bloch_vector(const Matrix2<Scalar>& rho) {
  return {std::real((rho * spin_ops::sigma_x<Scalar>()).trace()),
          std::real((rho * spin_ops::sigma_y<Scalar>()).trace()),
          std::real((rho * spin_ops::sigma_z<Scalar>()).trace())};
}

template <typename Scalar>
Matrix2<Scalar> density_from_bloch(const Eigen::Matrix<Scalar, 3, 1>& r) {
  return (Matrix2<Scalar>::Identity() + r.x() * spin_ops::sigma_x<Scalar>() +
          r.y() * spin_ops::sigma_y<Scalar>() + r.z() * spin_ops::sigma_z<Scalar>()) /
         Scalar(2);
}

/// Haar-random single-qubit state: cos(2 theta) uniform on [-1, 1] and the
/// relative phase uniform on [0, 2 pi).  The factor two comes from the
/// cos(theta)/sin(theta) amplitude parameterization.
template <typename Scalar = double, typename Rng>
Qubit2State<Scalar> haar_random_state(Rng& rng) {
  std::uniform_real_distribution<Scalar> cos_polar(Scalar(-1), Scalar(1));
  std::uniform_real_distribution<Scalar> azimuth(Scalar(0), 2 * std::numbers::pi_v<Scalar>);
  const Scalar c = cos_polar(rng);
  const Scalar phase = azimuth(rng);
  return Qubit2State<Scalar>::from_angles(std::acos(c) / Scalar(2), phase);
}

}  // namespace nvfq
