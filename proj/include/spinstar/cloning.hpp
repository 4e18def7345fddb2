#pragma once

// Protocol-specific constructions for 1 -> M universal cloning on a spin
// star: the XXZ star Hamiltonian, the machine state |R>, the closed
// two-dimensional (|a>, |b>) subspace with its effective dynamics, the
// global spin-flip operator and the closed-form fidelity law.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinstar/errors.hpp"
#include "spinstar/hilbert.hpp"

namespace spinstar {

/// Couplings of the star Hamiltonian
///   H = (j1/2) sum_targets  (X0 Xt + Y0 Yt + lambda1 Z0 Zt)
///     + (j2/2) sum_ancillas (X0 Xa + Y0 Ya + lambda2 Z0 Za)
/// together with the derived register layout for M copies. The default
/// couplings (j1 = 1, j2 = -1, lambda1 = 2, lambda2 = -2) satisfy the
/// optimality relations j1 = -j2, lambda1 = -lambda2 with the anisotropy
/// choice lambda = 2.
struct CloneConfig {
  int copies;  // M
  double j1 = 1.0;
  double j2 = -1.0;
  double lambda1 = 2.0;
  double lambda2 = -2.0;

  explicit CloneConfig(int m) : copies(m) { validate(); }
  CloneConfig(int m, double j1_, double j2_, double lambda1_, double lambda2_)
      : copies(m), j1(j1_), j2(j2_), lambda1(lambda1_), lambda2(lambda2_) {
    validate();
  }

  /// j1 = -j2 and lambda1 = -lambda2, to relative tolerance 1e-12.
  bool optimal_condition() const {
    auto opposite = [](double x, double y) {
      const double scale = std::max(std::abs(x), std::abs(y));
      return std::abs(x + y) <= 1e-12 * scale || x + y == 0.0;
    };
    return opposite(j1, j2) && opposite(lambda1, lambda2);
  }

  double coupling() const { return j1; }
  double anisotropy() const { return lambda1; }

  /// Optimal evolution time t0 = sqrt(3) pi / (6 j1), i.e. phi = pi/2.
  double t0() const { return std::numbers::sqrt3 * std::numbers::pi / (6.0 * j1); }
  /// Rescaled time phi = sqrt(3) j1 t.
  double phi_of_time(double t) const { return std::numbers::sqrt3 * j1 * t; }
  double time_of_phi(double phi) const { return phi / (std::numbers::sqrt3 * j1); }

  QubitRegister reg() const { return QubitRegister::cloning(copies); }

 private:
  void validate() const {
    if (copies < 2) throw ConfigError("CloneConfig: M >= 2 required");
    if (j1 == 0.0) throw ConfigError("CloneConfig: j1 must be nonzero");
  }
};

/// Star-network XXZ Hamiltonian: input <-> target and input <-> ancilla
/// couplings only, no peripheral-peripheral terms.
inline PauliTermSum build_clone_hamiltonian(const CloneConfig& cfg) {
  const QubitRegister reg = cfg.reg();
  const int in = reg.input_index();
  PauliTermSum h(reg);
  for (int t : reg.target_indices()) {
    h.add({{in, PauliAxis::X}, {t, PauliAxis::X}}, cfg.j1 / 2.0);
    h.add({{in, PauliAxis::Y}, {t, PauliAxis::Y}}, cfg.j1 / 2.0);
    h.add({{in, PauliAxis::Z}, {t, PauliAxis::Z}}, cfg.j1 * cfg.lambda1 / 2.0);
  }
  for (int a : reg.ancilla_indices()) {
    h.add({{in, PauliAxis::X}, {a, PauliAxis::X}}, cfg.j2 / 2.0);
    h.add({{in, PauliAxis::Y}, {a, PauliAxis::Y}}, cfg.j2 / 2.0);
    h.add({{in, PauliAxis::Z}, {a, PauliAxis::Z}}, cfg.j2 * cfg.lambda2 / 2.0);
  }
  return h;
}

namespace detail {

inline std::vector<int> iota_indices(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

inline StateVector qubit_state(Complex down_amp, Complex up_amp) {
  Eigen::VectorXcd v(2);
  v << down_amp, up_amp;
  return StateVector(QubitRegister::plain(1), std::move(v));
}

}  // namespace detail

/// Machine state |R> = C sum_{i=1}^{M-1} sqrt(i(M-i)) |S(M,i)>_T |S(M-2,M-1-i)>_A
/// with C = sqrt(6/((M-1)M(M+1))), on the machine register (input absent).
inline StateVector build_r_state(int copies) {
  if (copies < 2) throw ConfigError("build_r_state: M >= 2 required");
  const QubitRegister reg = QubitRegister::machine(copies);
  const std::vector<int> targets = reg.target_indices();
  const std::vector<int> ancillas = reg.ancilla_indices();
  const double m = copies;
  const double c = std::sqrt(6.0 / ((m - 1.0) * m * (m + 1.0)));
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.dim()));
  for (int i = 1; i <= copies - 1; ++i) {
    const StateVector part = tensor_embed(
        {{dicke_state(copies, i), targets},
         {dicke_state(copies - 2, copies - 1 - i), ancillas}},
        reg);
    acc += c * std::sqrt(static_cast<double>(i) * (m - i)) * part.amplitudes();
  }
  return StateVector(reg, std::move(acc));
}

/// Coefficients gamma_i = sqrt(2(M-i)/(M(M+1))), i = 0..M-1, of the optimal
/// cloning transformation. Their squares sum to one.
struct CloningAmplitudes {
  int copies;
  std::vector<double> gamma;
};

inline CloningAmplitudes gamma_coefficients(int copies) {
  if (copies < 2) throw ConfigError("gamma_coefficients: M >= 2 required");
  CloningAmplitudes out{copies, {}};
  const double m = copies;
  out.gamma.reserve(static_cast<std::size_t>(copies));
  for (int i = 0; i < copies; ++i)
    out.gamma.push_back(std::sqrt(2.0 * (m - i) / (m * (m + 1.0))));
  return out;
}

/// Ideal post-evolution state on the cloning register, up to a global
/// phase: for an up input, sum_i gamma_i |S(M,M-i)>_T |S(M-1,i)>_{A+I};
/// for a down input the spin-flipped counterpart
/// sum_i gamma_{M-1-i} |S(M,M-1-i)>_T |S(M-1,i)>_{A+I}.
inline StateVector target_output_state(int copies, bool input_up) {
  if (copies < 2) throw ConfigError("target_output_state: M >= 2 required");
  const QubitRegister reg = QubitRegister::cloning(copies);
  const std::vector<int> targets = reg.target_indices();
  std::vector<int> rest = reg.ancilla_indices();
  rest.insert(rest.begin(), reg.input_index());
  const CloningAmplitudes gam = gamma_coefficients(copies);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.dim()));
  for (int i = 0; i < copies; ++i) {
    const int target_ups = input_up ? copies - i : copies - 1 - i;
    const double weight = input_up ? gam.gamma[static_cast<std::size_t>(i)]
                                   : gam.gamma[static_cast<std::size_t>(copies - 1 - i)];
    const StateVector part = tensor_embed(
        {{dicke_state(copies, target_ups), targets},
         {dicke_state(copies - 1, i), rest}},
        reg);
    acc += weight * part.amplitudes();
  }
  return StateVector(reg, std::move(acc));
}

/// (alpha|up> + beta|down>)_I tensor |R> on the cloning register.
inline StateVector clone_initial_state(int copies, Complex alpha, Complex beta) {
  const QubitRegister reg = QubitRegister::cloning(copies);
  return tensor_embed(
      {{detail::qubit_state(beta, alpha), {reg.input_index()}},
       {build_r_state(copies), detail::iota_indices(1, 2 * copies - 2)}},
      reg);
}

/// Orthonormal basis of the closed subspace:
///   |a> = |up>_I |R>
///   |b> = (sqrt(2) C / 2) |down>_I sum_j sqrt(j(j+1)) |S(M,j+1)>_T |S(M-2,M-1-j)>_A
struct AbBasis {
  StateVector a;
  StateVector b;
};

inline AbBasis build_ab_basis(int copies) {
  if (copies < 2) throw ConfigError("build_ab_basis: M >= 2 required");
  const QubitRegister reg = QubitRegister::cloning(copies);
  const QubitRegister machine = QubitRegister::machine(copies);
  const std::vector<int> machine_in_full = detail::iota_indices(1, 2 * copies - 2);

  const StateVector a = tensor_embed(
      {{detail::qubit_state(0.0, 1.0), {0}}, {build_r_state(copies), machine_in_full}}, reg);

  const double m = copies;
  const double c = std::sqrt(6.0 / ((m - 1.0) * m * (m + 1.0)));
  Eigen::VectorXcd bm = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(machine.dim()));
  for (int j = 1; j <= copies - 1; ++j) {
    const StateVector part = tensor_embed(
        {{dicke_state(copies, j + 1), machine.target_indices()},
         {dicke_state(copies - 2, copies - 1 - j), machine.ancilla_indices()}},
        machine);
    bm += (std::numbers::sqrt2 * c / 2.0) * std::sqrt(j * (j + 1.0)) * part.amplitudes();
  }
  const StateVector b = tensor_embed(
      {{detail::qubit_state(1.0, 0.0), {0}},
       {StateVector(machine, std::move(bm)), machine_in_full}},
      reg);
  return AbBasis{a, b};
}

/// max over psi in {|a>, |b>} of ||(1 - P_ab) H psi||, P_ab the projector
/// onto span{a, b}. Zero (to rounding) iff the subspace is closed under H.
inline double subspace_closure_residual(const CloneConfig& cfg) {
  const AbBasis ab = build_ab_basis(cfg.copies);
  const PauliTermSum h = build_clone_hamiltonian(cfg);
  auto residual = [&](const StateVector& psi) {
    Eigen::VectorXcd hv = apply_pauli_sum(h, psi).amplitudes();
    hv -= ab.a.amplitudes().dot(hv) * ab.a.amplitudes();
    hv -= ab.b.amplitudes().dot(hv) * ab.b.amplitudes();
    return hv.norm();
  };
  return std::max(residual(ab.a), residual(ab.b));
}

/// H restricted to the (|a>, |b>) basis: [[0, sqrt(2) J], [sqrt(2) J, -J lambda]].
struct Effective2x2 {
  Eigen::Matrix2d h;

  /// J(-lambda +- sqrt(lambda^2 + 8))/2, ascending.
  Eigen::Vector2d eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
};

inline Effective2x2 effective_hamiltonian(const CloneConfig& cfg) {
  if (!cfg.optimal_condition())
    throw ModelError("effective_hamiltonian: couplings violate j1 = -j2, lambda1 = -lambda2");
  Effective2x2 out;
  const double j = cfg.coupling();
  out.h << 0.0, std::numbers::sqrt2 * j, std::numbers::sqrt2 * j, -j * cfg.anisotropy();
  return out;
}

/// exp(-i H~ t) in the (|a>, |b>) basis, in closed form:
///   e^{i J t lambda / 2} ( cos(theta) 1 - i sin(theta)/r (lambda s_z + 2 sqrt(2) s_x) )
/// with r = sqrt(lambda^2 + 8), theta = J t r / 2 and s_z = diag(+1, -1)
/// on (|a>, |b>).
inline Eigen::Matrix2cd analytic_propagator_2d(const CloneConfig& cfg, double t) {
  if (!cfg.optimal_condition())
    throw ModelError("analytic_propagator_2d: couplings violate the closure relations");
  const double j = cfg.coupling();
  const double lambda = cfg.anisotropy();
  const double r = std::sqrt(lambda * lambda + 8.0);
  const double theta = 0.5 * j * t * r;
  const Complex phase = std::exp(Complex(0.0, 0.5 * j * lambda * t));
  Eigen::Matrix2cd traceless;
  traceless << lambda, 2.0 * std::numbers::sqrt2, 2.0 * std::numbers::sqrt2, -lambda;
  return phase * (std::cos(theta) * Eigen::Matrix2cd::Identity() -
                  Complex(0.0, std::sin(theta) / r) * traceless);
}

/// Flip every spin: the amplitude at basis index k moves to (2^n - 1) XOR k.
inline StateVector spin_flip_apply(const StateVector& psi) {
  const std::uint64_t mask = psi.dim() - 1;
  Eigen::VectorXcd out(psi.amplitudes().size());
  for (std::uint64_t k = 0; k < psi.dim(); ++k)
    out[static_cast<Eigen::Index>(k)] = psi.amp(mask ^ k);
  return StateVector(psi.reg(), std::move(out));
}

/// Input-independent single-copy fidelity as a function of the rescaled
/// time: F(phi) = cos^2(phi)/2 + (2M+1)/(3M) sin^2(phi).
inline double analytic_fidelity(int copies, double phi) {
  if (copies < 2) throw ConfigError("analytic_fidelity: M >= 2 required");
  const double m = copies;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return 0.5 * c * c + (2.0 * m + 1.0) / (3.0 * m) * s * s;
}

/// Closed-form single-copy reduced density matrix for the input
/// alpha|up> + beta|down>:
///   rho = cos^2(phi)/2 1 + sin^2(phi)/(3M) [ |a|^2(1+2M)+|b|^2(M-1)   b* a (M+2)
///                                            a* b (M+2)   |b|^2(1+2M)+|a|^2(M-1) ]
inline DensityMatrix2 analytic_single_copy_density(int copies, double phi,
                                                   Complex alpha, Complex beta) {
  if (copies < 2) throw ConfigError("analytic_single_copy_density: M >= 2 required");
  const double nrm = std::norm(alpha) + std::norm(beta);
  if (std::abs(nrm - 1.0) > 1e-12)
    throw DomainError("analytic_single_copy_density: input state not normalized");
  const double m = copies;
  const double c2 = std::cos(phi) * std::cos(phi) / 2.0;
  const double s2 = std::sin(phi) * std::sin(phi) / (3.0 * m);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  Eigen::Matrix2cd rho;
  rho(0, 0) = c2 + s2 * (a2 * (1.0 + 2.0 * m) + b2 * (m - 1.0));
  rho(0, 1) = s2 * (std::conj(beta) * alpha * (m + 2.0));
  rho(1, 0) = s2 * (std::conj(alpha) * beta * (m + 2.0));
  rho(1, 1) = c2 + s2 * (b2 * (1.0 + 2.0 * m) + a2 * (m - 1.0));
  return DensityMatrix2(std::move(rho));
}

}  // namespace spinstar
