#pragma once

// Preparation of the machine state by cooling: the two-part Hamiltonian
// H' = H'0 + H'1 on the target+ancilla register, its analytic spectrum
// labelled by collective angular momentum quantum numbers, and a
// ground-state solver (dense for M <= 5, Lanczos beyond) that verifies the
// machine state is the nondegenerate ground state.
//
//   H'0 = J' (J+_T J-_A + J-_T J+_A - 2 Jz_T Jz_A)   (XXZ, anisotropy -1)
//   H'1 = (Delta/2) sum_{all pairs} Zi Zk = Delta (Jz)^2 - Delta (M-1)/2
//
// The ground-state claim requires J' < 0 and Delta > 0; out-of-range signs
// are reported by callers, not silently corrected.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinstar/cloning.hpp"
#include "spinstar/errors.hpp"
#include "spinstar/hilbert.hpp"

namespace spinstar {

struct PrepConfig {
  int copies;  // M
  double jprime = -1.0;
  double delta = 1.0;

  explicit PrepConfig(int m) : copies(m) { validate(); }
  PrepConfig(int m, double jprime_, double delta_)
      : copies(m), jprime(jprime_), delta(delta_) {
    validate();
  }

  bool sign_condition() const { return jprime < 0.0 && delta > 0.0; }
  QubitRegister reg() const { return QubitRegister::machine(copies); }

 private:
  void validate() const {
    // M = 2 has no ancillas and H'0 vanishes; the machine state is then a
    // plain two-qubit Dicke state and needs no preparation Hamiltonian.
    if (copies < 3) throw ConfigError("PrepConfig: M >= 3 required");
  }
};

/// Target-ancilla XXZ part, expanded into two-qubit Pauli strings:
/// (J'/2) sum_{t in T, a in A} (Xt Xa + Yt Ya - Zt Za).
inline PauliTermSum build_prep_h0(const PrepConfig& cfg) {
  const QubitRegister reg = cfg.reg();
  PauliTermSum h(reg);
  for (int t : reg.target_indices())
    for (int a : reg.ancilla_indices()) {
      h.add({{t, PauliAxis::X}, {a, PauliAxis::X}}, cfg.jprime / 2.0);
      h.add({{t, PauliAxis::Y}, {a, PauliAxis::Y}}, cfg.jprime / 2.0);
      h.add({{t, PauliAxis::Z}, {a, PauliAxis::Z}}, -cfg.jprime / 2.0);
    }
  return h;
}

/// Ising part from its pairwise form: (Delta/2) Zi Zk over all qubit pairs.
inline PauliTermSum build_prep_h1(const PrepConfig& cfg) {
  const QubitRegister reg = cfg.reg();
  const int n = reg.n_qubits();
  PauliTermSum h(reg);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      h.add({{i, PauliAxis::Z}, {k, PauliAxis::Z}}, cfg.delta / 2.0);
  return h;
}

inline PauliTermSum build_prep_hamiltonian(const PrepConfig& cfg) {
  PauliTermSum h = build_prep_h0(cfg);
  for (const PauliString& term : build_prep_h1(cfg).terms()) h.add(term);
  return h;
}

/// Rayleigh quotients of the machine state under H'0 and H'1 and the
/// eigen-relation residuals ||H' psi - e psi||. The expected values are
/// e0 = J'(M^2-4)/2 and e1 = -Delta(M-1)/2.
struct RStateEigenCheck {
  double e0 = 0.0;
  double e1 = 0.0;
  double residual0 = 0.0;
  double residual1 = 0.0;
};

inline RStateEigenCheck r_state_eigen_check(const PrepConfig& cfg) {
  const StateVector r = build_r_state(cfg.copies);
  RStateEigenCheck out;
  auto check = [&](const PauliTermSum& h, double& e, double& resid) {
    const StateVector hv = apply_pauli_sum(h, r);
    e = std::real(overlap(r, hv));
    resid = (hv.amplitudes() - e * r.amplitudes()).norm();
  };
  check(build_prep_h0(cfg), out.e0, out.residual0);
  check(build_prep_h1(cfg), out.e1, out.residual1);
  return out;
}

/// Number of spin-s multiplets in n spin-1/2 particles:
/// C(n, n/2 - s) - C(n, n/2 - s - 1).
inline std::uint64_t multiplet_count(int n, double s) {
  const double k = n / 2.0 - s;
  const int ki = static_cast<int>(std::lround(k));
  if (std::abs(k - ki) > 1e-9 || ki < 0) return 0;
  const std::uint64_t a = detail::binomial(n, ki);
  const std::uint64_t b = detail::binomial(n, ki - 1);
  return a > b ? a - b : 0;
}

/// One analytic energy level of H', labelled by the target spin j_T, the
/// ancilla spin j_A, the combined spin j and its z projection.
struct SpectrumLevel {
  double jt = 0.0;
  double ja = 0.0;
  double j = 0.0;
  double jz = 0.0;
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
};

/// Full spectrum by angular momentum bookkeeping:
///   E' = -J'( j(j+1) - j_T(j_T+1) - j_A(j_A+1) ) + Delta jz^2 - Delta(M-1)/2
/// with degeneracy d(M, j_T) d(M-2, j_A) per (j, jz). Degeneracies sum to
/// 4^(M-1).
inline std::vector<SpectrumLevel> enumerate_spectrum(const PrepConfig& cfg) {
  const int m = cfg.copies;
  if (m > 20) throw DomainError("enumerate_spectrum: M > 20 not supported");
  std::vector<SpectrumLevel> out;
  const double shift = -cfg.delta * (m - 1.0) / 2.0;
  for (double jt = (m % 2 == 0) ? 0.0 : 0.5; jt <= m / 2.0 + 1e-9; jt += 1.0) {
    const std::uint64_t dt = multiplet_count(m, jt);
    if (dt == 0) continue;
    for (double ja = (m % 2 == 0) ? 0.0 : 0.5; ja <= (m - 2) / 2.0 + 1e-9; ja += 1.0) {
      const std::uint64_t da = multiplet_count(m - 2, ja);
      if (da == 0) continue;
      for (double j = std::abs(jt - ja); j <= jt + ja + 1e-9; j += 1.0)
        for (double jz = -j; jz <= j + 1e-9; jz += 1.0) {
          SpectrumLevel level;
          level.jt = jt;
          level.ja = ja;
          level.j = j;
          level.jz = jz;
          level.energy = -cfg.jprime * (j * (j + 1.0) - jt * (jt + 1.0) - ja * (ja + 1.0)) +
                         cfg.delta * jz * jz + shift;
          level.degeneracy = dt * da;
          out.push_back(level);
        }
    }
  }
  return out;
}

/// Ground energy predicted for J' < 0, Delta > 0, attained at
/// (j_T = M/2, j_A = (M-2)/2, j = 1, jz = 0).
inline double predicted_ground_energy(const PrepConfig& cfg) {
  const double m = cfg.copies;
  return cfg.jprime * (m * m - 4.0) / 2.0 - cfg.delta * (m - 1.0) / 2.0;
}

struct GroundState {
  double energy = 0.0;
  double gap = 0.0;  // distance to the next distinct eigenvalue
  StateVector state;
};

namespace detail {

// Lowest two eigenvalues plus ground vector via restart-free Lanczos with
// full reorthogonalization, deterministic pseudo-random start.
struct LanczosGround {
  double e0 = 0.0, e1 = 0.0;
  Eigen::VectorXcd vec;
  double spread = 0.0;
  double residual = 0.0;
};

inline LanczosGround lanczos_ground(const PauliTermSum& h) {
  const QubitRegister reg = h.reg();
  const Eigen::Index n = static_cast<Eigen::Index>(reg.dim());
  std::mt19937_64 rng(0x51f57a2dULL);
  Eigen::VectorXcd v0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = ((rng() >> 11) + 0.5) * 0x1.0p-53;
    const double b = ((rng() >> 11) + 0.5) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(a));
    v0[i] = Complex(radius * std::cos(6.283185307179586 * b),
                    radius * std::sin(6.283185307179586 * b));
  }
  v0.normalize();

  const int cap = static_cast<int>(std::min<Eigen::Index>(n, 400));
  std::vector<Eigen::VectorXcd> basis{v0};
  std::vector<double> alpha, beta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  LanczosGround out;

  int m = 0;
  bool breakdown = false;
  for (m = 1; m <= cap; ++m) {
    Eigen::VectorXcd w =
        apply_pauli_sum(h, StateVector(reg, basis[static_cast<std::size_t>(m - 1)]))
            .amplitudes();
    alpha.push_back(std::real(basis[static_cast<std::size_t>(m - 1)].dot(w)));
    w -= alpha.back() * basis[static_cast<std::size_t>(m - 1)];
    if (m > 1) w -= beta[static_cast<std::size_t>(m - 2)] * basis[static_cast<std::size_t>(m - 2)];
    for (const Eigen::VectorXcd& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();
    if (b <= 1e-13) {
      breakdown = true;
      break;
    }
    if (m >= 3 && m % 4 == 0) {
      Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd bd = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
      es.computeFromTridiagonal(a, bd);
      const double spread = es.eigenvalues()(m - 1) - es.eigenvalues()(0);
      const double r0 = b * std::abs(es.eigenvectors()(m - 1, 0));
      const double r1 = b * std::abs(es.eigenvectors()(m - 1, 1));
      if (std::max(r0, r1) < 1e-12 * std::max(1.0, spread)) break;
    }
    if (m == cap) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }

  const int dim = static_cast<int>(alpha.size());
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(alpha.data(), dim);
  Eigen::VectorXd bd = dim > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), dim - 1))
                               : Eigen::VectorXd();
  es.computeFromTridiagonal(a, bd);
  out.e0 = es.eigenvalues()(0);
  out.e1 = dim > 1 ? es.eigenvalues()(1) : es.eigenvalues()(0);
  out.spread = es.eigenvalues()(dim - 1) - es.eigenvalues()(0);
  out.vec = Eigen::VectorXcd::Zero(n);
  for (int jj = 0; jj < dim; ++jj)
    out.vec += es.eigenvectors()(jj, 0) * basis[static_cast<std::size_t>(jj)];
  out.vec.normalize();
  out.residual =
      (apply_pauli_sum(h, StateVector(reg, out.vec)).amplitudes() - out.e0 * out.vec).norm();
  (void)breakdown;
  return out;
}

inline void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > best) {
      best = mag;
      imax = i;
    }
  }
  if (best > 0.0) v *= std::conj(v[imax]) / std::abs(v[imax]);
}

}  // namespace detail

/// Lowest eigenpair of H'. Dense eigendecomposition for M <= 5, Lanczos
/// for larger M. The returned phase makes the largest-magnitude amplitude
/// real positive. Throws DegeneracyError if the ground level is not
/// isolated (gap below 1e-9 of the spectral spread).
inline GroundState solve_ground_state(const PrepConfig& cfg) {
  const PauliTermSum h = build_prep_hamiltonian(cfg);
  const QubitRegister reg = cfg.reg();

  double e0 = 0.0, e1 = 0.0, spread = 0.0;
  Eigen::VectorXcd vec;
  if (cfg.copies <= 5) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::dense_matrix(h));
    e0 = es.eigenvalues()(0);
    e1 = es.eigenvalues()(1);
    spread = es.eigenvalues()(es.eigenvalues().size() - 1) - e0;
    vec = es.eigenvectors().col(0);
  } else {
    detail::LanczosGround lg = detail::lanczos_ground(h);
    if (lg.residual > 1e-9 * std::max(1.0, lg.spread))
      throw AccuracyError("solve_ground_state: Lanczos did not converge", lg.residual);
    e0 = lg.e0;
    e1 = lg.e1;
    spread = lg.spread;
    vec = std::move(lg.vec);
  }

  const double gap = e1 - e0;
  if (gap < 1e-9 * std::max(1.0, spread))
    throw DegeneracyError("solve_ground_state: ground level is degenerate", gap);
  detail::fix_phase(vec);
  return GroundState{e0, gap, StateVector(reg, std::move(vec))};
}

}  // namespace spinstar
