#pragma once

// Shared helpers for the test suites: seeded random states, random
// Hermitian Pauli sums and a total-magnetization builder.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinstar/hilbert.hpp"

namespace spinstar::test {

inline StateVector random_state(const QubitRegister& reg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(reg.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return StateVector(reg, std::move(v));
}

inline std::pair<Complex, Complex> random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Complex a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

inline PauliTermSum random_pauli_sum(const QubitRegister& reg, int n_terms,
                                     std::mt19937_64& rng) {
  std::uniform_int_distribution<int> qubit(0, reg.n_qubits() - 1);
  std::uniform_int_distribution<int> axis(0, 2);
  std::uniform_int_distribution<int> weight(1, std::min(3, reg.n_qubits()));
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  PauliTermSum sum(reg);
  for (int t = 0; t < n_terms; ++t) {
    PauliString term;
    term.coefficient = coeff(rng);
    const int w = weight(rng);
    while (static_cast<int>(term.factors.size()) < w)
      term.factors[qubit(rng)] = static_cast<PauliAxis>(axis(rng));
    sum.add(std::move(term));
  }
  return sum;
}

/// Sum of sigma^z over every qubit.
inline PauliTermSum total_z(const QubitRegister& reg) {
  PauliTermSum sum(reg);
  for (int q = 0; q < reg.n_qubits(); ++q) sum.add({{q, PauliAxis::Z}}, 1.0);
  return sum;
}

}  // namespace spinstar::test
