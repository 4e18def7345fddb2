#pragma once

// Brute-force reference implementations used by the test suite only:
// dense operator construction by Kronecker composition, dense matrix
// exponential through a full eigendecomposition, dense partial trace via
// outer products, and Dicke states by exhaustive permutation. Deliberately
// naive (O(4^n) memory, capped at n <= 14); these define ground truth for
// the fast paths and never run in the CLI.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spinstar/errors.hpp"
#include "spinstar/hilbert.hpp"

namespace spinstar::oracle {

struct DenseOperator {
  std::uint64_t dim = 0;
  Eigen::MatrixXcd entries;
};

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Single-qubit matrices in the (down, up) basis ordering.
inline Eigen::Matrix2cd axis_matrix(PauliAxis axis) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (axis) {
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, -i, i, 0;
      break;
    case PauliAxis::Z:
      m << -1, 0, 0, 1;
      break;
  }
  return m;
}

}  // namespace detail

/// Explicit matrix of a Pauli sum by Kronecker composition of 2x2 factors,
/// qubit 0 least significant.
inline DenseOperator to_dense(const PauliTermSum& op) {
  const int n = op.reg().n_qubits();
  if (n > 14) throw DomainError("to_dense: register larger than 14 qubits");
  const std::uint64_t dim = op.reg().dim();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
  const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  for (const PauliString& term : op.terms()) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Constant(1, 1, term.coefficient);
    for (int q = 0; q < n; ++q) {
      auto it = term.factors.find(q);
      const Eigen::MatrixXcd factor =
          (it == term.factors.end()) ? Eigen::MatrixXcd(eye)
                                     : Eigen::MatrixXcd(detail::axis_matrix(it->second));
      acc = detail::kron(factor, acc);
    }
    total += acc;
  }
  return DenseOperator{dim, std::move(total)};
}

/// exp(-i op t)|psi> through a full Hermitian eigendecomposition.
inline StateVector dense_expm_apply(const DenseOperator& op, const StateVector& psi,
                                    double t) {
  if (op.dim != psi.dim()) throw ShapeError("dense_expm_apply: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.entries);
  Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * psi.amplitudes();
  const Eigen::ArrayXcd phases =
      (Complex(0.0, -t) * es.eigenvalues().array().cast<Complex>()).exp();
  coeffs.array() *= phases;
  return StateVector(psi.reg(), es.eigenvectors() * coeffs);
}

/// Reduced density matrix of one qubit via the full outer product
/// |psi><psi|. Row/column 0 is spin up, matching DensityMatrix2.
inline Eigen::Matrix2cd dense_partial_trace(const StateVector& psi, int keep) {
  psi.reg().check_index(keep);
  const Eigen::VectorXcd& v = psi.amplitudes();
  Eigen::MatrixXcd rho = v * v.adjoint();
  const std::uint64_t bit = std::uint64_t{1} << keep;
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (std::uint64_t k = 0; k < psi.dim(); ++k)
    for (std::uint64_t l = 0; l < psi.dim(); ++l) {
      if ((k & ~bit) != (l & ~bit)) continue;
      const int row = (k & bit) ? 0 : 1;
      const int col = (l & bit) ? 0 : 1;
      out(row, col) += rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    }
  return out;
}

/// Dicke state by summing every distinct permutation of k up-spins.
inline StateVector dicke_reference(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("dicke_reference: bad (n, k)");
  QubitRegister reg = QubitRegister::plain(n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.dim()));
  std::vector<int> bits(static_cast<std::size_t>(n), 0);
  std::fill(bits.end() - k, bits.end(), 1);  // ascending start for next_permutation
  do {
    std::uint64_t idx = 0;
    for (int q = 0; q < n; ++q)
      if (bits[static_cast<std::size_t>(q)]) idx |= std::uint64_t{1} << q;
    v[static_cast<Eigen::Index>(idx)] += 1.0;
  } while (std::next_permutation(bits.begin(), bits.end()));
  return StateVector(std::move(reg), v / v.norm());
}

}  // namespace spinstar::oracle
