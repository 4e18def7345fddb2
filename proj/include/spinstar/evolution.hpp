#pragma once

// Hermitian time evolution of full-register states: exact propagation via
// a dense eigendecomposition for small registers, Lanczos/Krylov
// propagation with an a-posteriori residual bound for larger ones, and the
// fidelity-versus-rescaled-time trajectory of the cloning protocol.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "spinstar/cloning.hpp"
#include "spinstar/errors.hpp"
#include "spinstar/hilbert.hpp"

namespace spinstar {

enum class EvolveMethod { DenseEigen, Krylov };

struct EvolutionSpec {
  EvolveMethod method = EvolveMethod::DenseEigen;
  double time = 0.0;
  double tolerance = 1e-12;  // Krylov residual bound
  int max_krylov_dim = 40;
};

/// Dense eigendecomposition up to 12 qubits, Krylov beyond.
inline EvolutionSpec default_evolution(const QubitRegister& reg, double time) {
  EvolutionSpec spec;
  spec.method = reg.n_qubits() <= 12 ? EvolveMethod::DenseEigen : EvolveMethod::Krylov;
  spec.time = time;
  return spec;
}

/// Eigendecomposition of a Pauli sum, reusable across many evolution
/// times. Thread-safe after construction.
class DensePropagator {
 public:
  explicit DensePropagator(const PauliTermSum& h) : reg_(h.reg()) {
    if (reg_.n_qubits() > 14)
      throw DomainError("DensePropagator: dense path limited to 14 qubits");
    es_.compute(detail::dense_matrix(h));
    if (es_.info() != Eigen::Success)
      throw AccuracyError("DensePropagator: eigendecomposition failed", 0.0);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const {
    Eigen::VectorXcd coeffs = es_.eigenvectors().adjoint() * psi;
    coeffs.array() *= (Complex(0.0, -t) * es_.eigenvalues().array().cast<Complex>()).exp();
    return es_.eigenvectors() * coeffs;
  }

  StateVector apply(const StateVector& psi, double t) const {
    if (!dimension_compatible(reg_, psi.reg()))
      throw ShapeError("DensePropagator: register mismatch");
    return StateVector(psi.reg(), apply(psi.amplitudes(), t));
  }

  const Eigen::VectorXd& eigenvalues() const { return es_.eigenvalues(); }

 private:
  QubitRegister reg_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_;
};

namespace detail {

// exp(-i T t) e1 for the real symmetric tridiagonal T given by
// diag(alpha), offdiag(beta).
inline Eigen::VectorXcd expm_tridiag_e1(const std::vector<double>& alpha,
                                        const std::vector<double>& beta, double t) {
  const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd b = m > 1 ? Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1)
                            : Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(a, b);
  const Eigen::ArrayXcd phases =
      (Complex(0.0, -t) * es.eigenvalues().array().cast<Complex>()).exp();
  return es.eigenvectors() *
         (phases * es.eigenvectors().row(0).transpose().array().cast<Complex>()).matrix();
}

struct KrylovResult {
  Eigen::VectorXcd state;
  double residual = 0.0;
  bool converged = false;
  int dim = 0;
};

// Restart-free Lanczos propagation with full reorthogonalization. The
// convergence estimate is the standard last-subdiagonal bound
// beta_m |[exp(-i T_m t)]_{m,1}|.
inline KrylovResult krylov_expm(const PauliTermSum& h, const Eigen::VectorXcd& psi,
                                double t, double tolerance, int max_dim) {
  const Eigen::Index n = psi.size();
  const double input_norm = psi.norm();
  if (input_norm == 0.0) throw DomainError("krylov_expm: zero input state");
  const int cap = static_cast<int>(std::min<Eigen::Index>(max_dim, n));

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(static_cast<std::size_t>(cap));
  basis.push_back(psi / input_norm);
  std::vector<double> alpha, beta;
  Eigen::VectorXcd compressed;
  KrylovResult out;

  const QubitRegister reg = h.reg();
  for (int m = 1; m <= cap; ++m) {
    const StateVector hv =
        apply_pauli_sum(h, StateVector(reg, basis[static_cast<std::size_t>(m - 1)]));
    Eigen::VectorXcd w = hv.amplitudes();
    alpha.push_back(std::real(basis[static_cast<std::size_t>(m - 1)].dot(w)));
    w -= alpha.back() * basis[static_cast<std::size_t>(m - 1)];
    if (m > 1) w -= beta[static_cast<std::size_t>(m - 2)] * basis[static_cast<std::size_t>(m - 2)];
    for (const Eigen::VectorXcd& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
    const double b = w.norm();

    compressed = expm_tridiag_e1(alpha, beta, t);
    out.residual = b * std::abs(compressed[m - 1]);
    out.dim = m;
    if (b <= 1e-14 || out.residual <= tolerance) {  // happy breakdown or converged
      out.converged = true;
      break;
    }
    if (m == cap) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }

  out.state = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < out.dim; ++j)
    out.state += compressed[j] * basis[static_cast<std::size_t>(j)];
  out.state *= input_norm;
  return out;
}

}  // namespace detail

/// exp(-i h t)|psi>. DenseEigen performs a full eigendecomposition (up to
/// 14 qubits); Krylov runs adaptive restart-free Lanczos and throws
/// AccuracyError with the residual estimate if max_krylov_dim is reached
/// before the tolerance.
inline StateVector evolve(const PauliTermSum& h, const StateVector& psi,
                          const EvolutionSpec& spec) {
  if (!dimension_compatible(h.reg(), psi.reg()))
    throw ShapeError("evolve: operator and state register mismatch");
  if (!std::isfinite(spec.time)) throw DomainError("evolve: non-finite time");
  if (!(spec.tolerance > 0.0)) throw DomainError("evolve: tolerance must be positive");
  if (spec.max_krylov_dim < 1) throw DomainError("evolve: max_krylov_dim must be >= 1");

  switch (spec.method) {
    case EvolveMethod::DenseEigen:
      return DensePropagator(h).apply(psi, spec.time);
    case EvolveMethod::Krylov: {
      detail::KrylovResult r = detail::krylov_expm(h, psi.amplitudes(), spec.time,
                                                   spec.tolerance, spec.max_krylov_dim);
      if (!r.converged)
        throw AccuracyError("evolve: Krylov did not converge at max dimension", r.residual);
      return StateVector(psi.reg(), std::move(r.state));
    }
  }
  throw DomainError("evolve: unknown method");
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(count, hw ? hw : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Single-copy fidelities along a rescaled-time grid.
struct FidelityPoint {
  double phi = 0.0;
  std::vector<double> per_target;  // one value per target qubit
};

/// Evolves (alpha|up> + beta|down>)_I |R> to t = phi / (sqrt(3) j1) for
/// every grid point and returns <input|rho|input> for each target qubit.
/// Grid points are evaluated in parallel.
inline std::vector<FidelityPoint> fidelity_trajectory(const CloneConfig& cfg,
                                                      Complex alpha, Complex beta,
                                                      std::span<const double> phi_grid) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw DomainError("fidelity_trajectory: input state not normalized");
  for (double phi : phi_grid)
    if (!std::isfinite(phi)) throw DomainError("fidelity_trajectory: non-finite phi");

  const QubitRegister reg = cfg.reg();
  const PauliTermSum h = build_clone_hamiltonian(cfg);
  const StateVector psi0 = clone_initial_state(cfg.copies, alpha, beta);
  const std::vector<int> targets = reg.target_indices();
  const bool dense = reg.n_qubits() <= 12;

  // One shared eigendecomposition serves every grid point on the dense path.
  std::unique_ptr<DensePropagator> prop;
  if (dense) prop = std::make_unique<DensePropagator>(h);

  std::vector<FidelityPoint> out(phi_grid.size());
  detail::parallel_for(phi_grid.size(), [&](std::size_t g) {
    const double phi = phi_grid[g];
    const double t = cfg.time_of_phi(phi);
    StateVector psi_t = [&] {
      if (dense) return prop->apply(psi0, t);
      EvolutionSpec spec;
      spec.method = EvolveMethod::Krylov;
      spec.time = t;
      spec.max_krylov_dim = static_cast<int>(std::min<std::uint64_t>(reg.dim(), 200));
      return evolve(h, psi0, spec);
    }();
    FidelityPoint& point = out[g];
    point.phi = phi;
    point.per_target.reserve(targets.size());
    for (int q : targets)
      point.per_target.push_back(partial_trace_single(psi_t, q).fidelity(alpha, beta));
  });
  return out;
}

}  // namespace spinstar
