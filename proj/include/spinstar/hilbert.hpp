#pragma once

// Core Hilbert-space machinery for few-qubit spin networks: qubit
// registers, state vectors, Pauli-string operators, Dicke states and
// single-qubit reduced density matrices.
//
// Conventions, fixed library-wide:
//   - little-endian basis: bit i of a basis index is the state of qubit i
//   - bit value 1 = spin up, bit value 0 = spin down
//   - Z|up> = +|up>, Z|down> = -|down>
//   - Y|down> = +i|up>, Y|up> = -i|down>
//   - hbar = 1; coupling constants carry inverse-time units
//
// Full 2^n amplitude vectors only; no symmetry-sector compression.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "spinstar/errors.hpp"

namespace spinstar {

using Complex = std::complex<double>;

enum class QubitRole { Input, Target, Ancilla };

/// A qubit count plus a role label per qubit. Two registers are
/// dimension-compatible when their qubit counts agree; roles are layout
/// metadata for the protocol builders.
class QubitRegister {
 public:
  explicit QubitRegister(std::vector<QubitRole> layout)
      : layout_(std::move(layout)) {
    if (layout_.size() > kMaxQubits)
      throw DomainError("QubitRegister: more than 24 qubits");
  }

  /// n qubits, all labelled Target.
  static QubitRegister plain(int n_qubits) {
    if (n_qubits < 0) throw DomainError("QubitRegister: negative qubit count");
    return QubitRegister(
        std::vector<QubitRole>(static_cast<std::size_t>(n_qubits), QubitRole::Target));
  }

  /// Cloning register for M >= 2 copies: input qubit 0, targets 1..M,
  /// ancillas M+1..2M-2 (2M-1 qubits in total).
  static QubitRegister cloning(int copies) {
    if (copies < 2) throw ConfigError("cloning register requires M >= 2");
    std::vector<QubitRole> roles(2 * static_cast<std::size_t>(copies) - 1,
                                 QubitRole::Ancilla);
    roles[0] = QubitRole::Input;
    for (int q = 1; q <= copies; ++q) roles[static_cast<std::size_t>(q)] = QubitRole::Target;
    return QubitRegister(std::move(roles));
  }

  /// Machine register (input qubit absent): targets 0..M-1, ancillas
  /// M..2M-3 (2M-2 qubits).
  static QubitRegister machine(int copies) {
    if (copies < 2) throw ConfigError("machine register requires M >= 2");
    std::vector<QubitRole> roles(2 * static_cast<std::size_t>(copies) - 2,
                                 QubitRole::Ancilla);
    for (int q = 0; q < copies; ++q) roles[static_cast<std::size_t>(q)] = QubitRole::Target;
    return QubitRegister(std::move(roles));
  }

  int n_qubits() const { return static_cast<int>(layout_.size()); }
  std::uint64_t dim() const { return std::uint64_t{1} << layout_.size(); }

  QubitRole role(int q) const {
    check_index(q);
    return layout_[static_cast<std::size_t>(q)];
  }

  int input_index() const {
    for (std::size_t q = 0; q < layout_.size(); ++q)
      if (layout_[q] == QubitRole::Input) return static_cast<int>(q);
    throw LayoutError("register has no input qubit");
  }

  std::vector<int> target_indices() const { return with_role(QubitRole::Target); }
  std::vector<int> ancilla_indices() const { return with_role(QubitRole::Ancilla); }

  friend bool operator==(const QubitRegister& a, const QubitRegister& b) {
    return a.layout_ == b.layout_;
  }

  void check_index(int q) const {
    if (q < 0 || q >= n_qubits()) throw DomainError("qubit index out of range");
  }

 private:
  static constexpr std::size_t kMaxQubits = 24;

  std::vector<int> with_role(QubitRole r) const {
    std::vector<int> out;
    for (std::size_t q = 0; q < layout_.size(); ++q)
      if (layout_[q] == r) out.push_back(static_cast<int>(q));
    return out;
  }

  std::vector<QubitRole> layout_;
};

inline bool dimension_compatible(const QubitRegister& a, const QubitRegister& b) {
  return a.n_qubits() == b.n_qubits();
}

/// Pure state of a register as a dense complex amplitude vector over the
/// 2^n computational basis. Immutable after construction.
class StateVector {
 public:
  StateVector(QubitRegister reg, Eigen::VectorXcd amplitudes)
      : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
    if (static_cast<std::uint64_t>(amps_.size()) != reg_.dim())
      throw ShapeError("StateVector: amplitude count does not match register");
  }

  static StateVector basis(QubitRegister reg, std::uint64_t index) {
    if (index >= reg.dim()) throw DomainError("basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.dim()));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(reg), std::move(v));
  }

  const QubitRegister& reg() const { return reg_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amp(std::uint64_t index) const { return amps_[static_cast<Eigen::Index>(index)]; }
  std::uint64_t dim() const { return reg_.dim(); }
  double norm() const { return amps_.norm(); }

  StateVector normalized() const {
    double n = norm();
    if (n == 0.0) throw DomainError("cannot normalize the zero vector");
    return StateVector(reg_, amps_ / n);
  }

  nlohmann::json to_json() const {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < amps_.size(); ++i)
      amps.push_back({amps_[i].real(), amps_[i].imag()});
    return nlohmann::json{{"n_qubits", reg_.n_qubits()}, {"amplitudes", std::move(amps)}};
  }

  /// Reads the dump format back onto a plain register.
  static StateVector from_json(const nlohmann::json& j) {
    const int n = j.at("n_qubits").get<int>();
    QubitRegister reg = QubitRegister::plain(n);
    const auto& amps = j.at("amplitudes");
    if (amps.size() != reg.dim()) throw ShapeError("state dump: wrong amplitude count");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(reg.dim()));
    for (std::size_t i = 0; i < amps.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = Complex(amps[i][0].get<double>(), amps[i][1].get<double>());
    return StateVector(std::move(reg), std::move(v));
  }

 private:
  QubitRegister reg_;
  Eigen::VectorXcd amps_;
};

enum class PauliAxis { X, Y, Z };

/// One weighted multi-qubit Pauli string: factors on listed qubits,
/// identity elsewhere. A real coefficient keeps every term Hermitian.
struct PauliString {
  std::map<int, PauliAxis> factors;
  double coefficient = 0.0;
};

/// Action of a Pauli string on a computational basis state: every string
/// maps |src> to coefficient * phase * |index>.
struct PauliAction {
  std::uint64_t index;
  Complex phase;
};

inline PauliAction pauli_action(const PauliString& term, std::uint64_t src) {
  std::uint64_t dst = src;
  Complex phase(term.coefficient, 0.0);
  for (const auto& [q, axis] : term.factors) {
    const std::uint64_t mask = std::uint64_t{1} << q;
    const bool up = (src & mask) != 0;
    switch (axis) {
      case PauliAxis::X:
        dst ^= mask;
        break;
      case PauliAxis::Y:
        dst ^= mask;
        phase *= up ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        break;
      case PauliAxis::Z:
        if (!up) phase = -phase;
        break;
    }
  }
  return {dst, phase};
}

/// Hermitian operator stored as a weighted sum of Pauli strings.
class PauliTermSum {
 public:
  explicit PauliTermSum(QubitRegister reg) : reg_(std::move(reg)) {}

  PauliTermSum& add(PauliString term) {
    for (const auto& [q, axis] : term.factors) {
      (void)axis;
      reg_.check_index(q);
    }
    terms_.push_back(std::move(term));
    return *this;
  }

  PauliTermSum& add(std::initializer_list<std::pair<int, PauliAxis>> factors,
                    double coefficient) {
    PauliString term;
    term.coefficient = coefficient;
    for (const auto& [q, axis] : factors) {
      if (term.factors.count(q))
        throw DomainError("duplicate qubit in Pauli string");
      term.factors.emplace(q, axis);
    }
    return add(std::move(term));
  }

  const QubitRegister& reg() const { return reg_; }
  const std::vector<PauliString>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  QubitRegister reg_;
  std::vector<PauliString> terms_;
};

/// op|psi>, term by term. Not normalized: the result is a plain vector in
/// the register's Hilbert space.
inline StateVector apply_pauli_sum(const PauliTermSum& op, const StateVector& psi) {
  if (!dimension_compatible(op.reg(), psi.reg()))
    throw ShapeError("apply_pauli_sum: operator and state register mismatch");
  const Eigen::VectorXcd& in = psi.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  const std::uint64_t dim = psi.dim();
  for (const PauliString& term : op.terms()) {
    for (std::uint64_t src = 0; src < dim; ++src) {
      const PauliAction act = pauli_action(term, src);
      out[static_cast<Eigen::Index>(act.index)] += act.phase * in[static_cast<Eigen::Index>(src)];
    }
  }
  return StateVector(psi.reg(), std::move(out));
}

/// <a|b>, conjugating the first argument.
inline Complex overlap(const StateVector& a, const StateVector& b) {
  if (!dimension_compatible(a.reg(), b.reg()))
    throw ShapeError("overlap: register mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

/// 2x2 single-qubit reduced density matrix. Row/column 0 is spin up,
/// row/column 1 is spin down.
class DensityMatrix2 {
 public:
  explicit DensityMatrix2(Eigen::Matrix2cd m) : m_(std::move(m)) {}

  const Eigen::Matrix2cd& matrix() const { return m_; }
  Complex up_up() const { return m_(0, 0); }
  Complex up_down() const { return m_(0, 1); }
  Complex down_up() const { return m_(1, 0); }
  Complex down_down() const { return m_(1, 1); }
  double trace_real() const { return (m_(0, 0) + m_(1, 1)).real(); }

  Eigen::Vector2d eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// <in|rho|in> for |in> = alpha|up> + beta|down>.
  double fidelity(Complex alpha, Complex beta) const {
    Eigen::Vector2cd c;
    c << alpha, beta;
    return (c.adjoint() * m_ * c)(0, 0).real();
  }

 private:
  Eigen::Matrix2cd m_;
};

/// Reduced density matrix of qubit `keep`, tracing out all others.
inline DensityMatrix2 partial_trace_single(const StateVector& psi, int keep) {
  psi.reg().check_index(keep);
  const Eigen::VectorXcd& v = psi.amplitudes();
  const std::uint64_t bit = std::uint64_t{1} << keep;
  const std::uint64_t dim = psi.dim();
  Complex uu = 0.0, dd = 0.0, ud = 0.0;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if (idx & bit) continue;  // enumerate environment configurations once
    const Complex down = v[static_cast<Eigen::Index>(idx)];
    const Complex up = v[static_cast<Eigen::Index>(idx | bit)];
    uu += up * std::conj(up);
    dd += down * std::conj(down);
    ud += up * std::conj(down);
  }
  Eigen::Matrix2cd m;
  m << uu, ud, std::conj(ud), dd;
  return DensityMatrix2(std::move(m));
}

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace detail

/// Dicke state |S(n,k)>: the normalized equal superposition of all basis
/// states of n qubits with exactly k spins up. n = 0 (with k = 0) is the
/// unit scalar on the empty register.
inline StateVector dicke_state(int n, int k) {
  if (n < 0) throw DomainError("dicke_state: negative qubit count");
  if (k < 0 || k > n) throw DomainError("dicke_state: spins-up count out of range");
  QubitRegister reg = QubitRegister::plain(n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.dim()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(detail::binomial(n, k)));
  for (std::uint64_t idx = 0; idx < reg.dim(); ++idx)
    if (std::popcount(idx) == k) v[static_cast<Eigen::Index>(idx)] = amp;
  return StateVector(std::move(reg), std::move(v));
}

/// One factor of a product state: a sub-register state and the qubit
/// indices it occupies in the enclosing register. Sub-state bit j maps to
/// qubit indices[j].
struct EmbedFactor {
  StateVector state;
  std::vector<int> indices;
};

/// Product state on `into` assembled from factors covering disjoint index
/// sets whose union is the full register.
inline StateVector tensor_embed(std::span<const EmbedFactor> factors,
                                const QubitRegister& into) {
  const int n = into.n_qubits();
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const EmbedFactor& fac = factors[f];
    if (static_cast<int>(fac.indices.size()) != fac.state.reg().n_qubits())
      throw LayoutError("tensor_embed: factor index count does not match its state");
    for (int q : fac.indices) {
      into.check_index(q);
      if (owner[static_cast<std::size_t>(q)] != -1)
        throw LayoutError("tensor_embed: overlapping index sets");
      owner[static_cast<std::size_t>(q)] = static_cast<int>(f);
    }
  }
  for (int q = 0; q < n; ++q)
    if (owner[static_cast<std::size_t>(q)] == -1)
      throw LayoutError("tensor_embed: index sets do not cover the register");

  Eigen::VectorXcd out(static_cast<Eigen::Index>(into.dim()));
  for (std::uint64_t idx = 0; idx < into.dim(); ++idx) {
    Complex amp = 1.0;
    for (const EmbedFactor& fac : factors) {
      std::uint64_t sub = 0;
      for (std::size_t j = 0; j < fac.indices.size(); ++j)
        if (idx & (std::uint64_t{1} << fac.indices[j])) sub |= std::uint64_t{1} << j;
      amp *= fac.state.amp(sub);
      if (amp == 0.0) break;
    }
    out[static_cast<Eigen::Index>(idx)] = amp;
  }
  return StateVector(into, std::move(out));
}

inline StateVector tensor_embed(std::initializer_list<EmbedFactor> factors,
                                const QubitRegister& into) {
  return tensor_embed(std::span<const EmbedFactor>(factors.begin(), factors.size()), into);
}

namespace detail {

/// Dense matrix of a Pauli sum assembled through the same per-term index
/// arithmetic as apply_pauli_sum. Solver plumbing; the independent
/// Kronecker construction lives in the oracle module.
inline Eigen::MatrixXcd dense_matrix(const PauliTermSum& op) {
  const std::uint64_t dim = op.reg().dim();
  if (op.reg().n_qubits() > 14) throw DomainError("dense_matrix: register too large");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const PauliString& term : op.terms())
    for (std::uint64_t src = 0; src < dim; ++src) {
      const PauliAction act = pauli_action(term, src);
      m(static_cast<Eigen::Index>(act.index), static_cast<Eigen::Index>(src)) += act.phase;
    }
  return m;
}

}  // namespace detail

}  // namespace spinstar
