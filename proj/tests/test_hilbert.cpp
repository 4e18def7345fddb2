#include <bit>
#include <cmath>
#include <complex>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "spinstar/hilbert.hpp"
#include "spinstar/oracle.hpp"
#include "support.hpp"

using namespace spinstar;
using Catch::Matchers::WithinAbs;

namespace {
Complex amp_at(const StateVector& s, std::uint64_t idx) { return s.amp(idx); }
}  // namespace

TEST_CASE("register layouts") {
  const QubitRegister reg = QubitRegister::cloning(3);
  REQUIRE(reg.n_qubits() == 5);
  REQUIRE(reg.input_index() == 0);
  REQUIRE(reg.target_indices() == std::vector<int>{1, 2, 3});
  REQUIRE(reg.ancilla_indices() == std::vector<int>{4});

  const QubitRegister machine = QubitRegister::machine(4);
  REQUIRE(machine.n_qubits() == 6);
  REQUIRE(machine.target_indices() == std::vector<int>{0, 1, 2, 3});
  REQUIRE_THROWS_AS(machine.input_index(), LayoutError);

  REQUIRE_THROWS_AS(QubitRegister::cloning(1), ConfigError);
  REQUIRE_THROWS_AS(QubitRegister::plain(-1), DomainError);
}

TEST_CASE("dicke state basics") {
  const StateVector allDown = dicke_state(3, 0);
  REQUIRE_THAT(std::abs(amp_at(allDown, 0) - 1.0), WithinAbs(0.0, 1e-15));

  const StateVector w = dicke_state(2, 1);
  REQUIRE_THAT(amp_at(w, 1).real(), WithinAbs(0.7071067811865475, 1e-15));
  REQUIRE_THAT(amp_at(w, 2).real(), WithinAbs(0.7071067811865475, 1e-15));
  REQUIRE_THAT(std::abs(amp_at(w, 0)), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(std::abs(amp_at(w, 3)), WithinAbs(0.0, 0.0));

  REQUIRE_THROWS_AS(dicke_state(2, 3), DomainError);
  REQUIRE_THROWS_AS(dicke_state(2, -1), DomainError);

  // scalar state for the empty register
  const StateVector unit = dicke_state(0, 0);
  REQUIRE(unit.dim() == 1);
  REQUIRE_THAT(std::abs(amp_at(unit, 0) - 1.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("dicke(4,2) matches exhaustive enumeration") {
  const StateVector s = dicke_state(4, 2);
  // independent route: list the C(4,2) bitmasks and normalize
  std::vector<std::uint64_t> expected;
  for (std::uint64_t idx = 0; idx < 16; ++idx)
    if (std::popcount(idx) == 2) expected.push_back(idx);
  REQUIRE(expected.size() == 6);
  const double amp = 1.0 / std::sqrt(6.0);
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const bool hit = std::popcount(idx) == 2;
    REQUIRE_THAT(std::abs(amp_at(s, idx) - (hit ? amp : 0.0)), WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("dicke states: binomial support, equal positive weights, unit norm") {
  for (int n = 0; n <= 7; ++n)
    for (int k = 0; k <= n; ++k) {
      const StateVector s = dicke_state(n, k);
      int nonzero = 0;
      for (std::uint64_t idx = 0; idx < s.dim(); ++idx) {
        const Complex a = amp_at(s, idx);
        if (std::abs(a) > 0.0) {
          ++nonzero;
          REQUIRE(a.real() > 0.0);
          REQUIRE(a.imag() == 0.0);
        }
      }
      REQUIRE(nonzero == static_cast<int>(detail::binomial(n, k)));
      REQUIRE_THAT(s.norm(), WithinAbs(1.0, 1e-14));

      const StateVector ref = oracle::dicke_reference(n, k);
      REQUIRE((s.amplitudes() - ref.amplitudes()).norm() < 1e-13);
    }
}

TEST_CASE("tensor_embed places bits per the little-endian convention") {
  const QubitRegister reg3 = QubitRegister::plain(3);
  const StateVector up = StateVector::basis(QubitRegister::plain(1), 1);
  const StateVector down = StateVector::basis(QubitRegister::plain(1), 0);
  const StateVector dd = StateVector::basis(QubitRegister::plain(2), 0);

  const StateVector a = tensor_embed({{up, {0}}, {dd, {1, 2}}}, reg3);
  REQUIRE_THAT(std::abs(amp_at(a, 1) - 1.0), WithinAbs(0.0, 1e-15));

  const StateVector b = tensor_embed({{dicke_state(2, 1), {1, 2}}, {down, {0}}}, reg3);
  REQUIRE_THAT(std::abs(amp_at(b, 2) - 1.0 / std::numbers::sqrt2), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(std::abs(amp_at(b, 4) - 1.0 / std::numbers::sqrt2), WithinAbs(0.0, 1e-15));

  // M = 2 cloning register: no ancillas, the scalar factor is dropped in place
  const QubitRegister clone2 = QubitRegister::cloning(2);
  const StateVector c = tensor_embed(
      {{dicke_state(2, 2), {1, 2}}, {dicke_state(0, 0), {}}, {down, {0}}}, clone2);
  REQUIRE_THAT(std::abs(amp_at(c, 6) - 1.0), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(c.norm(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("tensor_embed layout errors") {
  const QubitRegister reg = QubitRegister::plain(2);
  const StateVector up = StateVector::basis(QubitRegister::plain(1), 1);
  REQUIRE_THROWS_AS(tensor_embed({{up, {0}}, {up, {0}}}, reg), LayoutError);
  REQUIRE_THROWS_AS(tensor_embed({{up, {0}}}, reg), LayoutError);
  REQUIRE_THROWS_AS(tensor_embed({{up, {0, 1}}}, reg), LayoutError);
}

TEST_CASE("pauli action conventions") {
  const QubitRegister one = QubitRegister::plain(1);
  PauliTermSum z(one);
  z.add({{0, PauliAxis::Z}}, 1.0);
  const StateVector up = StateVector::basis(one, 1);
  const StateVector zup = apply_pauli_sum(z, up);
  REQUIRE_THAT(std::abs(amp_at(zup, 1) - 1.0), WithinAbs(0.0, 1e-15));

  PauliTermSum x(one);
  x.add({{0, PauliAxis::X}}, 1.0);
  const StateVector down = StateVector::basis(one, 0);
  const StateVector xdown = apply_pauli_sum(x, down);
  REQUIRE_THAT(std::abs(amp_at(xdown, 1) - 1.0), WithinAbs(0.0, 1e-15));

  PauliTermSum y(one);
  y.add({{0, PauliAxis::Y}}, 1.0);
  const StateVector ydown = apply_pauli_sum(y, down);
  const StateVector yup = apply_pauli_sum(y, up);
  REQUIRE_THAT(std::abs(amp_at(ydown, 1) - Complex(0.0, 1.0)), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(std::abs(amp_at(yup, 0) - Complex(0.0, -1.0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("exchange term swaps opposite spins") {
  const QubitRegister reg = QubitRegister::plain(2);
  PauliTermSum flip(reg);
  flip.add({{0, PauliAxis::X}, {1, PauliAxis::X}}, 0.5);
  flip.add({{0, PauliAxis::Y}, {1, PauliAxis::Y}}, 0.5);
  const StateVector updown = StateVector::basis(reg, 1);  // qubit 0 up, qubit 1 down
  const StateVector swapped = apply_pauli_sum(flip, updown);
  REQUIRE_THAT(std::abs(amp_at(swapped, 2) - 1.0), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(std::abs(amp_at(swapped, 1)), WithinAbs(0.0, 1e-15));

  // dense 2-qubit matrix as the oracle
  const oracle::DenseOperator dense = oracle::to_dense(flip);
  const Eigen::VectorXcd expected = dense.entries * updown.amplitudes();
  REQUIRE((swapped.amplitudes() - expected).norm() < 1e-15);
}

TEST_CASE("apply_pauli_sum agrees with the dense oracle up to 6 qubits") {
  std::mt19937_64 rng(31415);
  for (int n = 1; n <= 6; ++n) {
    const QubitRegister reg = QubitRegister::plain(n);
    const PauliTermSum op = test::random_pauli_sum(reg, 2 * n + 3, rng);
    const oracle::DenseOperator dense = oracle::to_dense(op);
    REQUIRE((dense.entries - dense.entries.adjoint()).norm() < 1e-12);
    for (int trial = 0; trial < 3; ++trial) {
      const StateVector psi = test::random_state(reg, rng);
      const Eigen::VectorXcd direct = apply_pauli_sum(op, psi).amplitudes();
      const Eigen::VectorXcd expected = dense.entries * psi.amplitudes();
      REQUIRE((direct - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("hermitian sandwich symmetry") {
  std::mt19937_64 rng(999);
  const QubitRegister reg = QubitRegister::plain(4);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliTermSum op = test::random_pauli_sum(reg, 8, rng);
    const StateVector u = test::random_state(reg, rng);
    const StateVector v = test::random_state(reg, rng);
    const Complex uv = overlap(u, apply_pauli_sum(op, v));
    const Complex vu = overlap(v, apply_pauli_sum(op, u));
    REQUIRE(std::abs(uv - std::conj(vu)) < 1e-12);
  }
}

TEST_CASE("apply_pauli_sum register mismatch") {
  PauliTermSum op(QubitRegister::plain(2));
  op.add({{0, PauliAxis::Z}}, 1.0);
  const StateVector psi = StateVector::basis(QubitRegister::plain(3), 0);
  REQUIRE_THROWS_AS(apply_pauli_sum(op, psi), ShapeError);
  REQUIRE_THROWS_AS(overlap(psi, StateVector::basis(QubitRegister::plain(2), 0)),
                    ShapeError);
}

TEST_CASE("partial trace of product and entangled states") {
  const QubitRegister reg = QubitRegister::plain(2);
  const StateVector up_down = StateVector::basis(reg, 1);
  const DensityMatrix2 rho = partial_trace_single(up_down, 0);
  REQUIRE_THAT(rho.up_up().real(), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(rho.down_down().real(), WithinAbs(0.0, 1e-15));

  Eigen::VectorXcd bell(4);
  bell << 1.0 / std::numbers::sqrt2, 0.0, 0.0, 1.0 / std::numbers::sqrt2;
  const DensityMatrix2 mixed = partial_trace_single(StateVector(reg, bell), 0);
  REQUIRE_THAT(mixed.up_up().real(), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(mixed.down_down().real(), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(std::abs(mixed.up_down()), WithinAbs(0.0, 1e-15));
}

TEST_CASE("partial trace of a Dicke state, dense outer-product oracle") {
  const StateVector s = dicke_state(3, 1);
  const DensityMatrix2 rho = partial_trace_single(s, 0);
  REQUIRE_THAT(rho.up_up().real(), WithinAbs(1.0 / 3.0, 1e-14));
  REQUIRE_THAT(rho.down_down().real(), WithinAbs(2.0 / 3.0, 1e-14));

  for (int keep = 0; keep < 3; ++keep) {
    const Eigen::Matrix2cd expected = oracle::dense_partial_trace(s, keep);
    REQUIRE((partial_trace_single(s, keep).matrix() - expected).norm() < 1e-14);
  }
  REQUIRE_THROWS_AS(partial_trace_single(s, 5), DomainError);
}

TEST_CASE("partial trace is a state: unit trace, nonnegative spectrum") {
  std::mt19937_64 rng(777);
  const QubitRegister reg = QubitRegister::plain(5);
  for (int trial = 0; trial < 8; ++trial) {
    const StateVector psi = test::random_state(reg, rng);
    for (int q = 0; q < 5; ++q) {
      const DensityMatrix2 rho = partial_trace_single(psi, q);
      REQUIRE_THAT(rho.trace_real(), WithinAbs(1.0, 1e-12));
      REQUIRE(rho.eigenvalues().minCoeff() > -1e-12);
      const Eigen::Matrix2cd expected = oracle::dense_partial_trace(psi, q);
      REQUIRE((rho.matrix() - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("overlap conventions") {
  std::mt19937_64 rng(4242);
  const QubitRegister reg = QubitRegister::plain(3);
  const StateVector psi = test::random_state(reg, rng);
  REQUIRE_THAT(std::abs(overlap(psi, psi) - 1.0), WithinAbs(0.0, 1e-13));
  REQUIRE_THAT(std::abs(overlap(dicke_state(2, 0), dicke_state(2, 1))), WithinAbs(0.0, 0.0));

  // conjugation on the first argument
  const StateVector phi = test::random_state(reg, rng);
  REQUIRE(std::abs(overlap(psi, phi) - std::conj(overlap(phi, psi))) < 1e-14);
}

TEST_CASE("state dump round trip and schema") {
  const StateVector s = dicke_state(2, 1);
  const nlohmann::json j = s.to_json();
  REQUIRE(j.at("n_qubits") == 2);
  REQUIRE(j.at("amplitudes").size() == 4);
  REQUIRE(j.at("amplitudes")[1][0].get<double>() ==
          Catch::Approx(0.7071067811865475).margin(1e-15));
  const StateVector back = StateVector::from_json(j);
  REQUIRE((back.amplitudes() - s.amplitudes()).norm() == 0.0);
}
