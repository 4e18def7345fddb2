#include <cmath>
#include <complex>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "spinstar/cloning.hpp"
#include "spinstar/oracle.hpp"
#include "support.hpp"

using namespace spinstar;
using Catch::Matchers::WithinAbs;

TEST_CASE("to_dense single-qubit conventions") {
  const QubitRegister one = QubitRegister::plain(1);
  PauliTermSum z(one);
  z.add({{0, PauliAxis::Z}}, 1.0);
  const Eigen::MatrixXcd zm = oracle::to_dense(z).entries;
  REQUIRE_THAT(zm(0, 0).real(), WithinAbs(-1.0, 0.0));  // index 0 = down
  REQUIRE_THAT(zm(1, 1).real(), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(std::abs(zm(0, 1)), WithinAbs(0.0, 0.0));

  const QubitRegister two = QubitRegister::plain(2);
  PauliTermSum x1(two);
  x1.add({{1, PauliAxis::X}}, 1.0);
  const Eigen::MatrixXcd xm = oracle::to_dense(x1).entries;
  REQUIRE_THAT(xm(2, 0).real(), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(xm(3, 1).real(), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(xm(0, 2).real(), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(std::abs(xm(0, 0)), WithinAbs(0.0, 0.0));
}

TEST_CASE("to_dense columns equal sparse action on basis vectors") {
  const CloneConfig cfg(2);
  const PauliTermSum h = build_clone_hamiltonian(cfg);
  const oracle::DenseOperator dense = oracle::to_dense(h);
  for (std::uint64_t col = 0; col < dense.dim; ++col) {
    const StateVector e = StateVector::basis(cfg.reg(), col);
    const Eigen::VectorXcd action = apply_pauli_sum(h, e).amplitudes();
    REQUIRE((dense.entries.col(static_cast<Eigen::Index>(col)) - action).cwiseAbs().maxCoeff() <
            1e-12);
  }
  REQUIRE_THROWS_AS(oracle::to_dense(PauliTermSum(QubitRegister::plain(16))), DomainError);
}

TEST_CASE("dense_expm_apply basics") {
  std::mt19937_64 rng(2024);
  const QubitRegister reg = QubitRegister::plain(3);
  const PauliTermSum op = test::random_pauli_sum(reg, 6, rng);
  const oracle::DenseOperator dense = oracle::to_dense(op);
  const StateVector psi = test::random_state(reg, rng);

  const StateVector frozen = oracle::dense_expm_apply(dense, psi, 0.0);
  REQUIRE((frozen.amplitudes() - psi.amplitudes()).norm() < 1e-14);

  // random Hermitian 8x8 generator keeps the norm
  Eigen::MatrixXcd raw = Eigen::MatrixXcd::Random(8, 8);
  const oracle::DenseOperator herm{8, (raw + raw.adjoint()) / 2.0};
  const StateVector moved = oracle::dense_expm_apply(herm, psi, 0.83);
  REQUIRE_THAT(moved.norm(), WithinAbs(1.0, 1e-13));
}

TEST_CASE("dense_expm_apply matches the closed-form 2x2 propagator") {
  const CloneConfig cfg(2, 0.7, -0.7, 1.3, -1.3);
  const Effective2x2 eff = effective_hamiltonian(cfg);
  PauliTermSum embedded(QubitRegister::plain(1));
  // encode the 2x2 matrix [[0, s], [s, d]] as s X + (d/2)(Z - 1) on (up, down):
  // basis |a> = |up>, |b> = |down>; Z distinguishes them with +1 on |a>.
  const double s = eff.h(0, 1);
  const double d = eff.h(1, 1);
  embedded.add({{0, PauliAxis::X}}, s);
  embedded.add({{0, PauliAxis::Z}}, -d / 2.0);
  embedded.add({}, d / 2.0);
  const oracle::DenseOperator dense = oracle::to_dense(embedded);

  for (double t : {0.3, 1.1, 4.2}) {
    const Eigen::Matrix2cd u = analytic_propagator_2d(cfg, t);
    // dense matrix acts on (down, up) = (b, a); the propagator on (a, b)
    Eigen::VectorXcd a_col(2);
    a_col << 0.0, 1.0;
    const StateVector evolved =
        oracle::dense_expm_apply(dense, StateVector(QubitRegister::plain(1), a_col), t);
    REQUIRE(std::abs(evolved.amp(1) - u(0, 0)) < 1e-13);
    REQUIRE(std::abs(evolved.amp(0) - u(1, 0)) < 1e-13);
  }
}

TEST_CASE("dicke_reference normalization") {
  for (int n : {0, 1, 4})
    for (int k = 0; k <= n; ++k)
      REQUIRE_THAT(oracle::dicke_reference(n, k).norm(), WithinAbs(1.0, 1e-14));
}
