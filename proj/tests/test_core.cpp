#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xorlab/core.hpp"

using namespace xorlab;

namespace {

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  const ComplexMatrix g = sample_unitary(d, rng) * RealVector::LinSpaced(d, -1.0, 2.0).asDiagonal() *
                          sample_unitary(d, rng).adjoint();
  return hermitian_part(g);
}

PureState bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(v);
}

}  // namespace

TEST_CASE("value types enforce their invariants") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState{v}, PreconditionError);
  CHECK(PureState::normalized(v).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));

  ComplexMatrix not_unit = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{not_unit}, PreconditionError);
  ComplexMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityOperator{negative}, PreconditionError);

  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(Projector{half}, PreconditionError);

  std::vector<ComplexMatrix> incomplete{0.5 * ComplexMatrix::Identity(2, 2)};
  CHECK_THROWS_AS(Povm{incomplete}, PreconditionError);
  CHECK(Povm::computational(3).labels() == std::vector<std::string>{"0", "1", "2"});
  CHECK_THROWS(SplitSystem({2, 3}, {2}));
}

TEST_CASE("tensor product") {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  CHECK((tensor(id2, id2) -
         ComplexMatrix::Identity(4, 4))
            .norm() == 0.0);

  const ComplexMatrix zz = tensor(pauli_z(), pauli_z());
  const ComplexVector ket01 = PureState::basis(4, 1).amplitudes();
  CHECK((zz * ket01 + ket01).norm() == 0.0);

  Rng rng(11);
  const ComplexMatrix a = sample_unitary(3, rng);
  const ComplexMatrix b = sample_unitary(2, rng);
  const ComplexMatrix ab = tensor(a, b);
  CHECK(ab.rows() == 6);
  std::uniform_int_distribution<int> i3(0, 2);
  std::uniform_int_distribution<int> i2(0, 1);
  for (int t = 0; t < 10; ++t) {
    const int i = i3(rng), j = i3(rng), k = i2(rng), l = i2(rng);
    CHECK(std::abs(ab(i * 2 + k, j * 2 + l) - a(i, j) * b(k, l)) < 1e-15);
  }

  const ComplexMatrix c = sample_unitary(2, rng);
  CHECK((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("partial trace") {
  Rng rng(5);
  const auto ra = sample_density(3, 3, rng);
  const auto rb = sample_density(2, 2, rng);
  const SplitSystem sys({3, 2});
  const std::vector<std::size_t> keep_a{0};
  const DensityOperator prod(tensor(ra.matrix(), rb.matrix()));
  CHECK((partial_trace(prod, sys, keep_a).matrix() - ra.matrix()).norm() < 1e-12);

  const auto half = reduced_state(bell(), SplitSystem::bipartite(2, 2), keep_a);
  CHECK((half.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  const SplitSystem three({2, 3, 2});
  const auto rho = sample_density(12, 12, rng);
  for (std::size_t r = 0; r < 3; ++r) {
    const std::vector<std::size_t> keep{r};
    CHECK(std::abs(partial_trace(rho, three, keep).matrix().trace() - Complex(1.0)) <= 1e-12);
  }
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK((partial_trace(rho, three, all).matrix() - rho.matrix()).norm() <= 1e-12);

  const SplitSystem wrong({2, 2});
  CHECK_THROWS_AS(partial_trace(rho, wrong, keep_a), DimensionError);
}

TEST_CASE("partial trace is linear and trace preserving") {
  Rng rng(21);
  for (std::size_t d : {4u, 8u, 16u}) {
    const SplitSystem sys({2, d / 2});
    const std::vector<std::size_t> keep{1};
    for (int t = 0; t < 200; ++t) {
      const auto r1 = sample_density(d, d, rng);
      const auto r2 = sample_density(d, 1, rng);
      const double p = 0.3;
      const DensityOperator mix(p * r1.matrix() + (1 - p) * r2.matrix());
      const ComplexMatrix lhs = partial_trace(mix, sys, keep).matrix();
      const ComplexMatrix rhs = p * partial_trace(r1, sys, keep).matrix() +
                                (1 - p) * partial_trace(r2, sys, keep).matrix();
      CHECK((lhs - rhs).norm() <= 1e-12);
      CHECK(std::abs(lhs.trace().real() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("hermitian eigendecomposition") {
  auto e = hermitian_eig(ComplexMatrix::Identity(2, 2));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  e = hermitian_eig(pauli_z());
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(-1.0));

  Rng rng(3);
  const ComplexMatrix h = random_hermitian(8, rng);
  e = hermitian_eig(h);
  const ComplexMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  CHECK((rec - h).norm() <= 1e-9);
  CHECK(unitarity_defect(e.vectors) <= 1e-9);
  for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k - 1) >= e.values(k));

  ComplexMatrix bad = pauli_z();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(bad), PreconditionError);
}

TEST_CASE("purification") {
  const SplitSystem sys2({2, 2});
  const std::vector<std::size_t> sys_reg{1};
  const auto pure = DensityOperator::from_pure(PureState::basis(2, 0));
  CHECK((reduced_state(purify(pure), sys2, sys_reg).matrix() - pure.matrix()).norm() <= 1e-9);
  const auto mixed = DensityOperator::maximally_mixed(2);
  CHECK((reduced_state(purify(mixed), sys2, sys_reg).matrix() - mixed.matrix()).norm() <= 1e-9);

  Rng rng(8);
  const SplitSystem sys4({4, 4});
  const auto r3 = sample_density(4, 3, rng);
  CHECK((reduced_state(purify(r3), sys4, sys_reg).matrix() - r3.matrix()).norm() <= 1e-9);
  for (int t = 0; t < 100; ++t) {
    const auto rho = sample_density(4, 1 + t % 4, rng);
    CHECK((reduced_state(purify(rho), sys4, sys_reg).matrix() - rho.matrix()).norm() <= 1e-9);
  }
}

TEST_CASE("fidelity") {
  Rng rng(2);
  const auto rho = sample_density(3, 3, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

  ComplexVector plus(2);
  plus << 1, 1;
  const auto zero = DensityOperator::from_pure(PureState::basis(2, 0));
  const auto p = DensityOperator::from_pure(PureState::normalized(plus));
  CHECK(fidelity(zero, p) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // Commuting diagonal states: Bhattacharyya coefficient.
  RealVector a(4), b(4);
  a << 0.1, 0.2, 0.3, 0.4;
  b << 0.4, 0.4, 0.1, 0.1;
  const DensityOperator da(ComplexMatrix(a.cast<Complex>().asDiagonal()));
  const DensityOperator db(ComplexMatrix(b.cast<Complex>().asDiagonal()));
  const double bc = (a.cwiseProduct(b)).cwiseSqrt().sum();
  CHECK(std::abs(fidelity(da, db) - bc) <= 1e-9);
  CHECK(std::abs(fidelity(da, db) - fidelity(db, da)) <= 1e-12);

  CHECK_THROWS_AS(fidelity(da, zero), DimensionError);
}

TEST_CASE("fidelity does not decrease under partial trace") {
  Rng rng(13);
  const SplitSystem sys({2, 3});
  const std::vector<std::size_t> keep{0};
  for (int t = 0; t < 100; ++t) {
    const auto r = sample_density(6, 1 + t % 6, rng);
    const auto s = sample_density(6, 1 + (t / 6) % 6, rng);
    CHECK(fidelity(partial_trace(r, sys, keep), partial_trace(s, sys, keep)) >=
          fidelity(r, s) - 1e-9);
  }
}

TEST_CASE("Uhlmann unitary") {
  const SplitSystem sys({2, 2});
  const std::vector<std::size_t> first{0};
  const auto u = uhlmann_unitary(PureState::basis(4, 0), PureState::basis(4, 2), sys, first);
  CHECK((u - pauli_x()).norm() <= 1e-9);

  const auto id = uhlmann_unitary(bell(), bell(), sys, first);
  const ComplexVector moved = apply_on_registers(id, bell().amplitudes(), sys.dims(), first);
  CHECK(phase_distance(moved, bell().amplitudes()) <= 1e-9);

  Rng rng(17);
  const SplitSystem big({3, 3});
  for (int t = 0; t < 20; ++t) {
    const auto rho = sample_density(3, 1 + t % 3, rng);
    const auto phi = purify(rho);
    const ComplexMatrix v = tensor(sample_unitary(3, rng), ComplexMatrix::Identity(3, 3));
    const PureState psi(v * phi.amplitudes());
    const auto w = uhlmann_unitary(phi, psi, big, first);
    CHECK(unitarity_defect(w) <= 1e-9);
    const ComplexVector out = apply_on_registers(w, phi.amplitudes(), big.dims(), first);
    CHECK(phase_distance(out, psi.amplitudes()) <= 1e-7);
  }

  // Different reduced states on the untouched register: no such unitary.
  CHECK_THROWS_AS(
      uhlmann_unitary(PureState::basis(4, 0), PureState::basis(4, 1), sys, first),
      PreconditionError);
}

TEST_CASE("Haar sampling") {
  Rng a(99), b(99);
  const auto s1 = sample_pure_state(2, a);
  const auto s2 = sample_pure_state(2, b);
  CHECK(std::abs(s1.amplitudes().norm() - 1.0) <= 1e-12);
  CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);

  Rng rng(1234);
  double mean_z = 0.0;
  const int count = 10000;
  for (int t = 0; t < count; ++t) {
    const ComplexVector v = sample_pure_state(2, rng).amplitudes();
    mean_z += std::norm(v(0)) - std::norm(v(1));
  }
  CHECK(std::abs(mean_z / count) < 0.05);

  const auto p = sample_projector(5, 2, rng);
  CHECK(std::abs(p.matrix().trace().real() - 2.0) < 1e-10);
  CHECK_THROWS_AS(sample_projector(3, 4, rng), PreconditionError);
  CHECK(unitarity_defect(sample_unitary(6, rng)) <= 1e-10);
}

TEST_CASE("bit strings") {
  CHECK(bitstring(1, 3) == "100");
  CHECK(bitstring(6, 3) == "011");
  CHECK(parse_bitstring("011") == 6);
  CHECK_THROWS(parse_bitstring("01a"));
}
