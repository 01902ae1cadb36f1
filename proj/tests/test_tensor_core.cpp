#include "oracles.hpp"

#include "pnl/random_ensembles.hpp"
#include "pnl/tensor_core.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace pnl;

TEST_CASE("Renyi order validation") {
  CHECK_THROWS_AS(RenyiOrder(0.0), std::domain_error);
  CHECK_THROWS_AS(RenyiOrder(-2.0), std::domain_error);
  CHECK_THROWS_AS(RenyiOrder(std::nan("")), std::domain_error);
  CHECK(RenyiOrder::parse("inf").is_infinite());
  CHECK(RenyiOrder::parse("2.5").value() == 2.5);
  CHECK(RenyiOrder::parse("1").is_one());
  CHECK_THROWS(RenyiOrder::parse("two"));
  CHECK_THROWS(RenyiOrder::parse("2x"));
  CHECK_THROWS(RenyiOrder::parse("0"));
  CHECK(RenyiOrder::infinity().to_string() == "inf");
}

TEST_CASE("bipartite dims reject empty factors") {
  CHECK_THROWS_AS(BipartiteDims(0, 3), DimensionError);
  CHECK(BipartiteDims(3, 5).total() == 15);
}

TEST_CASE("tensor product matches the index definition") {
  SeededRng rng(11, 0);
  const Matrix x = oracle::random_matrix(rng, 2, 3);
  const Matrix y = oracle::random_matrix(rng, 4, 2);
  CHECK((tensor_product(x, y) - oracle::kron(x, y)).cwiseAbs().maxCoeff() < 1e-14);

  const Vector u = oracle::random_matrix(rng, 3, 1);
  const Vector v = oracle::random_matrix(rng, 5, 1);
  const Vector uv = tensor_product(u, v);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(std::abs(uv(i * 5 + j) - u(i) * v(j)) < 1e-15);
}

TEST_CASE("partial trace against loop oracle") {
  SeededRng rng(12, 0);
  for (auto [da, db] : {std::pair<Index, Index>{2, 3}, {3, 2}, {4, 4}, {1, 5}, {5, 1}}) {
    const BipartiteDims dims(da, db);
    const Matrix rho = oracle::random_density(rng, da * db, 3);
    CHECK((partial_trace(rho, dims, Keep::A) - oracle::trace_out_b(rho, da, db)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((partial_trace(rho, dims, Keep::B) - oracle::trace_out_a(rho, da, db)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("partial trace of a product recovers the factors") {
  SeededRng rng(13, 0);
  const DensityOperator x = DensityOperator::from_matrix(oracle::random_density(rng, 3, 2));
  const DensityOperator y = DensityOperator::from_matrix(oracle::random_density(rng, 4, 4));
  const DensityOperator xy = tensor_product(x, y);
  CHECK((partial_trace(xy, {3, 4}, Keep::A).matrix() - x.matrix()).norm() < 1e-14);
  CHECK((partial_trace(xy, {3, 4}, Keep::B).matrix() - y.matrix()).norm() < 1e-14);
}

TEST_CASE("partial trace rejects mismatched dims") {
  CHECK_THROWS_AS(partial_trace(Matrix::Identity(6, 6), BipartiteDims(2, 2), Keep::A), DimensionError);
}

TEST_CASE("density operator validation") {
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(DensityOperator::from_matrix(m));
  Matrix non_herm = m;
  non_herm(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(DensityOperator::from_matrix(non_herm), NumericalError);
  CHECK_THROWS_AS(DensityOperator::from_matrix(Matrix::Identity(2, 2)), NumericalError);
  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityOperator::from_matrix(neg), NumericalError);
  CHECK_THROWS_AS(DensityOperator::from_matrix(Matrix::Identity(2, 3)), DimensionError);
}

TEST_CASE("pure states") {
  Vector v(2);
  v << Complex(3, 0), Complex(0, 4);
  CHECK_THROWS_AS(PureState::from_amplitudes(v), NumericalError);
  const PureState s = PureState::normalized(v);
  CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-15);
  CHECK(std::abs(s.projector().trace() - Complex(1.0)) < 1e-15);
  CHECK_THROWS(PureState::normalized(Vector::Zero(3)));
}

TEST_CASE("maximally entangled state") {
  const PureState phi = make_max_entangled(4);
  CHECK((phi.amplitudes() - oracle::max_entangled(4)).norm() < 1e-15);
}

TEST_CASE("row-major vectorization") {
  SeededRng rng(14, 0);
  const Matrix m = oracle::random_matrix(rng, 3, 4);
  const Vector v = vec_row_major(m);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j) CHECK(v(i * 4 + j) == m(i, j));
  CHECK(unvec_row_major(v, 3, 4) == m);
}

TEST_CASE("spectrum ordering and validation") {
  RealVector raw(4);
  raw << 0.1, 0.4, 0.2, 0.3;
  const Spectrum s(raw);
  CHECK(s.values()(0) == 0.4);
  CHECK(s.values()(3) == 0.1);
  CHECK(s.max() == 0.4);
  RealVector tiny_negative(2);
  tiny_negative << 1.0, -1e-12;
  CHECK(Spectrum(tiny_negative).clamped()(1) == 0.0);
  RealVector negative(2);
  negative << 1.1, -0.1;
  CHECK_THROWS(Spectrum{negative});
}

TEST_CASE("hermitian eigendecomposition reconstructs the input") {
  SeededRng rng(15, 0);
  const Matrix g = oracle::random_matrix(rng, 6, 6);
  const Matrix h = g + g.adjoint();
  const HermitianEigen e = hermitian_eigen(h);
  for (Index i = 1; i < 6; ++i) CHECK(e.values(i - 1) >= e.values(i));
  const Matrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(hermitian_eigen(g), NumericalError);
}

TEST_CASE("Schatten norms") {
  SeededRng rng(16, 0);
  const Matrix rho = oracle::random_density(rng, 5, 5);
  const Spectrum s = eigen_spectrum(DensityOperator::from_matrix(rho));
  CHECK(std::abs(schatten_norm(s, RenyiOrder(2.0)) - rho.norm()) < 1e-13);
  CHECK(std::abs(schatten_norm(s, RenyiOrder(1.0)) - 1.0) < 1e-13);
  CHECK(std::abs(schatten_norm(s, RenyiOrder::infinity()) - s.max()) < 1e-15);

  // Non-Hermitian: singular values are the square roots of the spectrum of M^dagger M.
  const Matrix m = oracle::random_matrix(rng, 4, 4);
  const Spectrum gram = eigen_spectrum_unchecked(m.adjoint() * m);
  double p3 = 0.0;
  for (Index i = 0; i < 4; ++i) p3 += std::pow(gram.values()(i), 1.5);
  CHECK(std::abs(schatten_norm(m, RenyiOrder(3.0)) - std::cbrt(p3)) < 1e-11);
  CHECK(std::abs(schatten_norm(m, RenyiOrder::infinity()) - std::sqrt(gram.max())) < 1e-11);
  CHECK(std::abs(schatten_norm(m, RenyiOrder(2.0)) - m.norm()) < 1e-11);
}

TEST_CASE("memory guard") {
  CHECK_NOTHROW(check_dense_size(1024, 1024, "ok"));
  CHECK_THROWS_AS(check_dense_size(1025, 1024, "too big"), MemoryGuardError);
  CHECK_THROWS_AS(check_dense_size(1025, 1024, "too big"), std::length_error);
  CHECK_THROWS_AS(check_dense_size(-1, 2, "negative"), DimensionError);
}
