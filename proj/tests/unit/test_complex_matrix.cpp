#include <random>

#include "doctest.h"
#include "mpscap/complex_matrix.hpp"
#include "mpscap/errors.hpp"
#include "oracle.hpp"

using mpscap::Complex;
using mpscap::ComplexMatrix;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = {normal(rng), normal(rng)};
  return m;
}

}  // namespace

TEST_CASE("construction and shape errors") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), mpscap::StructuralError);
  const auto id = ComplexMatrix::identity(3);
  CHECK(id.trace() == Complex(3.0));
  CHECK(id.is_square());
  CHECK_THROWS_AS(mpscap::max_abs_diff(id, ComplexMatrix::identity(2)), mpscap::StructuralError);
  CHECK_THROWS_AS(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), mpscap::StructuralError);
}

TEST_CASE("adjoint, products and kron against Eigen") {
  std::mt19937_64 rng(7);
  const auto a = random_matrix(3, rng), b = random_matrix(3, rng);
  const auto ea = oracle::to_eigen(a), eb = oracle::to_eigen(b);
  CHECK((oracle::to_eigen(a * b) - ea * eb).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((oracle::to_eigen(a.adjoint()) - ea.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((oracle::to_eigen(mpscap::congruence(a, b)) - ea.adjoint() * eb * ea).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((oracle::to_eigen(mpscap::conjugate_by(a, b)) - ea * eb * ea.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  ComplexMatrix scratch(3, 3), out(3, 3);
  mpscap::congruence_into(a, b, scratch, out);
  CHECK(mpscap::max_abs_diff(out, mpscap::congruence(a, b)) < 1e-13);

  const auto k = mpscap::kron(ComplexMatrix::diagonal({1.0, 2.0}), ComplexMatrix::identity(2));
  CHECK(k.rows() == 4);
  CHECK(k(0, 0) == Complex(1.0));
  CHECK(k(3, 3) == Complex(2.0));
  CHECK(k(0, 1) == Complex(0.0));
}

TEST_CASE("hermitian eigenvalues") {
  SUBCASE("Pauli Y") {
    const auto y = ComplexMatrix::from_rows({{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}});
    const auto ev = mpscap::hermitian_eigenvalues(y);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random complex Hermitian matrices match Eigen") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 9u, 16u}) {
      const auto a = random_matrix(n, rng);
      const auto h = a + a.adjoint();
      const auto ev = mpscap::hermitian_eigenvalues(h);
      Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::to_eigen(h));
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ev[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))) < 1e-10);
    }
  }
  SUBCASE("non-square input") { CHECK_THROWS_AS(mpscap::hermitian_eigenvalues(ComplexMatrix(2, 3)), mpscap::StructuralError); }
}
