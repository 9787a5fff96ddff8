#include <cmath>
#include <random>

#include "doctest.h"
#include "mpscap/channel_sim.hpp"
#include "mpscap/closed_form.hpp"
#include "mpscap/errors.hpp"
#include "oracle.hpp"

using namespace mpscap;

namespace {

DensityMatrix random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<Complex> psi(dim);
  for (auto& a : psi) a = {normal(rng), normal(rng)};
  return DensityMatrix::pure(psi);
}

}  // namespace

TEST_CASE("phase gates") {
  CHECK(phase_gate(2, 1) == ComplexMatrix::diagonal({1.0, -1.0}));
  CHECK(phase_gate(3, 0) == ComplexMatrix::identity(3));
  const auto z3 = phase_gate(3, 1);
  const Complex w = std::polar(1.0, 2 * M_PI / 3);
  CHECK(std::abs(z3(1, 1) - w) < 1e-15);
  CHECK(std::abs(z3(2, 2) - w * w) < 1e-15);
  CHECK_THROWS_AS(phase_gate(3, 3), DomainError);
  CHECK_THROWS_AS(phase_gate(3, -1), DomainError);

  const auto cz = controlled_phase_unitary(3);
  CHECK(cz.rows() == 9);
  CHECK(max_abs_diff(cz * cz.adjoint(), ComplexMatrix::identity(9)) < 1e-15);
}

TEST_CASE("density matrix invariants") {
  CHECK_THROWS_AS(DensityMatrix::create(ComplexMatrix(2, 3)), StructuralError);
  CHECK_THROWS_AS(DensityMatrix::create(ComplexMatrix::identity(2)), DomainError);
  CHECK_THROWS_AS(DensityMatrix::create(ComplexMatrix::diagonal({1.5, -0.5})), DomainError);
  CHECK_THROWS_AS(DensityMatrix::create(ComplexMatrix::from_rows({{0.5, 0.1}, {0.0, 0.5}})), DomainError);
  CHECK_NOTHROW(DensityMatrix::create(ComplexMatrix::diagonal({0.25, 0.75})));

  const auto mixed = DensityMatrix::maximally_mixed(9);
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log2(9.0)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  const auto pure = random_state(6, rng);
  CHECK(std::abs(von_neumann_entropy(pure)) < 1e-10);

  const auto back = density_from_json(density_to_json(pure));
  CHECK(max_abs_diff(back.matrix(), pure.matrix()) == 0.0);
}

TEST_CASE("dephasing channel for MG g = 1/2, N = 2") {
  const auto dist = enumerate_distribution(mg_model(0.5), 2);
  const auto ch = dephasing_channel(dist);
  CHECK(ch.in_dim == 4);
  CHECK(ch.kraus.size() == 4);
  CHECK(ch.trace_preservation_residual() < 1e-10);

  SUBCASE("complementary output is the environment diagonal") {
    const auto comp = complementary_output(ch, DensityMatrix::maximally_mixed(4));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(comp.matrix()(i, i).real() == doctest::Approx(dist.items[i].probability).epsilon(1e-14));
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) CHECK(std::abs(comp.matrix()(i, j)) < 1e-10);
    }
    CHECK(von_neumann_entropy(comp) == doctest::Approx(1.8112781244591327).epsilon(1e-12));
  }
  SUBCASE("|+><+| input keeps populations and damps coherences") {
    const double h = 0.5;
    const auto out = apply_channel(ch, DensityMatrix::pure(std::vector<Complex>(4, Complex(h))));
    CHECK(hermiticity_residual(out.matrix()) < 1e-15);
    CHECK(std::abs(out.matrix().trace() - Complex(1.0)) < 1e-14);
    for (std::size_t i = 0; i < 4; ++i) CHECK(out.matrix()(i, i).real() == doctest::Approx(0.25));
    // Single-site coherences average out; the joint flip picks up E[(-1)^(x1+x2)] = -1/2.
    CHECK(std::abs(out.matrix()(0, 1)) < 1e-15);
    CHECK(std::abs(out.matrix()(0, 2)) < 1e-15);
    CHECK(out.matrix()(0, 3).real() == doctest::Approx(-0.125).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(apply_channel(ch, DensityMatrix::maximally_mixed(3)), StructuralError);
    CHECK_THROWS_AS(complementary_output(ch, DensityMatrix::maximally_mixed(8)), StructuralError);
  }
}

TEST_CASE("resource limit on channel size") {
  const auto dist = enumerate_distribution(aklt_model(0.5), 7);
  CHECK_THROWS_AS(dephasing_channel(dist), ResourceError);
  // Dimension allowed, but hundreds of dense 2187 x 2187 operators are not.
  CHECK_THROWS_AS(dephasing_channel(dist, 4096), ResourceError);
  CHECK_NOTHROW(dephasing_channel(enumerate_distribution(aklt_model(0.5), 4)));
}

TEST_CASE("channel outputs agree with Eigen") {
  std::mt19937_64 rng(99);
  const auto dist = enumerate_distribution(aklt_model(0.6), 2);
  const auto ch = dephasing_channel(dist);
  const auto in = random_state(9, rng);
  oracle::Mat expect = oracle::Mat::Zero(9, 9);
  for (const auto& v : ch.kraus) expect += oracle::to_eigen(v) * oracle::to_eigen(in.matrix()) * oracle::to_eigen(v).adjoint();
  const auto out = apply_channel(ch, in);
  CHECK((oracle::to_eigen(out.matrix()) - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(von_neumann_entropy(out) == doctest::Approx(oracle::von_neumann(expect)).epsilon(1e-10));
}

TEST_CASE("controlled-phase dilation reproduces the Kraus form") {
  std::mt19937_64 rng(5);
  for (const auto& [m, n] : std::vector<std::pair<MpsModel, int>>{
           {aklt_model(aklt_ground_theta()), 1}, {aklt_model(0.4), 2}, {mg_model(0.5), 2}, {mg_model(0.3), 3}}) {
    std::size_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= static_cast<std::size_t>(m.local_dim());
    const auto sigma = random_state(dim, rng);
    const auto literal = stinespring_output(m, n, sigma);
    const auto kraus = apply_channel(dephasing_channel(enumerate_distribution(m, n)), sigma);
    CHECK(max_abs_diff(literal.matrix(), kraus.matrix()) < 1e-12);
  }
}

TEST_CASE("local density has the distribution on its diagonal") {
  const auto m = mg_model(0.3);
  const auto rho = local_density(m, 3);
  const auto full = enumerate_exhaustive(m, 3);
  REQUIRE(rho.rows() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(rho(i, i).real() == doctest::Approx(full.items[i].probability).epsilon(1e-14));
  CHECK(hermiticity_residual(rho) < 1e-15);
}

TEST_CASE("capacity estimate and the two-path check") {
  for (const auto& m : {aklt_model(aklt_ground_theta()), mg_model(0.5), mg_model(0.1)}) {
    for (int n = 1; n <= 4; ++n) {
      const auto e = capacity_estimate(m, n);
      CHECK(e.channel_checked);
      CHECK(e.path_gap < 1e-9);
      CHECK(e.tp_residual < 1e-10);
      CHECK(e.complementary_entropy == doctest::Approx(e.entropy).epsilon(1e-10));
    }
  }
  const auto e = capacity_estimate(mg_model(0.5), 12);
  CHECK_FALSE(e.channel_checked);
  CHECK(*e.closed_form == doctest::Approx(0.5));
  // The conditional entropy bounds the rate from above, so this estimate undershoots.
  CHECK(e.estimate_cond <= *e.closed_form + 1e-9);
}
