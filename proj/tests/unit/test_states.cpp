#include <gtest/gtest.h>

#include <cmath>

#include "dmrecon/states.hpp"
#include "test_util.hpp"

using namespace dmrecon;

TEST(BasisState, UnitVectors) {
  ComplexVector e1(2);
  e1 << 1.0, 0.0;
  EXPECT_TRUE(basis_state(2, 1).isApprox(e1));
  ComplexVector e3(4);
  e3 << 0.0, 0.0, 1.0, 0.0;
  EXPECT_EQ(basis_state(4, 3), e3);
}

TEST(BasisState, Orthonormal) {
  for (int j = 1; j <= 5; ++j)
    for (int k = 1; k <= 5; ++k)
      EXPECT_EQ(basis_state(5, j).dot(basis_state(5, k)), Complex(j == k ? 1.0 : 0.0, 0.0));
}

TEST(BasisState, OutOfRangeRejected) {
  EXPECT_THROW(basis_state(3, 0), std::out_of_range);
  EXPECT_THROW(basis_state(3, 4), std::out_of_range);
}

TEST(B0State, QubitIsDiagonalPolarization) {
  const ComplexVector b0 = b0_state(2);
  EXPECT_NEAR(b0(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b0(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(b0.isApprox(named_state("D", 2)));
}

TEST(B0State, TrivialDimensionAndNorm) {
  EXPECT_EQ(b0_state(1)(0), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(b0_state(7).dot(b0_state(7))), 1.0, 1e-14);
}

TEST(PurityFamily, Limits) {
  const ComplexVector d = named_state("D", 2);
  EXPECT_TRUE(approx_equal(purity_family(1.0, d).matrix(), outer(d), 1e-15));
  EXPECT_TRUE(approx_equal(purity_family(0.0, named_state("R", 2)).matrix(), 0.5 * ComplexMatrix::Identity(2, 2), 1e-15));
}

TEST(PurityFamily, QubitPurityFormula) {
  // Tr rho^2 = (1 + p^2) / 2 at d = 2
  EXPECT_NEAR(purity(purity_family(0.6, named_state("D", 2))), 0.68, 1e-14);
  EXPECT_NEAR(purity(purity_family(0.5, named_state("H", 2))), 0.625, 1e-14);
}

TEST(PurityFamily, AffineInP) {
  const ComplexVector psi = named_state("R", 2);
  const ComplexMatrix a = purity_family(0.1, psi).matrix();
  const ComplexMatrix b = purity_family(0.4, psi).matrix();
  const ComplexMatrix c = purity_family(0.9, psi).matrix();
  // b lies on the segment a -> c at fraction (0.4 - 0.1) / (0.9 - 0.1)
  EXPECT_TRUE(approx_equal(b, a + (c - a) * (0.3 / 0.8), 1e-14));
}

TEST(PurityFamily, RejectsOutOfRangeP) {
  EXPECT_THROW(purity_family(1.2, named_state("H", 2)), std::invalid_argument);
  EXPECT_THROW(purity_family(-0.1, named_state("H", 2)), std::invalid_argument);
}

TEST(RandomDensity, DeterministicPerSeed) {
  const auto a = random_density(4, 99);
  const auto b = random_density(4, 99);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), b(i, j));
  EXPECT_FALSE(approx_equal(a.matrix(), random_density(4, 100).matrix(), 1e-6));
}

TEST(RandomDensity, ValidStatesOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rho = random_density(4, seed);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(eigh(rho.matrix()).eigenvalues(0), -1e-12);
    EXPECT_TRUE(rho.positivity_checked());
    const double p = purity(rho);
    EXPECT_GE(p, 0.25 - 1e-12);
    EXPECT_LE(p, 1.0 + 1e-12);
  }
}

TEST(Purity, Extremes) {
  EXPECT_NEAR(purity(purity_family(0.0, b0_state(2))), 0.5, 1e-15);
  EXPECT_NEAR(purity(purity_family(1.0, named_state("V", 2))), 1.0, 1e-15);
}

TEST(DensityMatrixType, ValidatesInvariants) {
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{bad_trace}, std::invalid_argument);
  ComplexMatrix non_herm(2, 2);
  non_herm << 0.5, 0.3, 0.0, 0.5;
  EXPECT_THROW(DensityMatrix{non_herm}, std::invalid_argument);
  ComplexMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  EXPECT_NO_THROW(DensityMatrix{negative});
  EXPECT_THROW(DensityMatrix(negative, true), std::invalid_argument);
}

TEST(NamedStates, QubitLabels) {
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexVector r = named_state("R", 2);
  EXPECT_NEAR(r(1).imag(), -s, 1e-15);
  EXPECT_TRUE(named_state("a2", 3).isApprox(basis_state(3, 2)));
  EXPECT_THROW(named_state("H", 3), std::invalid_argument);
  EXPECT_THROW(named_state("Q", 2), std::invalid_argument);
}

TEST(StateSpec, ParsesEveryForm) {
  EXPECT_TRUE(std::holds_alternative<MixedSpec>(parse_state_spec("mixed")));
  EXPECT_EQ(std::get<PureSpec>(parse_state_spec("pure:D")).label, "D");
  const auto f = std::get<FamilySpec>(parse_state_spec("family:p=0.25,psi=H"));
  EXPECT_EQ(f.p, 0.25);
  EXPECT_EQ(f.psi, "H");
  EXPECT_EQ(std::get<RandomSpec>(parse_state_spec("random:seed=17")).seed, 17u);
}

TEST(StateSpec, FormatRoundTrips) {
  for (const char* text : {"mixed", "pure:H", "family:p=0.25,psi=D", "random:seed=5"}) {
    EXPECT_EQ(format_state_spec(parse_state_spec(text)), text);
  }
}

TEST(StateSpec, MalformedRejected) {
  for (const char* text : {"", "pure:", "family:p=2,psi=H", "family:p=0.5", "random:seed=x", "thermal:beta=1", "D"}) {
    EXPECT_THROW(parse_state_spec(text), std::invalid_argument) << text;
  }
}

TEST(StateSpec, MakeStateMatchesFamilies) {
  EXPECT_TRUE(approx_equal(make_state(parse_state_spec("mixed"), 3).matrix(), ComplexMatrix::Identity(3, 3) / 3.0, 1e-15));
  EXPECT_TRUE(approx_equal(make_state(parse_state_spec("random:seed=4"), 3).matrix(), random_density(3, 4).matrix(), 0.0));
}
