#include <gtest/gtest.h>

#include <numbers>

#include "dmrecon/metrics.hpp"
#include "test_util.hpp"

using namespace dmrecon;

TEST(MeanSquareError, Examples) {
  EXPECT_EQ(mean_square_error(RealMatrix::Zero(3, 3)), 0.0);
  RealMatrix single = RealMatrix::Zero(2, 2);
  single(1, 0) = 0.3;
  EXPECT_DOUBLE_EQ(mean_square_error(single), 0.3);
  EXPECT_NEAR(mean_square_error(RealMatrix::Constant(2, 2, 0.1)), 0.2, 1e-15);
}

TEST(MeanSquareError, NegativeEntryRejected) {
  RealMatrix m = RealMatrix::Zero(2, 2);
  m(0, 0) = -0.1;
  EXPECT_THROW(mean_square_error(m), std::invalid_argument);
}

TEST(ErrorBound, WeakQubit) {
  const auto b = error_lower_bound(Method::W, 2, 0.2, 10'000);
  EXPECT_NEAR(b.alpha, 0.5, 1e-15);
  EXPECT_NEAR(b.bound, 0.5 / (0.04 * 100), 1e-14);
  EXPECT_EQ(b.bound, b.alpha / (b.theta * b.theta * std::sqrt(static_cast<double>(b.n))));
}

TEST(ErrorBound, HalvingThetaQuadruples) {
  EXPECT_NEAR(error_lower_bound(Method::I, 3, 0.1, 500).bound / error_lower_bound(Method::I, 3, 0.2, 500).bound, 4.0, 1e-12);
}

TEST(ErrorBound, MethodII) {
  EXPECT_NEAR(alpha_coefficient(Method::II, 5), std::sqrt(20.0) / 2, 1e-15);
  for (int d : {2, 3, 4}) EXPECT_THROW(error_lower_bound(Method::II, d, 0.3, 100), std::domain_error);
  EXPECT_THROW(alpha_coefficient(Method::QST, 2), std::invalid_argument);
}

TEST(Compare, ExactReconstruction) {
  const auto rho = random_density(3, 4);
  const CouplingConfig cfg(3, 0.6, 0.6);
  const auto r = reconstruct_exact_I(exact_correlation_set(rho, cfg, required_pairs(Method::I)), cfg);
  const auto s = compare(r, rho);
  EXPECT_LT(s.trace_distance, 1e-10);
  EXPECT_EQ(s.delta_rho, 0.0);
  EXPECT_NEAR(s.purity_result, s.purity_reference, 1e-10);
  EXPECT_EQ(s.method, Method::I);
}

TEST(Compare, DimensionMismatch) {
  const auto rho = random_density(2, 4);
  const CouplingConfig cfg(2, 0.6, 0.6);
  const auto r = reconstruct_exact_II(exact_correlation_set(rho, cfg, required_pairs(Method::II)), cfg);
  EXPECT_THROW(compare(r, random_density(3, 1)), std::invalid_argument);
}

TEST(Compare, ReferenceAgainstItself) {
  const auto rho = random_density(2, 9);
  EXPECT_EQ(trace_distance(rho, rho), 0.0);
}

TEST(MonteCarlo, WeakErrorRespectsBound) {
  const double theta = 0.1;
  const std::uint64_t n = 10'000;
  const CouplingConfig cfg(2, theta, theta);
  const double bound = error_lower_bound(Method::W, 2, theta, n).bound;
  for (int s = 0; s < 50; ++s) {
    const auto rho = random_density(2, s);
    const auto r = reconstruct_weak(sampled_correlation_set(rho, cfg, required_pairs(Method::W), n, 900 + s), cfg);
    EXPECT_GE(mean_square_error(r.element_errors), 0.9 * bound) << "seed " << s;
  }
}

TEST(MonteCarlo, PropagatedErrorScalesAsInverseRootN) {
  const CouplingConfig cfg(2, 0.2, 0.2);
  const auto rho = random_density(2, 1);
  std::vector<double> ns{1e3, 1e4, 1e5};
  std::vector<double> errs;
  for (double n : ns) {
    std::vector<double> per_seed;
    for (int s = 0; s < 10; ++s) {
      const auto r = reconstruct_weak(
          sampled_correlation_set(rho, cfg, required_pairs(Method::W), static_cast<std::uint64_t>(n), s), cfg);
      per_seed.push_back(mean_square_error(r.element_errors));
    }
    errs.push_back(median(per_seed));
  }
  EXPECT_NEAR(log_log_slope(ns, errs), -0.5, 0.1);
}

TEST(Ensemble, SpreadOfKnownSamples) {
  std::vector<ComplexMatrix> samples(2, ComplexMatrix::Zero(1, 1));
  samples[1](0, 0) = Complex(2.0, 0.0);
  // mean 1, unbiased variance (1 + 1) / 1 = 2
  EXPECT_NEAR(ensemble_error(samples), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(ensemble_error(std::span(samples).first(1)), std::invalid_argument);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(LogLogSlope, PowerLaw) {
  std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.0));
  EXPECT_NEAR(log_log_slope(x, y), -2.0, 1e-12);
}
