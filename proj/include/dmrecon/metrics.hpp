#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmrecon/reconstruct.hpp"

namespace dmrecon {

/// sqrt(sum_jk |delta rho_jk|^2)
double mean_square_error(const RealMatrix& element_errors);

/// Weak-regime reference curve alpha(d) / (theta^2 sqrt(n)), with n the
/// number of events per correlation term. It is a first-order result and
/// is only a reference, not a guarantee, away from small theta.
struct ErrorBound {
  Method method;
  int d;
  double theta;
  std::uint64_t n;
  double alpha;
  double bound;
};

/// (d-1) sqrt(d) / (2 sqrt 2) for W and I; sqrt(d (d-1) (d-4)) / 2 for II,
/// which is only real for d >= 5 (d < 5 throws std::domain_error).
double alpha_coefficient(Method method, int d);

ErrorBound error_lower_bound(Method method, int d, double theta, std::uint64_t n);

struct ComparisonSummary {
  Method method;
  double trace_distance;
  double delta_rho;
  double purity_result;
  double purity_reference;
};

/// Throws if the result could not be finalized or dimensions differ.
ComparisonSummary compare(const ReconstructionResult& result, const DensityMatrix& reference);

/// Spread of an ensemble of reconstructions: sqrt(sum_jk Var_samples(rho_jk)),
/// with the unbiased (n - 1) variance. Needs at least two samples.
double ensemble_error(std::span<const ComplexMatrix> samples);

double median(std::vector<double> values);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

} // namespace dmrecon
