#include "dmrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmrecon {

double mean_square_error(const RealMatrix& element_errors) {
  if (element_errors.size() > 0 && element_errors.minCoeff() < 0.0) {
    throw std::invalid_argument("mean_square_error: element errors must be non-negative");
  }
  return element_errors.norm();
}

double alpha_coefficient(Method method, int d) {
  if (d < 1) throw std::invalid_argument("alpha_coefficient: dimension must be positive");
  const double dd = static_cast<double>(d);
  switch (method) {
    case Method::W:
    case Method::I:
      return (dd - 1.0) * std::sqrt(dd) / (2.0 * std::sqrt(2.0));
    case Method::II:
      if (d < 5) {
        throw std::domain_error("alpha_coefficient: the method II coefficient sqrt(d(d-1)(d-4))/2 has a negative "
                                "radicand for d = " + std::to_string(d) + "; use the Monte Carlo ensemble error");
      }
      return std::sqrt(dd * (dd - 1.0) * (dd - 4.0)) / 2.0;
    case Method::QST:
      break;
  }
  throw std::invalid_argument("alpha_coefficient: no bound for QST");
}

ErrorBound error_lower_bound(Method method, int d, double theta, std::uint64_t n) {
  if (!(theta > 0.0)) throw std::invalid_argument("error_lower_bound: theta must be positive");
  if (n < 1) throw std::invalid_argument("error_lower_bound: n must be at least 1");
  const double alpha = alpha_coefficient(method, d);
  return ErrorBound{method, d, theta, n, alpha, alpha / (theta * theta * std::sqrt(static_cast<double>(n)))};
}

ComparisonSummary compare(const ReconstructionResult& result, const DensityMatrix& reference) {
  const DensityMatrix& rho = result.density();
  if (rho.dim() != reference.dim()) {
    throw std::invalid_argument("compare: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                                std::to_string(reference.dim()) + ")");
  }
  return ComparisonSummary{result.method, trace_distance(rho, reference), mean_square_error(result.element_errors),
                           purity(rho), purity(reference)};
}

double ensemble_error(std::span<const ComplexMatrix> samples) {
  if (samples.size() < 2) throw std::invalid_argument("ensemble_error: need at least two samples");
  ComplexMatrix mean = ComplexMatrix::Zero(samples[0].rows(), samples[0].cols());
  for (const auto& s : samples) {
    if (s.rows() != mean.rows() || s.cols() != mean.cols()) {
      throw std::invalid_argument("ensemble_error: samples have different shapes");
    }
    mean += s;
  }
  mean /= static_cast<double>(samples.size());
  double total = 0.0;
  for (const auto& s : samples) total += (s - mean).squaredNorm();
  return std::sqrt(total / static_cast<double>(samples.size() - 1));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log_log_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace dmrecon
