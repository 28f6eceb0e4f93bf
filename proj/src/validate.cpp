#include "dmrecon/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dmrecon/reconstruct.hpp"
#include "dmrecon/rng.hpp"

namespace dmrecon {

namespace {

ComplexVector random_unit_vector(int d, CounterRng& rng) {
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

double uniform_theta(CounterRng& rng) { return 0.05 + (std::numbers::pi / 2 - 0.05) * rng.uniform(); }

} // namespace

std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed) {
  CounterRng rng(derive_seed(seed, {0x76616c}));
  std::vector<OracleCheck> checks;

  OracleCheck unitary{"coupling unitary closed form vs matrix exponential", 0.0, 1e-12, 0};
  for (int c = 0; c < 50; ++c) {
    const int d = 2 + c % 4;
    const ComplexMatrix proj = outer(random_unit_vector(d, rng));
    const double theta = std::numbers::pi * rng.uniform();
    const ComplexMatrix closed = coupling_unitary(proj, theta);
    const ComplexMatrix oracle = matrix_exponential(tensor(proj, pauli::y()), theta);
    unitary.worst = std::max(unitary.worst, (closed - oracle).cwiseAbs().maxCoeff());
    ++unitary.cases;
  }
  checks.push_back(unitary);

  OracleCheck correl{"trace correlations vs closed forms (8 pairs)", 0.0, 1e-10, 0};
  for (int c = 0; c < 200; ++c) {
    const int d = 2 + c % 4;
    const double ta = uniform_theta(rng);
    const double tb = (c % 2 == 0) ? ta : uniform_theta(rng);
    const CouplingConfig cfg(d, ta, tb);
    const DensityMatrix rho = random_density(d, rng.next_u64());
    const auto& pairs = supported_analytic_pairs();
    const CorrelationSet exact = exact_correlation_set(rho, cfg, pairs);
    const CorrelationSet closed = analytic_correlation_set(rho, cfg, pairs);
    for (int j = 1; j <= d; ++j)
      for (int k = 1; k <= d; ++k)
        for (const auto& p : pairs) {
          correl.worst = std::max(correl.worst, std::abs(exact.at(j, k, p).value - closed.at(j, k, p).value));
        }
    ++correl.cases;
  }
  checks.push_back(correl);

  OracleCheck exactness{"exact estimators I and II reproduce the input", 0.0, 1e-9, 0};
  for (double theta : {0.1, 0.5, 1.0, std::numbers::pi / 2}) {
    for (int d = 2; d <= 5; ++d) {
      for (int c = 0; c < 5; ++c) {
        const CouplingConfig cfg(d, theta, theta);
        const DensityMatrix rho = random_density(d, rng.next_u64());
        const CorrelationSet set = exact_correlation_set(rho, cfg, required_pairs(Method::I));
        for (Method m : {Method::I, Method::II}) {
          exactness.worst = std::max(exactness.worst, trace_distance(reconstruct(m, set, cfg).density(), rho));
        }
        ++exactness.cases;
      }
    }
  }
  checks.push_back(exactness);
  return checks;
}

} // namespace dmrecon
