#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dmrecon {

struct OracleCheck {
  std::string name;
  double worst = 0.0;     // largest deviation observed
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool passed() const { return worst <= tolerance; }
};

/// Cross-checks the independent computation routes:
///   closed-form coupling unitary vs eigendecomposition exponential,
///   trace-based correlations vs the closed-form expectation values,
///   exact estimators I and II vs the input state.
std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed);

} // namespace dmrecon
