#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmrecon/experiments.hpp"

namespace dmrecon {

struct ConfigDocument {
  std::uint64_t root_seed = 0;
  std::string output_dir;
  double tolerance = kDefaultTolerance;
  unsigned threads = 0;
  std::vector<Scenario> scenarios;
};

/// Every problem found in a config file, each prefixed with its line number.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// INI-like format:
///
///   root_seed = 2018
///   [scenario fig3]
///   kind = purity_sweep
///   theta = pi/2
///
/// The whole file is validated before anything is returned; unknown keys,
/// malformed values, range errors and duplicate ids are all reported together.
ConfigDocument parse_config(const std::string& text);

/// Canonical text form; parse_config(write_config(doc)) reproduces doc.
std::string write_config(const ConfigDocument& doc);

/// DMRECON_SEED, when set, replaces root_seed.
void apply_env_overrides(ConfigDocument& doc);

/// Accepts plain numbers and pi expressions: pi, pi/2, 3*pi/8, 0.25*pi.
double parse_angle(const std::string& text);

enum class MatrixFormat { Text, Machine };

/// Text: aligned `re+im i` cells with six decimals. Machine: one
/// `row,col,re,im` line per entry, 1-indexed, 17 significant digits.
std::string write_matrix(const ComplexMatrix& m, MatrixFormat format);

/// Inverse of the machine format.
ComplexMatrix read_matrix(const std::string& machine_text);

inline constexpr const char* kCsvHeader =
    "scenario_id,kind,method,d,theta_a,theta_b,purity_p,n_events,seed,trace_distance,delta_rho,bound,"
    "bias_epsilon,bias_efficiency";

/// %.17g formatting; NaN is written as `nan`.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

} // namespace dmrecon
