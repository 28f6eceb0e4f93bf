#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "dmrecon/qmath.hpp"

namespace dmrecon {

/// Hermitian, unit-trace d x d operator. Positivity is only asserted when the
/// flag is set; raw reconstructions leave it unset.
class DensityMatrix {
 public:
  /// Validates Hermiticity and trace within tol. When check_positivity is
  /// true, eigenvalues must also be >= -1e-9 and the flag is set.
  explicit DensityMatrix(ComplexMatrix m, bool check_positivity = false,
                         double tol = kDefaultTolerance);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  bool positivity_checked() const { return positivity_checked_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

 private:
  ComplexMatrix matrix_;
  bool positivity_checked_ = false;
};

/// j is 1-indexed, matching the a_1..a_d labelling.
ComplexVector basis_state(int d, int j);

/// Uniform superposition (1/sqrt d) sum_j |a_j>.
ComplexVector b0_state(int d);

/// p |psi><psi| + (1 - p) 1/d.
DensityMatrix purity_family(double p, const ComplexVector& psi);

/// Hilbert-Schmidt (Ginibre-induced) random state, deterministic in seed.
DensityMatrix random_density(int d, std::uint64_t seed);

double purity(const DensityMatrix& rho);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Named pure states. Valid for any d: "D"/"b0" (uniform superposition) and
/// "a<j>" (basis). For d = 2 additionally H, V, A, R, L with
/// R = (H - iV)/sqrt2 and L = (H + iV)/sqrt2.
ComplexVector named_state(const std::string& label, int d);

/// Parsed form of the state grammar:
///   pure:<label> | mixed | family:p=<float>,psi=<label> | random:seed=<int>
struct PureSpec {
  std::string label;
};
struct MixedSpec {};
struct FamilySpec {
  double p = 1.0;
  std::string psi;
};
struct RandomSpec {
  std::uint64_t seed = 0;
};
using StateSpec = std::variant<PureSpec, MixedSpec, FamilySpec, RandomSpec>;

/// Throws std::invalid_argument with a description of the problem.
StateSpec parse_state_spec(const std::string& text);
std::string format_state_spec(const StateSpec& spec);
DensityMatrix make_state(const StateSpec& spec, int d);

} // namespace dmrecon
