#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmrecon/correlations.hpp"

namespace dmrecon {

/// W: weak-coupling estimator; I: exact estimator with tan(theta/2)
/// corrections; II: exact three-observable estimator; QST: linear-inversion
/// tomography reference.
enum class Method { W, I, II, QST };

std::string to_string(Method m);
Method parse_method(const std::string& text);

/// Pointer observable pairs each direct estimator consumes (empty for QST).
const std::vector<ObservablePair>& required_pairs(Method m);

/// Union of required_pairs over the given methods, in a fixed order.
std::vector<ObservablePair> pairs_for(std::span<const Method> methods);

struct ReconstructionResult {
  Method method = Method::W;
  ComplexMatrix raw;
  /// Absent when the Hermitian part has (near-)zero trace; see finalize_error.
  std::optional<DensityMatrix> finalized;
  std::string finalize_error;
  RealMatrix element_errors; // |delta rho_jk|, zero for exact inputs
  std::optional<CouplingConfig> config;
  std::uint64_t n_events = 0;

  /// The finalized matrix; throws std::runtime_error if finalization failed.
  const DensityMatrix& density() const;
};

/// Hermitian part, then trace normalization. No positivity projection.
/// Throws std::domain_error when |Tr| <= 1e-9.
DensityMatrix finalize(const ComplexMatrix& raw);

ReconstructionResult reconstruct_weak(const CorrelationSet& correls, const CouplingConfig& cfg);
ReconstructionResult reconstruct_exact_I(const CorrelationSet& correls, const CouplingConfig& cfg);
ReconstructionResult reconstruct_exact_II(const CorrelationSet& correls, const CouplingConfig& cfg);

/// Dispatches W, I or II.
ReconstructionResult reconstruct(Method method, const CorrelationSet& correls, const CouplingConfig& cfg);

struct ProjectorMeasurement {
  ComplexVector state;    // normalized |psi>, projector |psi><psi|
  double probability = 0; // Tr[|psi><psi| rho]
  double std_error = 0;
};

/// {|a_j>} then, for j < k, |+_jk> = (a_j + a_k)/sqrt2 and |i_jk> = (a_j + i a_k)/sqrt2.
std::vector<ComplexVector> default_qst_states(int d);

/// H, V, D, R with R = (H - iV)/sqrt2.
std::vector<ComplexVector> qubit_qst_states();

/// Linear inversion from projector probabilities. For d = 2 with exactly the
/// {H, V, D, R} set the closed form is used; otherwise the linear system on
/// vec(rho) is solved (least squares when overcomplete). Rank-deficient
/// projector sets throw.
ReconstructionResult qst_linear_inversion(std::span<const ProjectorMeasurement> measurements, int d);

/// Closed-form qubit inversion: rho_11 = pH, rho_22 = pV,
/// Re rho_12 = pD - 1/2, Im rho_12 = pR - 1/2.
ComplexMatrix qst_qubit_closed_form(double p_h, double p_v, double p_d, double p_r);

/// Born probabilities Tr[|psi><psi| rho].
std::vector<ProjectorMeasurement> born_probabilities(const DensityMatrix& rho,
                                                     std::span<const ComplexVector> states);

/// Binomial n-event estimates of each projector probability.
std::vector<ProjectorMeasurement> sample_projectors(const DensityMatrix& rho, std::span<const ComplexVector> states,
                                                    std::uint64_t n, std::uint64_t rng_seed);

} // namespace dmrecon
