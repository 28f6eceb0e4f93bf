#pragma once

#include <array>
#include <string>
#include <vector>

#include "dmrecon/qmath.hpp"
#include "dmrecon/states.hpp"

namespace dmrecon {

/// System dimension and the two coupling strengths. theta = 0 is accepted so
/// that identity evolutions can be built, but n_ab() rejects it.
class CouplingConfig {
 public:
  CouplingConfig(int dim, double theta_a, double theta_b);

  int dim() const { return dim_; }
  double theta_a() const { return theta_a_; }
  double theta_b() const { return theta_b_; }

  double t_a() const;
  double t_b() const;
  /// d / (4 sin(theta_a) sin(theta_b)); throws std::domain_error at theta = 0.
  double n_ab() const;

 private:
  int dim_;
  double theta_a_;
  double theta_b_;
};

enum class PointerObservable { X, Y, Z, Pi1 };

std::string to_string(PointerObservable obs);
PointerObservable parse_observable(const std::string& text);

struct PointerProjector {
  double eigenvalue;
  ComplexMatrix projector; // 2x2
};

/// Spectral decomposition of a pointer observable. Outcome index 0 is the +1
/// eigenprojector for X, Y, Z and |1><1| (weight 1) for Pi1.
struct PointerSetting {
  PointerObservable observable;
  std::vector<PointerProjector> projectors;

  static PointerSetting make(PointerObservable obs);
};

struct SettingPair {
  PointerSetting a;
  PointerSetting b;
};

enum class PointerLeg { A, B };

/// Lifts an operator on system (x) pointer to system (x) A (x) B, with
/// identity on the other pointer. Leg order is always system, A, B; every
/// embedding in the library goes through here or through embed().
ComplexMatrix embed_system_pointer(const ComplexMatrix& op, int d, PointerLeg leg);

/// sys (x) ptr_a (x) ptr_b
ComplexMatrix embed(const ComplexMatrix& sys, const ComplexMatrix& ptr_a, const ComplexMatrix& ptr_b);

/// exp(-i theta Pi (x) Y) in closed form: (1 - Pi) (x) 1 + Pi (x) exp(-i theta Y).
ComplexMatrix coupling_unitary(const ComplexMatrix& proj, double theta);

/// U_B U_{A,j} on system (x) A (x) B; U_{A,j} couples Pi_{a_j} to Y_A, U_B
/// couples Pi_{b0} to Y_B. j is 1-indexed.
ComplexMatrix build_coupled_evolution(int j, const CouplingConfig& cfg);

/// Same factors multiplied in the opposite order (U_{A,j} U_B).
ComplexMatrix build_reversed_evolution(int j, const CouplingConfig& cfg);

struct TripartiteState {
  int d;
  int j;
  ComplexMatrix sigma; // 4d x 4d
};

/// sigma_out = U sigma_in U^dagger, sigma_in = rho (x) |0><0| (x) |0><0|.
TripartiteState evolve(const DensityMatrix& rho, int j, const CouplingConfig& cfg);
TripartiteState evolve_with(const DensityMatrix& rho, int j, const ComplexMatrix& unitary);

class OutcomeTable {
 public:
  OutcomeTable(int j, int d, SettingPair settings, std::vector<double> probs);

  int j() const { return j_; }
  int dim() const { return d_; }
  const SettingPair& settings() const { return settings_; }
  std::size_t outcomes_a() const { return settings_.a.projectors.size(); }
  std::size_t outcomes_b() const { return settings_.b.projectors.size(); }

  /// k is 1-indexed.
  double prob(std::size_t alpha, std::size_t beta, int k) const { return probs_[index(alpha, beta, k)]; }
  double& prob(std::size_t alpha, std::size_t beta, int k) { return probs_[index(alpha, beta, k)]; }
  std::size_t index(std::size_t alpha, std::size_t beta, int k) const {
    return (alpha * outcomes_b() + beta) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(k - 1);
  }

  /// Flattened (alpha, beta, k) with k fastest.
  const std::vector<double>& flat() const { return probs_; }
  double total() const;

 private:
  int j_;
  int d_;
  SettingPair settings_;
  std::vector<double> probs_;
};

/// probs[(alpha, beta, k)] = Tr[(Pi_{a_k} (x) P_alpha (x) P_beta) sigma_out].
/// Values in [-1e-12, 0) are clipped to zero; anything below -1e-9 throws.
OutcomeTable outcome_probabilities(const TripartiteState& sigma_out, const SettingPair& settings);

} // namespace dmrecon
