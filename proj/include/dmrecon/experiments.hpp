#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmrecon/metrics.hpp"
#include "dmrecon/reconstruct.hpp"
#include "dmrecon/states.hpp"

namespace dmrecon {

enum class ScenarioKind { PuritySweep, StrengthSweep, ErrorSweep, Single };
enum class CorrelationMode { Sampled, Exact };
enum class ReferenceMode { Truth, Qst };

std::string to_string(ScenarioKind k);
std::string to_string(CorrelationMode m);
std::string to_string(ReferenceMode m);
ScenarioKind parse_scenario_kind(const std::string& text);
CorrelationMode parse_correlation_mode(const std::string& text);
ReferenceMode parse_reference_mode(const std::string& text);

/// Systematic pointer-measurement imperfections: every pointer projector is
/// conjugated by exp(-i epsilon Y), and the counts of one designated
/// projector are scaled by an efficiency before renormalization.
struct BiasModel {
  double pointer_rotation_epsilon = 0.0; // |epsilon| <= 0.1 rad
  double per_projector_efficiency = 1.0; // in [0.9, 1.1]
  PointerLeg efficiency_leg = PointerLeg::A;
  PointerObservable efficiency_observable = PointerObservable::X;
  std::size_t efficiency_outcome = 0;

  /// Empty when valid.
  std::vector<std::string> validate() const;
};

/// Rotated copies of both settings. Eigenvalues are kept.
SettingPair apply_bias(const SettingPair& settings, const BiasModel& bias);

/// Scales the designated projector's row and renormalizes to the original total.
void apply_efficiency(OutcomeTable& table, const BiasModel& bias);

/// Measurement function that applies apply_bias and apply_efficiency.
MeasurementFn biased_measurement(const BiasModel& bias);

struct Scenario {
  std::string id;
  ScenarioKind kind = ScenarioKind::Single;
  StateSpec input_state = PureSpec{"D"};
  int d = 2;
  std::vector<double> theta_list;
  std::uint64_t n_events = 10000;
  std::vector<std::uint64_t> seeds;
  std::optional<BiasModel> bias;
  std::vector<Method> methods{Method::W, Method::I, Method::II};
  CorrelationMode mode = CorrelationMode::Sampled;
  ReferenceMode reference = ReferenceMode::Truth;
  int purity_points = 9;

  /// Empty when valid.
  std::vector<std::string> validate() const;
};

/// 12 log-spaced strengths in [0.05, pi/2].
std::vector<double> default_theta_grid();
std::vector<double> log_grid(double lo, double hi, int points);

/// Seed column values for rows that are not tied to one Monte Carlo draw.
inline constexpr const char* kSeedExact = "exact";
inline constexpr const char* kSeedEnsemble = "ensemble";
/// Method column of the theoretical weak-estimator curve T(E[rho^W], rho),
/// evaluated on the Hermitian part of the expected raw estimate.
inline constexpr const char* kMethodWeakTheory = "W_theory";

struct ResultRow {
  std::string scenario_id;
  std::string kind;
  std::string method;
  int d = 2;
  double theta_a = 0;
  double theta_b = 0;
  double purity_p = 0;
  std::uint64_t n_events = 0;
  std::string seed;
  double trace_distance = 0;
  double delta_rho = 0;
  double bound = 0;
  double bias_epsilon = 0;
  double bias_efficiency = 1;
};

/// One scenario point: a single coupling strength and input state, with
/// every seed and method of the scenario evaluated at it.
struct PointSpec {
  std::size_t theta_index = 0;
  double theta = 0;
  std::size_t purity_index = 0;
  std::optional<double> purity_p; // set for purity sweeps
};

std::vector<PointSpec> scenario_points(const Scenario& scn);

/// All rows for one point, in (method, seed) order followed by any aggregate rows.
std::vector<ResultRow> run_point(const Scenario& scn, const PointSpec& point, std::uint64_t root_seed);

/// Runs every point of every scenario on up to `threads` workers (0 picks
/// the hardware concurrency). Row order depends only on the inputs.
std::vector<ResultRow> run_scenarios(const std::vector<Scenario>& scenarios, std::uint64_t root_seed,
                                     unsigned threads = 0);

std::vector<ResultRow> run_purity_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads = 0);
std::vector<ResultRow> run_strength_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads = 0);
std::vector<ResultRow> run_error_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads = 0);

/// Seed used for the sampled correlations of (scenario, point, seed).
std::uint64_t point_seed(std::uint64_t root_seed, const Scenario& scn, const PointSpec& point, std::uint64_t seed);

} // namespace dmrecon
