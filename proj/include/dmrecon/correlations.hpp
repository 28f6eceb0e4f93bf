#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "dmrecon/protocol.hpp"
#include "dmrecon/rng.hpp"

namespace dmrecon {

enum class CorrelationSource { Exact, Analytic, Sampled };

std::string to_string(CorrelationSource s);

struct ObservablePair {
  PointerObservable a;
  PointerObservable b;
  auto operator<=>(const ObservablePair&) const = default;
};

std::string to_string(const ObservablePair& p);

/// <O_A O_B>_{j,k}: expectation of Pi_{a_k} (x) O_A (x) O_B after U_B U_{A,j}.
struct CorrelationRecord {
  int j = 1;
  int k = 1;
  ObservablePair obs{PointerObservable::X, PointerObservable::X};
  double value = 0.0;
  double std_error = 0.0;      // zero unless sampled
  std::uint64_t n_events = 0;  // zero unless sampled
  CorrelationSource source = CorrelationSource::Exact;
};

/// The eight pairs that have closed forms.
const std::vector<ObservablePair>& supported_analytic_pairs();

/// sum_{alpha,beta} lambda_alpha lambda_beta probs[(alpha, beta, k)]
double correlation_value(const OutcomeTable& table, int k);

CorrelationRecord exact_correlation(const DensityMatrix& rho, int j, int k, ObservablePair obs,
                                    const CouplingConfig& cfg);

/// Closed-form expectation values; throws for pairs outside supported_analytic_pairs().
CorrelationRecord analytic_correlation(const DensityMatrix& rho, int j, int k, ObservablePair obs,
                                       const CouplingConfig& cfg);

/// Multinomial counts by inverse CDF over the flattened distribution.
std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t n, CounterRng& rng);

/// n joint draws over (alpha, beta, k); one record per k.
std::vector<CorrelationRecord> sample_from_table(const OutcomeTable& table, std::uint64_t n, CounterRng& rng);

std::vector<CorrelationRecord> sample_correlation(const DensityMatrix& rho, int j, ObservablePair obs,
                                                  const CouplingConfig& cfg, std::uint64_t n,
                                                  std::uint64_t rng_seed);

/// Records keyed by (j, k, pair).
class CorrelationSet {
 public:
  explicit CorrelationSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  void add(const CorrelationRecord& r);
  const CorrelationRecord* find(int j, int k, ObservablePair obs) const;
  /// Throws std::invalid_argument naming the missing (j, k, pair).
  const CorrelationRecord& at(int j, int k, ObservablePair obs) const;
  std::size_t size() const { return records_.size(); }

 private:
  int dim_;
  std::map<std::tuple<int, int, ObservablePair>, CorrelationRecord> records_;
};

/// Maps an evolved state and nominal settings to the outcome table actually
/// observed. The default is outcome_probabilities; bias models substitute
/// their own.
using MeasurementFn = std::function<OutcomeTable(const TripartiteState&, const SettingPair&)>;

CorrelationSet exact_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                     std::span<const ObservablePair> pairs, const MeasurementFn& measure = {});

CorrelationSet analytic_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                        std::span<const ObservablePair> pairs);

/// Independent n-event samples per (j, pair); the stream for each is split
/// from rng_seed by (j, pair) so adding pairs never shifts other draws.
CorrelationSet sampled_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                       std::span<const ObservablePair> pairs, std::uint64_t n,
                                       std::uint64_t rng_seed, const MeasurementFn& measure = {});

} // namespace dmrecon
