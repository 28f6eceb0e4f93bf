#include "dmrecon/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dmrecon {

using Obs = PointerObservable;

std::string to_string(CorrelationSource s) {
  switch (s) {
    case CorrelationSource::Exact: return "exact";
    case CorrelationSource::Analytic: return "analytic";
    case CorrelationSource::Sampled: return "sampled";
  }
  return "?";
}

std::string to_string(const ObservablePair& p) { return to_string(p.a) + "_A " + to_string(p.b) + "_B"; }

const std::vector<ObservablePair>& supported_analytic_pairs() {
  static const std::vector<ObservablePair> pairs = {
      {Obs::X, Obs::X},   {Obs::X, Obs::Y},   {Obs::Y, Obs::X},   {Obs::Y, Obs::Y},
      {Obs::Pi1, Obs::X}, {Obs::X, Obs::Pi1}, {Obs::Y, Obs::Pi1}, {Obs::Pi1, Obs::Pi1},
  };
  return pairs;
}

double correlation_value(const OutcomeTable& table, int k) {
  const auto& pa = table.settings().a.projectors;
  const auto& pb = table.settings().b.projectors;
  double v = 0.0;
  for (std::size_t alpha = 0; alpha < pa.size(); ++alpha)
    for (std::size_t beta = 0; beta < pb.size(); ++beta)
      v += pa[alpha].eigenvalue * pb[beta].eigenvalue * table.prob(alpha, beta, k);
  return v;
}

namespace {

SettingPair settings_for(ObservablePair obs) {
  return SettingPair{PointerSetting::make(obs.a), PointerSetting::make(obs.b)};
}

void check_jk(int j, int k, int d) {
  if (j < 1 || j > d || k < 1 || k > d) {
    throw std::out_of_range("correlation indices (" + std::to_string(j) + ", " + std::to_string(k) +
                            ") outside 1.." + std::to_string(d));
  }
}

OutcomeTable measure_or_default(const MeasurementFn& measure, const TripartiteState& s, const SettingPair& p) {
  return measure ? measure(s, p) : outcome_probabilities(s, p);
}

} // namespace

CorrelationRecord exact_correlation(const DensityMatrix& rho, int j, int k, ObservablePair obs,
                                    const CouplingConfig& cfg) {
  check_jk(j, k, cfg.dim());
  const OutcomeTable table = outcome_probabilities(evolve(rho, j, cfg), settings_for(obs));
  return CorrelationRecord{j, k, obs, correlation_value(table, k), 0.0, 0, CorrelationSource::Exact};
}

CorrelationRecord analytic_correlation(const DensityMatrix& rho, int j, int k, ObservablePair obs,
                                       const CouplingConfig& cfg) {
  const int d = cfg.dim();
  if (rho.dim() != d) throw std::invalid_argument("analytic_correlation: dimension mismatch");
  check_jk(j, k, d);
  const auto& supported = supported_analytic_pairs();
  if (std::find(supported.begin(), supported.end(), obs) == supported.end()) {
    std::ostringstream msg;
    msg << "analytic_correlation: no closed form for <" << to_string(obs) << ">; supported pairs:";
    for (const auto& p : supported) msg << " <" << to_string(p) << ">";
    throw std::invalid_argument(msg.str());
  }

  const double n = cfg.n_ab();
  const double sa = std::sin(cfg.theta_a());
  const double ca = std::cos(cfg.theta_a());
  const double sb = std::sin(cfg.theta_b());
  const double cb = std::cos(cfg.theta_b());
  const double dd = static_cast<double>(d);
  const int jj = j - 1;
  const int kk = k - 1;
  const double delta = (j == k) ? 1.0 : 0.0;
  const Complex rjk = rho(jj, kk);
  const double rjj = rho(jj, jj).real();

  // Row sums of rho over l, with and without the l = j term.
  double re_all = 0.0, im_all = 0.0;
  for (int l = 0; l < d; ++l) {
    re_all += rho(jj, l).real();
    im_all += rho(jj, l).imag();
  }
  const double re_off = re_all - rjj;
  const double im_off = im_all - rho(jj, jj).imag();

  double v = 0.0;
  if (obs == ObservablePair{Obs::X, Obs::X}) {
    v = ((1.0 - delta) * rjk.real() + delta * re_off + 2.0 * ca * delta * rjk.real()) / (2.0 * n) +
        (cb - 1.0) / (dd * n) * (re_off + ca * rjj);
  } else if (obs == ObservablePair{Obs::X, Obs::Y}) {
    v = (rjk.imag() - delta * im_off) / (2.0 * n);
  } else if (obs == ObservablePair{Obs::Y, Obs::X}) {
    v = (rjk.imag() + delta * im_off + 2.0 * (cb - 1.0) / dd * im_all) / (2.0 * n);
  } else if (obs == ObservablePair{Obs::Y, Obs::Y}) {
    v = (-rjk.real() + delta * re_all) / (2.0 * n);
  } else if (obs == ObservablePair{Obs::Pi1, Obs::X}) {
    v = delta * sa / (2.0 * n) * rjk.real() + sa * (cb - 1.0) / (2.0 * dd * n) * rjj;
  } else if (obs == ObservablePair{Obs::X, Obs::Pi1}) {
    v = sb / (2.0 * dd * n) * re_all + sb * (ca - 1.0) / (2.0 * dd * n) * rjj;
  } else if (obs == ObservablePair{Obs::Y, Obs::Pi1}) {
    v = sb / (2.0 * dd * n) * im_all;
  } else {
    v = rjj / (16.0 * n * n);
  }
  return CorrelationRecord{j, k, obs, v, 0.0, 0, CorrelationSource::Analytic};
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t n, CounterRng& rng) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs[i]);
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("sample_counts: distribution has zero mass");
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t e = 0; e < n; ++e) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Skip zero-probability cells that share the boundary value.
    auto idx = static_cast<std::size_t>(it - cdf.begin());
    while (idx > 0 && probs[idx] <= 0.0) --idx;
    ++counts[idx];
  }
  return counts;
}

std::vector<CorrelationRecord> sample_from_table(const OutcomeTable& table, std::uint64_t n, CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_from_table: need at least one event");
  const std::vector<std::uint64_t> counts = sample_counts(table.flat(), n, rng);
  const auto& pa = table.settings().a.projectors;
  const auto& pb = table.settings().b.projectors;
  const ObservablePair obs{table.settings().a.observable, table.settings().b.observable};
  const double nn = static_cast<double>(n);

  std::vector<CorrelationRecord> out;
  out.reserve(static_cast<std::size_t>(table.dim()));
  for (int k = 1; k <= table.dim(); ++k) {
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t alpha = 0; alpha < pa.size(); ++alpha) {
      for (std::size_t beta = 0; beta < pb.size(); ++beta) {
        const double w = pa[alpha].eigenvalue * pb[beta].eigenvalue;
        const double f = static_cast<double>(counts[table.index(alpha, beta, k)]) / nn;
        mean += w * f;
        second += w * w * f;
      }
    }
    const double se = std::sqrt(std::max(0.0, second - mean * mean) / nn);
    out.push_back(CorrelationRecord{table.j(), k, obs, mean, se, n, CorrelationSource::Sampled});
  }
  return out;
}

std::vector<CorrelationRecord> sample_correlation(const DensityMatrix& rho, int j, ObservablePair obs,
                                                  const CouplingConfig& cfg, std::uint64_t n,
                                                  std::uint64_t rng_seed) {
  const OutcomeTable table = outcome_probabilities(evolve(rho, j, cfg), settings_for(obs));
  CounterRng rng(rng_seed);
  return sample_from_table(table, n, rng);
}

void CorrelationSet::add(const CorrelationRecord& r) {
  if (r.j < 1 || r.j > dim_ || r.k < 1 || r.k > dim_) {
    throw std::out_of_range("CorrelationSet::add: record index outside 1.." + std::to_string(dim_));
  }
  records_[{r.j, r.k, r.obs}] = r;
}

const CorrelationRecord* CorrelationSet::find(int j, int k, ObservablePair obs) const {
  auto it = records_.find({j, k, obs});
  return it == records_.end() ? nullptr : &it->second;
}

const CorrelationRecord& CorrelationSet::at(int j, int k, ObservablePair obs) const {
  if (const auto* r = find(j, k, obs)) return *r;
  throw std::invalid_argument("missing correlation <" + to_string(obs) + ">_{" + std::to_string(j) + "," +
                              std::to_string(k) + "}");
}

namespace {

std::uint64_t pair_code(ObservablePair p) {
  return static_cast<std::uint64_t>(p.a) * 8 + static_cast<std::uint64_t>(p.b);
}

} // namespace

CorrelationSet exact_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                     std::span<const ObservablePair> pairs, const MeasurementFn& measure) {
  CorrelationSet set(cfg.dim());
  for (int j = 1; j <= cfg.dim(); ++j) {
    const TripartiteState state = evolve(rho, j, cfg);
    for (const auto& obs : pairs) {
      const OutcomeTable table = measure_or_default(measure, state, settings_for(obs));
      for (int k = 1; k <= cfg.dim(); ++k) {
        set.add(CorrelationRecord{j, k, obs, correlation_value(table, k), 0.0, 0, CorrelationSource::Exact});
      }
    }
  }
  return set;
}

CorrelationSet analytic_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                        std::span<const ObservablePair> pairs) {
  CorrelationSet set(cfg.dim());
  for (int j = 1; j <= cfg.dim(); ++j)
    for (const auto& obs : pairs)
      for (int k = 1; k <= cfg.dim(); ++k) set.add(analytic_correlation(rho, j, k, obs, cfg));
  return set;
}

CorrelationSet sampled_correlation_set(const DensityMatrix& rho, const CouplingConfig& cfg,
                                       std::span<const ObservablePair> pairs, std::uint64_t n,
                                       std::uint64_t rng_seed, const MeasurementFn& measure) {
  CorrelationSet set(cfg.dim());
  const CounterRng root(rng_seed);
  for (int j = 1; j <= cfg.dim(); ++j) {
    const TripartiteState state = evolve(rho, j, cfg);
    for (const auto& obs : pairs) {
      const OutcomeTable table = measure_or_default(measure, state, settings_for(obs));
      CounterRng rng = root.split(static_cast<std::uint64_t>(j) * 64 + pair_code(obs));
      for (const auto& r : sample_from_table(table, n, rng)) set.add(r);
    }
  }
  return set;
}

} // namespace dmrecon
