#include "dmrecon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "dmrecon/rng.hpp"

namespace dmrecon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfPi = std::numbers::pi / 2.0;

} // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PuritySweep: return "purity_sweep";
    case ScenarioKind::StrengthSweep: return "strength_sweep";
    case ScenarioKind::ErrorSweep: return "error_sweep";
    case ScenarioKind::Single: return "single";
  }
  return "?";
}

std::string to_string(CorrelationMode m) { return m == CorrelationMode::Exact ? "exact" : "sampled"; }
std::string to_string(ReferenceMode m) { return m == ReferenceMode::Qst ? "qst" : "truth"; }

ScenarioKind parse_scenario_kind(const std::string& text) {
  if (text == "purity_sweep") return ScenarioKind::PuritySweep;
  if (text == "strength_sweep") return ScenarioKind::StrengthSweep;
  if (text == "error_sweep") return ScenarioKind::ErrorSweep;
  if (text == "single") return ScenarioKind::Single;
  throw std::invalid_argument("unknown scenario kind '" + text +
                              "' (expected purity_sweep, strength_sweep, error_sweep or single)");
}

CorrelationMode parse_correlation_mode(const std::string& text) {
  if (text == "sampled") return CorrelationMode::Sampled;
  if (text == "exact") return CorrelationMode::Exact;
  throw std::invalid_argument("unknown mode '" + text + "' (expected sampled or exact)");
}

ReferenceMode parse_reference_mode(const std::string& text) {
  if (text == "truth") return ReferenceMode::Truth;
  if (text == "qst") return ReferenceMode::Qst;
  throw std::invalid_argument("unknown reference '" + text + "' (expected truth or qst)");
}

std::vector<std::string> BiasModel::validate() const {
  std::vector<std::string> errors;
  if (!(std::abs(pointer_rotation_epsilon) <= 0.1)) {
    errors.push_back("bias epsilon must satisfy |epsilon| <= 0.1 rad");
  }
  if (!(per_projector_efficiency >= 0.9 && per_projector_efficiency <= 1.1)) {
    errors.push_back("bias efficiency must lie in [0.9, 1.1]");
  }
  if (efficiency_outcome > 1) errors.push_back("bias target outcome must be 0 or 1");
  return errors;
}

SettingPair apply_bias(const SettingPair& settings, const BiasModel& bias) {
  if (bias.pointer_rotation_epsilon == 0.0) return settings;
  const double c = std::cos(bias.pointer_rotation_epsilon);
  const double s = std::sin(bias.pointer_rotation_epsilon);
  ComplexMatrix r(2, 2);
  r << c, -s, s, c; // exp(-i epsilon Y)
  SettingPair out = settings;
  for (auto* setting : {&out.a, &out.b})
    for (auto& p : setting->projectors) p.projector = r * p.projector * r.adjoint();
  return out;
}

void apply_efficiency(OutcomeTable& table, const BiasModel& bias) {
  if (bias.per_projector_efficiency == 1.0) return;
  const bool on_a = bias.efficiency_leg == PointerLeg::A;
  const PointerSetting& target = on_a ? table.settings().a : table.settings().b;
  if (target.observable != bias.efficiency_observable) return;
  const double before = table.total();
  for (std::size_t alpha = 0; alpha < table.outcomes_a(); ++alpha)
    for (std::size_t beta = 0; beta < table.outcomes_b(); ++beta) {
      if ((on_a ? alpha : beta) != bias.efficiency_outcome) continue;
      for (int k = 1; k <= table.dim(); ++k) table.prob(alpha, beta, k) *= bias.per_projector_efficiency;
    }
  const double after = table.total();
  if (after > 0.0) {
    for (std::size_t alpha = 0; alpha < table.outcomes_a(); ++alpha)
      for (std::size_t beta = 0; beta < table.outcomes_b(); ++beta)
        for (int k = 1; k <= table.dim(); ++k) table.prob(alpha, beta, k) *= before / after;
  }
}

MeasurementFn biased_measurement(const BiasModel& bias) {
  return [bias](const TripartiteState& state, const SettingPair& settings) {
    OutcomeTable t = outcome_probabilities(state, apply_bias(settings, bias));
    apply_efficiency(t, bias);
    return t;
  };
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> errors;
  if (id.empty()) errors.push_back("scenario id is empty");
  if (d < 1 || d > kMaxSystemDim) errors.push_back("d must lie in 1.." + std::to_string(kMaxSystemDim));
  if (theta_list.empty()) errors.push_back("theta list is empty");
  for (double t : theta_list) {
    if (!(t > 0.0 && t <= kHalfPi + 1e-12)) {
      errors.push_back("theta = " + std::to_string(t) +
                       " outside (0, pi/2]: N_AB = d/(4 sin(theta_A) sin(theta_B)) is singular at theta = 0");
    }
  }
  if (n_events < 1) errors.push_back("n_events must be at least 1");
  if (seeds.empty()) errors.push_back("seeds must be nonempty");
  if (methods.empty()) errors.push_back("methods must be nonempty");
  if (kind == ScenarioKind::PuritySweep) {
    if (theta_list.size() != 1) errors.push_back("purity_sweep needs exactly one theta");
    if (purity_points < 2) errors.push_back("purity_points must be at least 2");
    if (!std::holds_alternative<PureSpec>(input_state) && !std::holds_alternative<FamilySpec>(input_state)) {
      errors.push_back("purity_sweep needs a pure:<label> or family: state to supply psi");
    }
  }
  if (bias) {
    for (auto& e : bias->validate()) errors.push_back(e);
  }
  if (errors.empty()) {
    try {
      if (kind == ScenarioKind::PuritySweep) {
        const std::string label = std::holds_alternative<PureSpec>(input_state)
                                      ? std::get<PureSpec>(input_state).label
                                      : std::get<FamilySpec>(input_state).psi;
        named_state(label, d);
      } else {
        make_state(input_state, d);
      }
    } catch (const std::exception& e) {
      errors.push_back(std::string("state: ") + e.what());
    }
  }
  return errors;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: invalid range");
  if (points == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_theta_grid() { return log_grid(0.05, kHalfPi, 12); }

std::vector<PointSpec> scenario_points(const Scenario& scn) {
  std::vector<PointSpec> points;
  if (scn.kind == ScenarioKind::PuritySweep) {
    for (int i = 0; i < scn.purity_points; ++i) {
      PointSpec p;
      p.theta = scn.theta_list.front();
      p.purity_index = static_cast<std::size_t>(i);
      p.purity_p = static_cast<double>(i) / (scn.purity_points - 1);
      points.push_back(p);
    }
  } else {
    for (std::size_t t = 0; t < scn.theta_list.size(); ++t) {
      PointSpec p;
      p.theta_index = t;
      p.theta = scn.theta_list[t];
      points.push_back(p);
    }
  }
  return points;
}

std::uint64_t point_seed(std::uint64_t root_seed, const Scenario& scn, const PointSpec& point, std::uint64_t seed) {
  return derive_seed(root_seed, {hash_string(scn.id), point.theta_index, point.purity_index, seed});
}

namespace {

DensityMatrix point_state(const Scenario& scn, const PointSpec& point) {
  if (point.purity_p) {
    const std::string label = std::holds_alternative<PureSpec>(scn.input_state)
                                  ? std::get<PureSpec>(scn.input_state).label
                                  : std::get<FamilySpec>(scn.input_state).psi;
    return purity_family(*point.purity_p, named_state(label, scn.d));
  }
  return make_state(scn.input_state, scn.d);
}

double purity_column(const Scenario& scn, const PointSpec& point) {
  if (point.purity_p) return *point.purity_p;
  struct Visitor {
    double operator()(const PureSpec&) const { return 1.0; }
    double operator()(const MixedSpec&) const { return 0.0; }
    double operator()(const FamilySpec& f) const { return f.p; }
    double operator()(const RandomSpec&) const { return kNaN; }
  };
  return std::visit(Visitor{}, scn.input_state);
}

double bound_column(Method m, int d, double theta, std::uint64_t n) {
  if (m == Method::QST || n == 0) return kNaN;
  if (m == Method::II && d < 5) return kNaN;
  return error_lower_bound(m, d, theta, n).bound;
}

std::vector<ComplexVector> qst_states_for(int d) { return d == 2 ? qubit_qst_states() : default_qst_states(d); }

double distance_or_nan(const ReconstructionResult& r, const std::optional<DensityMatrix>& reference) {
  if (!r.finalized || !reference) return kNaN;
  return trace_distance(*r.finalized, *reference);
}

std::optional<DensityMatrix> reference_state(const Scenario& scn, const DensityMatrix& rho,
                                             std::optional<std::uint64_t> sample_seed) {
  if (scn.reference == ReferenceMode::Truth) return rho;
  const auto states = qst_states_for(scn.d);
  const auto meas = sample_seed ? sample_projectors(rho, states, scn.n_events, *sample_seed)
                                : born_probabilities(rho, states);
  const ReconstructionResult r = qst_linear_inversion(meas, scn.d);
  return r.finalized;
}

} // namespace

std::vector<ResultRow> run_point(const Scenario& scn, const PointSpec& point, std::uint64_t root_seed) {
  const DensityMatrix rho = point_state(scn, point);
  const CouplingConfig cfg(scn.d, point.theta, point.theta);
  const MeasurementFn measure = scn.bias ? biased_measurement(*scn.bias) : MeasurementFn{};

  std::vector<Method> direct;
  for (Method m : scn.methods)
    if (m != Method::QST) direct.push_back(m);
  const std::vector<ObservablePair> pairs = pairs_for(direct);
  const bool sampled = scn.mode == CorrelationMode::Sampled;

  ResultRow base;
  base.scenario_id = scn.id;
  base.kind = to_string(scn.kind);
  base.d = scn.d;
  base.theta_a = point.theta;
  base.theta_b = point.theta;
  base.purity_p = purity_column(scn, point);
  base.n_events = sampled ? scn.n_events : 0;
  base.bias_epsilon = scn.bias ? scn.bias->pointer_rotation_epsilon : 0.0;
  base.bias_efficiency = scn.bias ? scn.bias->per_projector_efficiency : 1.0;

  // per_method[m][s]: (row, raw estimate)
  std::vector<std::vector<std::pair<ResultRow, ComplexMatrix>>> per_method(scn.methods.size());

  auto evaluate = [&](const std::string& seed_label, std::optional<std::uint64_t> sample_seed) {
    const auto reference = reference_state(
        scn, rho, sample_seed ? std::optional<std::uint64_t>(derive_seed(*sample_seed, {2})) : std::nullopt);
    std::optional<CorrelationSet> correls;
    if (!pairs.empty()) {
      correls = sample_seed ? sampled_correlation_set(rho, cfg, pairs, scn.n_events, *sample_seed, measure)
                            : exact_correlation_set(rho, cfg, pairs, measure);
    }
    for (std::size_t mi = 0; mi < scn.methods.size(); ++mi) {
      const Method m = scn.methods[mi];
      ReconstructionResult r;
      if (m == Method::QST) {
        const auto states = qst_states_for(scn.d);
        const auto meas = sample_seed ? sample_projectors(rho, states, scn.n_events, derive_seed(*sample_seed, {1}))
                                      : born_probabilities(rho, states);
        r = qst_linear_inversion(meas, scn.d);
      } else {
        r = reconstruct(m, *correls, cfg);
      }
      ResultRow row = base;
      row.method = to_string(m);
      row.seed = seed_label;
      row.trace_distance = distance_or_nan(r, reference);
      row.delta_rho = mean_square_error(r.element_errors);
      row.bound = bound_column(m, scn.d, point.theta, base.n_events);
      per_method[mi].emplace_back(std::move(row), std::move(r.raw));
    }
  };

  if (sampled) {
    for (std::uint64_t s : scn.seeds) evaluate(std::to_string(s), point_seed(root_seed, scn, point, s));
  } else {
    evaluate(kSeedExact, std::nullopt);
  }

  std::vector<ResultRow> rows;
  for (std::size_t mi = 0; mi < scn.methods.size(); ++mi)
    for (const auto& entry : per_method[mi]) rows.push_back(entry.first);

  if (scn.kind == ScenarioKind::StrengthSweep &&
      std::find(scn.methods.begin(), scn.methods.end(), Method::W) != scn.methods.end()) {
    const CorrelationSet exact = exact_correlation_set(rho, cfg, required_pairs(Method::W));
    const ReconstructionResult expected_w = reconstruct_weak(exact, cfg);
    ResultRow row = base;
    row.method = kMethodWeakTheory;
    row.seed = kSeedExact;
    row.n_events = 0;
    // Expected estimator under the known-theta normalization only: trace
    // normalization is nonlinear and singular where Tr E[rho^W] crosses zero.
    row.trace_distance = trace_distance(hermitian_part(expected_w.raw), rho.matrix());
    row.delta_rho = 0.0;
    row.bound = kNaN;
    row.bias_epsilon = 0.0;
    row.bias_efficiency = 1.0;
    rows.push_back(row);
  }

  if (scn.kind == ScenarioKind::ErrorSweep && sampled) {
    for (std::size_t mi = 0; mi < scn.methods.size(); ++mi) {
      std::vector<double> distances;
      std::vector<ComplexMatrix> raws;
      for (const auto& [row, raw] : per_method[mi]) {
        if (std::isfinite(row.trace_distance)) distances.push_back(row.trace_distance);
        raws.push_back(raw);
      }
      ResultRow row = base;
      row.method = to_string(scn.methods[mi]);
      row.seed = kSeedEnsemble;
      row.trace_distance = distances.empty() ? kNaN : median(distances);
      row.delta_rho = raws.size() >= 2 ? ensemble_error(raws) : kNaN;
      row.bound = bound_column(scn.methods[mi], scn.d, point.theta, scn.n_events);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ResultRow> run_scenarios(const std::vector<Scenario>& scenarios, std::uint64_t root_seed,
                                     unsigned threads) {
  struct Task {
    const Scenario* scn;
    PointSpec point;
  };
  std::vector<Task> tasks;
  for (const auto& scn : scenarios) {
    const auto errors = scn.validate();
    if (!errors.empty()) throw std::invalid_argument("scenario '" + scn.id + "': " + errors.front());
    for (const auto& p : scenario_points(scn)) tasks.push_back({&scn, p});
  }

  std::vector<std::vector<ResultRow>> results(tasks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = run_point(*tasks[i].scn, tasks[i].point, root_seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

namespace {

std::vector<ResultRow> run_kind(const Scenario& scn, ScenarioKind expected, std::uint64_t root_seed, unsigned threads) {
  if (scn.kind != expected) {
    throw std::invalid_argument("scenario '" + scn.id + "' has kind " + to_string(scn.kind) + ", expected " +
                                to_string(expected));
  }
  return run_scenarios({scn}, root_seed, threads);
}

} // namespace

std::vector<ResultRow> run_purity_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads) {
  return run_kind(scn, ScenarioKind::PuritySweep, root_seed, threads);
}

std::vector<ResultRow> run_strength_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads) {
  return run_kind(scn, ScenarioKind::StrengthSweep, root_seed, threads);
}

std::vector<ResultRow> run_error_sweep(const Scenario& scn, std::uint64_t root_seed, unsigned threads) {
  return run_kind(scn, ScenarioKind::ErrorSweep, root_seed, threads);
}

} // namespace dmrecon
