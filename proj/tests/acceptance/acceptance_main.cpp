// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dmrecon/experiments.hpp"
#include "dmrecon/io.hpp"
#include "dmrecon/validate.hpp"

using namespace dmrecon;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::uint64_t> seeds(std::uint64_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::uint64_t i = 0; i < n; ++i) s[i] = i + 1;
  return s;
}

ReconstructionResult exact_reconstruction(Method m, const DensityMatrix& rho, const CouplingConfig& cfg,
                                          const MeasurementFn& measure = {}) {
  return reconstruct(m, exact_correlation_set(rho, cfg, required_pairs(m), measure), cfg);
}

double distance_or_inf(const ReconstructionResult& r, const DensityMatrix& rho) {
  return r.finalized ? trace_distance(*r.finalized, rho) : INFINITY;
}

Outcome exactness() {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (double theta : {0.1, 0.5, 1.0, kHalfPi})
      for (std::uint64_t s = 0; s < 20; ++s) {
        const auto rho = random_density(d, 7000 + 100 * d + s);
        const CouplingConfig cfg(d, theta, theta);
        worst = std::max(worst, distance_or_inf(exact_reconstruction(Method::I, rho, cfg), rho));
        worst = std::max(worst, distance_or_inf(exact_reconstruction(Method::II, rho, cfg), rho));
      }
  return {worst < 1e-9, fmt("worst T = %.2e over 320 states, limit 1e-9", worst)};
}

Outcome oracle(const char* name) {
  for (const auto& c : run_oracle_checks(2018))
    if (c.name.rfind(name, 0) == 0) return {c.passed(), fmt("worst |diff| = %.2e over %zu cases, limit %.0e", c.worst, c.cases, c.tolerance)};
  return {false, "check not found"};
}

Outcome weak_bias() {
  const DensityMatrix rho(outer(named_state("D", 2)));
  const CouplingConfig strong(2, kHalfPi, kHalfPi);
  const double tw = distance_or_inf(exact_reconstruction(Method::W, rho, strong), rho);
  const double ti = distance_or_inf(exact_reconstruction(Method::I, rho, strong), rho);
  const double tii = distance_or_inf(exact_reconstruction(Method::II, rho, strong), rho);
  const double tw_weak = distance_or_inf(exact_reconstruction(Method::W, rho, CouplingConfig(2, 0.01, 0.01)), rho);
  const bool pass = tw > 0.05 && ti < 1e-9 && tii < 1e-9 && tw_weak < 1e-3;
  return {pass, fmt("T(W,pi/2) = %.4f, T(I) = %.1e, T(II) = %.1e, T(W,0.01) = %.1e", tw, ti, tii, tw_weak)};
}

// Median propagated delta rho of method W for |D>, d = 2, over 50 seeds.
struct ScalingPoint {
  double median_delta;
  double min_ratio_to_bound;
};

ScalingPoint weak_scaling_point(double theta, std::uint64_t n, std::uint64_t root) {
  Scenario scn;
  scn.id = fmt("w_%g_%llu", theta, static_cast<unsigned long long>(n));
  scn.kind = ScenarioKind::ErrorSweep;
  scn.theta_list = {theta};
  scn.n_events = n;
  scn.seeds = seeds(50);
  scn.methods = {Method::W};
  const auto rows = run_error_sweep(scn, root);
  const double bound = error_lower_bound(Method::W, 2, theta, n).bound;
  std::vector<double> deltas;
  double min_ratio = INFINITY;
  for (const auto& r : rows) {
    if (r.seed == kSeedEnsemble) continue;
    deltas.push_back(r.delta_rho);
    min_ratio = std::min(min_ratio, r.delta_rho / bound);
  }
  return {median(deltas), min_ratio};
}

Outcome statistical_scaling() {
  std::vector<double> ns{1e3, 1e4, 1e5};
  std::vector<double> by_n;
  double min_ratio = INFINITY;
  for (double n : ns) {
    const auto p = weak_scaling_point(0.2, static_cast<std::uint64_t>(n), 51);
    by_n.push_back(p.median_delta);
    min_ratio = std::min(min_ratio, p.min_ratio_to_bound);
  }
  std::vector<double> thetas{0.05, 0.1, 0.2};
  std::vector<double> by_theta;
  for (double t : thetas) {
    const auto p = weak_scaling_point(t, 10'000, 52);
    by_theta.push_back(p.median_delta);
    min_ratio = std::min(min_ratio, p.min_ratio_to_bound);
  }
  const double slope_n = log_log_slope(ns, by_n);
  const double slope_t = log_log_slope(thetas, by_theta);
  const bool pass = std::abs(slope_n + 0.5) <= 0.1 && std::abs(slope_t + 2.0) <= 0.3 && min_ratio >= 0.9;
  return {pass, fmt("slope vs N = %.3f, slope vs theta = %.3f, min delta/bound = %.3f", slope_n, slope_t, min_ratio)};
}

Outcome strong_advantage() {
  Scenario scn;
  scn.id = "advantage";
  scn.kind = ScenarioKind::ErrorSweep;
  scn.theta_list = {0.1, kHalfPi};
  scn.n_events = 10'000;
  scn.seeds = seeds(50);
  const auto rows = run_error_sweep(scn, 6);
  bool pass = true;
  std::string detail;
  for (Method m : {Method::W, Method::I, Method::II}) {
    std::vector<double> weak;
    std::vector<double> strong;
    for (const auto& r : rows) {
      if (r.method != to_string(m) || r.seed == kSeedEnsemble) continue;
      (r.theta_a < 1.0 ? weak : strong).push_back(r.delta_rho);
    }
    const double mw = median(weak);
    const double ms = median(strong);
    pass = pass && ms < mw;
    detail += fmt("%s %.3g > %.3g; ", to_string(m).c_str(), mw, ms);
  }
  detail.resize(detail.size() - 2);
  return {pass, "median delta rho at 0.1 vs pi/2: " + detail};
}

Outcome k_independence() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rho = random_density(4, 400 + s);
    const CouplingConfig cfg(4, 0.3 + 0.1 * s, 1.2 - 0.05 * s);
    for (int j = 1; j <= 4; ++j) {
      const double first = exact_correlation(rho, j, 1, {PointerObservable::Pi1, PointerObservable::Pi1}, cfg).value;
      for (int k = 2; k <= 4; ++k) {
        const double v = exact_correlation(rho, j, k, {PointerObservable::Pi1, PointerObservable::Pi1}, cfg).value;
        worst = std::max(worst, std::abs(v - first));
      }
    }
  }
  return {worst <= 1e-12, fmt("max spread over k = %.2e, limit 1e-12", worst)};
}

// Exact-probability mode: the 50 seeds pick 50 random input states. The
// inflation is T(biased) - T(unbiased) for the same state and strength.
Outcome bias_robustness() {
  BiasModel bias;
  bias.pointer_rotation_epsilon = 0.02;
  const MeasurementFn biased = biased_measurement(bias);
  bool pass = true;
  std::string detail;
  for (Method m : {Method::I, Method::II}) {
    double med[2];
    int slot = 0;
    for (double theta : {0.05, kHalfPi}) {
      const CouplingConfig cfg(2, theta, theta);
      std::vector<double> inflation;
      for (std::uint64_t s = 1; s <= 50; ++s) {
        const auto rho = random_density(2, s);
        inflation.push_back(distance_or_inf(exact_reconstruction(m, rho, cfg, biased), rho) -
                            distance_or_inf(exact_reconstruction(m, rho, cfg), rho));
      }
      med[slot++] = median(inflation);
    }
    pass = pass && med[0] > med[1];
    detail += fmt("%s %.3g > %.3g; ", to_string(m).c_str(), med[0], med[1]);
  }
  detail.resize(detail.size() - 2);
  return {pass, "median inflation at 0.05 vs pi/2: " + detail};
}

Outcome determinism() {
  const std::string path = std::string(DMRECON_SOURCE_DIR) + "/configs/figures.cfg";
  std::ifstream in(path);
  if (!in) return {false, "cannot open " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  const auto doc = parse_config(buf.str());
  std::ostringstream first;
  std::ostringstream second;
  write_csv(first, run_scenarios(doc.scenarios, doc.root_seed, 0));
  write_csv(second, run_scenarios(doc.scenarios, doc.root_seed, 3));
  const bool pass = first.str() == second.str() && !first.str().empty();
  return {pass, fmt("%zu bytes, %s", first.str().size(), pass ? "identical" : "DIFFERENT")};
}

Outcome qst_reference() {
  double worst2 = 0.0;
  double worst4 = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto rho2 = random_density(2, 9000 + s);
    const auto r2 = qst_linear_inversion(born_probabilities(rho2, qubit_qst_states()), 2);
    worst2 = std::max(worst2, (r2.density().matrix() - rho2.matrix()).cwiseAbs().maxCoeff());
    const auto rho4 = random_density(4, 9100 + s);
    const auto states = default_qst_states(4);
    const auto r4 = qst_linear_inversion(born_probabilities(rho4, states), 4);
    worst4 = std::max(worst4, (r4.density().matrix() - rho4.matrix()).cwiseAbs().maxCoeff());
  }
  return {worst2 <= 1e-12 && worst4 <= 1e-10, fmt("d=2 worst %.2e (limit 1e-12), d=4 worst %.2e (limit 1e-10)", worst2, worst4)};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exactness at arbitrary strength", 30, exactness},
      {2, "oracle equivalence", 60, [] { return oracle("trace correlations"); }},
      {3, "coupling unitary identity", 5, [] { return oracle("coupling unitary"); }},
      {4, "weak-estimator bias", 0, weak_bias},
      {5, "statistical scaling", 300, statistical_scaling},
      {6, "strong-regime advantage", 120, strong_advantage},
      {7, "k-independence", 0, k_independence},
      {8, "bias robustness", 0, bias_robustness},
      {9, "determinism", 0, determinism},
      {10, "QST reference", 0, qst_reference},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2fs", secs);
    if (c.budget_s > 0) {
      timing += fmt(" of %.0fs", c.budget_s);
      if (secs > c.budget_s) {
        out.pass = false;
        out.detail += "; over time budget";
      }
    }
    if (!out.pass) ++failures;
    std::printf("%s  %2d  %-32s %s [%s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
