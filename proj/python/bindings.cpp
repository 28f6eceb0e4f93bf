#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dmrecon/correlations.hpp"
#include "dmrecon/experiments.hpp"
#include "dmrecon/io.hpp"
#include "dmrecon/metrics.hpp"
#include "dmrecon/reconstruct.hpp"
#include "dmrecon/validate.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dmrecon;

namespace {

py::dict result_to_dict(const ReconstructionResult& r) {
  py::dict out;
  out["method"] = to_string(r.method);
  out["raw"] = r.raw;
  if (r.finalized) out["finalized"] = r.finalized->matrix();
  else out["finalized"] = py::none();
  out["finalize_error"] = r.finalize_error;
  out["element_errors"] = r.element_errors;
  out["delta_rho"] = mean_square_error(r.element_errors);
  out["n_events"] = r.n_events;
  return out;
}

py::dict record_to_dict(const CorrelationRecord& r) {
  return py::dict("j"_a = r.j, "k"_a = r.k, "obs_a"_a = to_string(r.obs.a), "obs_b"_a = to_string(r.obs.b),
                  "value"_a = r.value, "std_error"_a = r.std_error, "n_events"_a = r.n_events,
                  "source"_a = to_string(r.source));
}

ObservablePair make_pair(const std::string& a, const std::string& b) {
  return ObservablePair{parse_observable(a), parse_observable(b)};
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Direct density-matrix reconstruction with two qubit pointers at arbitrary coupling strength";

  m.def("state", [](const std::string& spec, int d) { return make_state(parse_state_spec(spec), d).matrix(); },
        "Density matrix for a state spec (pure:<label>, mixed, family:p=..,psi=.., random:seed=..)", "spec"_a,
        "d"_a = 2);
  m.def("random_density", [](int d, std::uint64_t seed) { return random_density(d, seed).matrix(); }, "d"_a,
        "seed"_a);
  m.def("purity", [](const ComplexMatrix& rho) { return purity(DensityMatrix(rho)); }, "rho"_a);
  m.def("trace_distance", [](const ComplexMatrix& a, const ComplexMatrix& b) { return trace_distance(a, b); }, "a"_a,
        "b"_a);
  m.def("coupling_unitary", &coupling_unitary, "proj"_a, "theta"_a);
  m.def("matrix_exponential", [](const ComplexMatrix& h, double scale) { return matrix_exponential(h, scale); },
        "Returns exp(-i scale h) for Hermitian h", "h"_a, "scale"_a);
  m.def("build_coupled_evolution",
        [](int j, int d, double theta_a, double theta_b) {
          return build_coupled_evolution(j, CouplingConfig(d, theta_a, theta_b));
        },
        "j"_a, "d"_a, "theta_a"_a, "theta_b"_a);

  m.def("exact_correlation",
        [](const ComplexMatrix& rho, int j, int k, const std::string& a, const std::string& b, double theta_a,
           double theta_b) {
          const DensityMatrix r(rho);
          return record_to_dict(exact_correlation(r, j, k, make_pair(a, b), CouplingConfig(r.dim(), theta_a, theta_b)));
        },
        "rho"_a, "j"_a, "k"_a, "obs_a"_a, "obs_b"_a, "theta_a"_a, "theta_b"_a);
  m.def("analytic_correlation",
        [](const ComplexMatrix& rho, int j, int k, const std::string& a, const std::string& b, double theta_a,
           double theta_b) {
          const DensityMatrix r(rho);
          return record_to_dict(
              analytic_correlation(r, j, k, make_pair(a, b), CouplingConfig(r.dim(), theta_a, theta_b)));
        },
        "rho"_a, "j"_a, "k"_a, "obs_a"_a, "obs_b"_a, "theta_a"_a, "theta_b"_a);
  m.def("sample_correlation",
        [](const ComplexMatrix& rho, int j, const std::string& a, const std::string& b, double theta_a, double theta_b,
           std::uint64_t n, std::uint64_t seed) {
          const DensityMatrix r(rho);
          py::list out;
          for (const auto& rec :
               sample_correlation(r, j, make_pair(a, b), CouplingConfig(r.dim(), theta_a, theta_b), n, seed)) {
            out.append(record_to_dict(rec));
          }
          return out;
        },
        "rho"_a, "j"_a, "obs_a"_a, "obs_b"_a, "theta_a"_a, "theta_b"_a, "n"_a, "seed"_a);

  m.def("reconstruct",
        [](const std::string& method, const ComplexMatrix& rho, double theta_a, std::optional<double> theta_b,
           std::uint64_t n_events, std::uint64_t seed) {
          const DensityMatrix r(rho);
          const Method mth = parse_method(method);
          const CouplingConfig cfg(r.dim(), theta_a, theta_b.value_or(theta_a));
          const auto& pairs = required_pairs(mth);
          const CorrelationSet set = n_events == 0 ? exact_correlation_set(r, cfg, pairs)
                                                   : sampled_correlation_set(r, cfg, pairs, n_events, seed);
          return result_to_dict(reconstruct(mth, set, cfg));
        },
        "Simulate the protocol on rho and reconstruct it; n_events = 0 uses exact correlations", "method"_a, "rho"_a,
        "theta_a"_a, "theta_b"_a = py::none(), "n_events"_a = 0, "seed"_a = 0);

  m.def("qst_linear_inversion",
        [](const std::vector<ComplexVector>& states, const std::vector<double>& probabilities, int d) {
          if (states.size() != probabilities.size()) throw std::invalid_argument("states and probabilities differ in length");
          std::vector<ProjectorMeasurement> meas;
          for (std::size_t i = 0; i < states.size(); ++i) meas.push_back({states[i], probabilities[i], 0.0});
          return result_to_dict(qst_linear_inversion(meas, d));
        },
        "states"_a, "probabilities"_a, "d"_a);
  m.def("default_qst_states", &default_qst_states, "d"_a);
  m.def("finalize", [](const ComplexMatrix& raw) { return finalize(raw).matrix(); }, "raw"_a);

  m.def("error_lower_bound",
        [](const std::string& method, int d, double theta, std::uint64_t n) {
          const ErrorBound b = error_lower_bound(parse_method(method), d, theta, n);
          return py::dict("alpha"_a = b.alpha, "bound"_a = b.bound);
        },
        "method"_a, "d"_a, "theta"_a, "n"_a);
  m.def("mean_square_error", &mean_square_error, "element_errors"_a);

  m.def("run_config",
        [](const std::string& text, std::optional<std::uint64_t> root_seed, unsigned threads) {
          ConfigDocument doc = parse_config(text);
          if (root_seed) doc.root_seed = *root_seed;
          std::ostringstream out;
          write_csv(out, run_scenarios(doc.scenarios, doc.root_seed, threads));
          return out.str();
        },
        "Run every scenario in a config text and return the CSV", "text"_a, "root_seed"_a = py::none(),
        "threads"_a = 0);
  m.def("write_matrix",
        [](const ComplexMatrix& mat, const std::string& format) {
          return write_matrix(mat, format == "machine" ? MatrixFormat::Machine : MatrixFormat::Text);
        },
        "m"_a, "format"_a = "text");
  m.def("read_matrix", &read_matrix, "text"_a);

  m.def("validate", [](std::uint64_t seed) {
    py::list out;
    for (const auto& c : run_oracle_checks(seed)) {
      out.append(py::dict("name"_a = c.name, "worst"_a = c.worst, "tolerance"_a = c.tolerance, "passed"_a = c.passed()));
    }
    return out;
  }, "seed"_a = 2018);
}
