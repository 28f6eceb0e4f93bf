#include "dmrecon/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmrecon {

using Obs = PointerObservable;

namespace {

constexpr ObservablePair kXX{Obs::X, Obs::X};
constexpr ObservablePair kXY{Obs::X, Obs::Y};
constexpr ObservablePair kYX{Obs::Y, Obs::X};
constexpr ObservablePair kYY{Obs::Y, Obs::Y};
constexpr ObservablePair kPX{Obs::Pi1, Obs::X};
constexpr ObservablePair kXP{Obs::X, Obs::Pi1};
constexpr ObservablePair kYP{Obs::Y, Obs::Pi1};
constexpr ObservablePair kPP{Obs::Pi1, Obs::Pi1};

std::uint64_t max_events(const CorrelationSet& correls, int d, std::span<const ObservablePair> pairs) {
  std::uint64_t n = 0;
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k)
      for (const auto& p : pairs)
        if (const auto* r = correls.find(j, k, p)) n = std::max(n, r->n_events);
  return n;
}

void check_dims(const CorrelationSet& correls, const CouplingConfig& cfg) {
  if (correls.dim() != cfg.dim()) {
    throw std::invalid_argument("correlation set dimension " + std::to_string(correls.dim()) +
                                " does not match coupling dimension " + std::to_string(cfg.dim()));
  }
}

ReconstructionResult assemble(Method method, ComplexMatrix raw, RealMatrix errors, const CouplingConfig& cfg,
                              std::uint64_t n) {
  ReconstructionResult r;
  r.method = method;
  r.element_errors = std::move(errors);
  r.config = cfg;
  r.n_events = n;
  try {
    r.finalized = finalize(raw);
  } catch (const std::domain_error& e) {
    r.finalize_error = e.what();
  }
  r.raw = std::move(raw);
  return r;
}

double sq(double x) { return x * x; }

} // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::W: return "W";
    case Method::I: return "I";
    case Method::II: return "II";
    case Method::QST: return "QST";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "W") return Method::W;
  if (text == "I") return Method::I;
  if (text == "II") return Method::II;
  if (text == "QST") return Method::QST;
  throw std::invalid_argument("unknown method '" + text + "' (expected W, I, II or QST)");
}

const std::vector<ObservablePair>& required_pairs(Method m) {
  static const std::vector<ObservablePair> weak = {kXX, kYY, kYX, kXY};
  static const std::vector<ObservablePair> exact_i = {kXX, kYY, kYX, kXY, kXP, kPX, kPP, kYP};
  static const std::vector<ObservablePair> exact_ii = {kPP, kYY, kXY};
  static const std::vector<ObservablePair> none;
  switch (m) {
    case Method::W: return weak;
    case Method::I: return exact_i;
    case Method::II: return exact_ii;
    case Method::QST: return none;
  }
  return none;
}

std::vector<ObservablePair> pairs_for(std::span<const Method> methods) {
  std::vector<ObservablePair> out;
  for (const auto& p : required_pairs(Method::I)) {
    for (Method m : methods) {
      const auto& req = required_pairs(m);
      if (std::find(req.begin(), req.end(), p) != req.end()) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

const DensityMatrix& ReconstructionResult::density() const {
  if (!finalized) throw std::runtime_error("reconstruction could not be finalized: " + finalize_error);
  return *finalized;
}

DensityMatrix finalize(const ComplexMatrix& raw) {
  ComplexMatrix h = hermitian_part(raw);
  const double tr = h.trace().real();
  if (!(std::abs(tr) > 1e-9)) {
    throw std::domain_error("finalize: trace of the Hermitian part is " + std::to_string(tr) +
                            " (catastrophic sampling noise?)");
  }
  h /= tr;
  return DensityMatrix(std::move(h));
}

ReconstructionResult reconstruct_weak(const CorrelationSet& correls, const CouplingConfig& cfg) {
  check_dims(correls, cfg);
  const int d = cfg.dim();
  const double n = cfg.n_ab();
  ComplexMatrix raw(d, d);
  RealMatrix err(d, d);
  for (int j = 1; j <= d; ++j) {
    for (int k = 1; k <= d; ++k) {
      const auto& xx = correls.at(j, k, kXX);
      const auto& yy = correls.at(j, k, kYY);
      const auto& yx = correls.at(j, k, kYX);
      const auto& xy = correls.at(j, k, kXY);
      raw(j - 1, k - 1) = Complex(n * (xx.value - yy.value), n * (yx.value + xy.value));
      const double var_re = sq(n) * (sq(xx.std_error) + sq(yy.std_error));
      const double var_im = sq(n) * (sq(yx.std_error) + sq(xy.std_error));
      err(j - 1, k - 1) = std::sqrt(var_re + var_im);
    }
  }
  return assemble(Method::W, std::move(raw), std::move(err), cfg, max_events(correls, d, required_pairs(Method::W)));
}

ReconstructionResult reconstruct_exact_I(const CorrelationSet& correls, const CouplingConfig& cfg) {
  check_dims(correls, cfg);
  const int d = cfg.dim();
  const double n = cfg.n_ab();
  const double ta = cfg.t_a();
  const double tb = cfg.t_b();
  ComplexMatrix raw(d, d);
  RealMatrix err(d, d);
  for (int j = 1; j <= d; ++j) {
    for (int k = 1; k <= d; ++k) {
      const auto& xx = correls.at(j, k, kXX);
      const auto& yy = correls.at(j, k, kYY);
      const auto& yx = correls.at(j, k, kYX);
      const auto& xy = correls.at(j, k, kXY);
      const auto& xp = correls.at(j, k, kXP);
      const auto& px = correls.at(j, k, kPX);
      const auto& pp = correls.at(j, k, kPP);
      const auto& yp = correls.at(j, k, kYP);
      const double re = n * (xx.value - yy.value) +
                        2.0 * n * (tb * xp.value + ta * px.value + 2.0 * ta * tb * pp.value);
      const double im = n * (yx.value + xy.value) + 2.0 * n * tb * yp.value;
      raw(j - 1, k - 1) = Complex(re, im);
      const double var_re = sq(n) * (sq(xx.std_error) + sq(yy.std_error)) +
                            4.0 * sq(n) *
                                (sq(tb * xp.std_error) + sq(ta * px.std_error) + sq(2.0 * ta * tb * pp.std_error));
      const double var_im = sq(n) * (sq(yx.std_error) + sq(xy.std_error)) + 4.0 * sq(n * tb * yp.std_error);
      err(j - 1, k - 1) = std::sqrt(var_re + var_im);
    }
  }
  return assemble(Method::I, std::move(raw), std::move(err), cfg, max_events(correls, d, required_pairs(Method::I)));
}

ReconstructionResult reconstruct_exact_II(const CorrelationSet& correls, const CouplingConfig& cfg) {
  check_dims(correls, cfg);
  const int d = cfg.dim();
  const double n = cfg.n_ab();
  ComplexMatrix raw(d, d);
  RealMatrix err(d, d);
  for (int j = 1; j <= d; ++j) {
    // <Pi1_A Pi1_B>_{j,k} does not depend on k; average every available k.
    bool all_k = true;
    for (int k = 1; k <= d; ++k) all_k = all_k && correls.find(j, k, kPP) != nullptr;
    double diag = 0.0;
    double diag_err = 0.0;
    if (all_k) {
      double total = 0.0;
      std::uint64_t events = 0;
      for (int k = 1; k <= d; ++k) {
        const auto& r = correls.at(j, k, kPP);
        total += r.value;
        events = std::max(events, r.n_events);
      }
      diag = total / d;
      if (events > 0) {
        // Summed over k the counts form a single binomial proportion.
        const double se_total = std::sqrt(std::max(0.0, total * (1.0 - total)) / static_cast<double>(events));
        diag_err = se_total / d;
      }
    } else {
      const auto& r = correls.at(j, j, kPP);
      diag = r.value;
      diag_err = r.std_error;
    }
    raw(j - 1, j - 1) = Complex(16.0 * n * n * diag, 0.0);
    err(j - 1, j - 1) = 16.0 * n * n * diag_err;

    for (int k = 1; k <= d; ++k) {
      if (k == j) continue;
      const auto& yy = correls.at(j, k, kYY);
      const auto& xy = correls.at(j, k, kXY);
      raw(j - 1, k - 1) = Complex(-2.0 * n * yy.value, 2.0 * n * xy.value);
      err(j - 1, k - 1) = 2.0 * n * std::hypot(yy.std_error, xy.std_error);
    }
  }
  return assemble(Method::II, std::move(raw), std::move(err), cfg,
                  max_events(correls, d, required_pairs(Method::II)));
}

ReconstructionResult reconstruct(Method method, const CorrelationSet& correls, const CouplingConfig& cfg) {
  switch (method) {
    case Method::W: return reconstruct_weak(correls, cfg);
    case Method::I: return reconstruct_exact_I(correls, cfg);
    case Method::II: return reconstruct_exact_II(correls, cfg);
    case Method::QST: break;
  }
  throw std::invalid_argument("reconstruct: QST is not a correlation-based method");
}

std::vector<ComplexVector> default_qst_states(int d) {
  std::vector<ComplexVector> out;
  for (int j = 1; j <= d; ++j) out.push_back(basis_state(d, j));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k) {
      out.push_back(s * (basis_state(d, j) + basis_state(d, k)));
      out.push_back(s * (basis_state(d, j) + Complex(0.0, 1.0) * basis_state(d, k)));
    }
  }
  return out;
}

std::vector<ComplexVector> qubit_qst_states() {
  return {named_state("H", 2), named_state("V", 2), named_state("D", 2), named_state("R", 2)};
}

ComplexMatrix qst_qubit_closed_form(double p_h, double p_v, double p_d, double p_r) {
  const Complex off(p_d - 0.5, p_r - 0.5);
  ComplexMatrix m(2, 2);
  m << p_h, off, std::conj(off), p_v;
  return m;
}

ReconstructionResult qst_linear_inversion(std::span<const ProjectorMeasurement> measurements, int d) {
  if (d < 1 || d > kMaxSystemDim) throw std::invalid_argument("qst_linear_inversion: dimension out of range");
  for (const auto& m : measurements) {
    if (m.state.size() != d) throw std::invalid_argument("qst_linear_inversion: projector dimension mismatch");
  }
  const auto nd2 = static_cast<Eigen::Index>(d) * d;
  const auto nm = static_cast<Eigen::Index>(measurements.size());
  if (nm < nd2) {
    throw std::invalid_argument("qst_linear_inversion: " + std::to_string(nm) + " projectors cannot determine a " +
                                std::to_string(d) + "x" + std::to_string(d) + " state (need " +
                                std::to_string(nd2) + ")");
  }

  ReconstructionResult r;
  r.method = Method::QST;
  r.element_errors = RealMatrix::Zero(d, d);

  const auto qubit = qubit_qst_states();
  bool closed_form = d == 2 && nm == 4;
  for (Eigen::Index m = 0; closed_form && m < 4; ++m) {
    closed_form = approx_equal(outer(qubit[m]), outer(measurements[m].state), 1e-12);
  }

  if (closed_form) {
    r.raw = qst_qubit_closed_form(measurements[0].probability, measurements[1].probability,
                                  measurements[2].probability, measurements[3].probability);
    r.element_errors(0, 0) = measurements[0].std_error;
    r.element_errors(1, 1) = measurements[1].std_error;
    r.element_errors(0, 1) = r.element_errors(1, 0) = std::hypot(measurements[2].std_error, measurements[3].std_error);
  } else {
    // Tr[P rho] = sum_{a,b} P_ba rho_ab with P_ba = psi_b conj(psi_a); unknown index a*d + b.
    ComplexMatrix a(nm, nd2);
    ComplexVector p(nm);
    for (Eigen::Index m = 0; m < nm; ++m) {
      const ComplexVector& psi = measurements[m].state;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) a(m, i * d + k) = psi(k) * std::conj(psi(i));
      p(m) = measurements[m].probability;
    }
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < nd2) {
      throw std::invalid_argument("qst_linear_inversion: projector set is not informationally complete (rank " +
                                  std::to_string(qr.rank()) + " < " + std::to_string(nd2) + ")");
    }
    const ComplexMatrix pinv = qr.solve(ComplexMatrix::Identity(nm, nm));
    const ComplexVector x = pinv * p;
    r.raw.resize(d, d);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        r.raw(i, k) = x(i * d + k);
        double var = 0.0;
        for (Eigen::Index m = 0; m < nm; ++m) var += std::norm(pinv(i * d + k, m)) * sq(measurements[m].std_error);
        r.element_errors(i, k) = std::sqrt(var);
      }
    }
  }

  try {
    r.finalized = finalize(r.raw);
  } catch (const std::domain_error& e) {
    r.finalize_error = e.what();
  }
  return r;
}

std::vector<ProjectorMeasurement> born_probabilities(const DensityMatrix& rho, std::span<const ComplexVector> states) {
  std::vector<ProjectorMeasurement> out;
  out.reserve(states.size());
  for (const auto& psi : states) {
    if (psi.size() != rho.dim()) throw std::invalid_argument("born_probabilities: dimension mismatch");
    const double p = psi.dot(rho.matrix() * psi).real(); // Eigen dot conjugates the first argument
    out.push_back({psi, p, 0.0});
  }
  return out;
}

std::vector<ProjectorMeasurement> sample_projectors(const DensityMatrix& rho, std::span<const ComplexVector> states,
                                                    std::uint64_t n, std::uint64_t rng_seed) {
  if (n < 1) throw std::invalid_argument("sample_projectors: need at least one event");
  auto exact = born_probabilities(rho, states);
  const CounterRng root(rng_seed);
  const double nn = static_cast<double>(n);
  for (std::size_t m = 0; m < exact.size(); ++m) {
    const double p = std::clamp(exact[m].probability, 0.0, 1.0);
    const double probs[2] = {p, 1.0 - p};
    CounterRng rng = root.split(m);
    const double f = static_cast<double>(sample_counts(probs, n, rng)[0]) / nn;
    exact[m].probability = f;
    exact[m].std_error = std::sqrt(f * (1.0 - f) / nn);
  }
  return exact;
}

} // namespace dmrecon
