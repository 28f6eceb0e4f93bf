#include "dmrecon/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmrecon {

CouplingConfig::CouplingConfig(int dim, double theta_a, double theta_b)
    : dim_(dim), theta_a_(theta_a), theta_b_(theta_b) {
  if (dim < 1 || dim > kMaxSystemDim) {
    throw std::invalid_argument("CouplingConfig: dimension must lie in 1.." + std::to_string(kMaxSystemDim));
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  for (double t : {theta_a, theta_b}) {
    if (!(t >= 0.0 && t <= kHalfPi + 1e-12)) {
      throw std::invalid_argument("CouplingConfig: theta must lie in [0, pi/2], got " + std::to_string(t));
    }
  }
}

double CouplingConfig::t_a() const { return std::tan(theta_a_ / 2.0); }
double CouplingConfig::t_b() const { return std::tan(theta_b_ / 2.0); }

double CouplingConfig::n_ab() const {
  const double denom = 4.0 * std::sin(theta_a_) * std::sin(theta_b_);
  if (theta_a_ <= 0.0 || theta_b_ <= 0.0 || denom == 0.0) {
    throw std::domain_error("CouplingConfig: N_AB = d/(4 sin(theta_a) sin(theta_b)) is singular at theta = 0");
  }
  return static_cast<double>(dim_) / denom;
}

std::string to_string(PointerObservable obs) {
  switch (obs) {
    case PointerObservable::X: return "X";
    case PointerObservable::Y: return "Y";
    case PointerObservable::Z: return "Z";
    case PointerObservable::Pi1: return "Pi1";
  }
  return "?";
}

PointerObservable parse_observable(const std::string& text) {
  if (text == "X") return PointerObservable::X;
  if (text == "Y") return PointerObservable::Y;
  if (text == "Z") return PointerObservable::Z;
  if (text == "Pi1" || text == "P") return PointerObservable::Pi1;
  throw std::invalid_argument("unknown pointer observable '" + text + "' (expected X, Y, Z or Pi1)");
}

PointerSetting PointerSetting::make(PointerObservable obs) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector plus(2), minus(2);
  switch (obs) {
    case PointerObservable::X:
      plus << s, s;
      minus << s, -s;
      break;
    case PointerObservable::Y:
      plus << s, Complex(0.0, s);
      minus << s, Complex(0.0, -s);
      break;
    case PointerObservable::Z:
      plus << 1.0, 0.0;
      minus << 0.0, 1.0;
      break;
    case PointerObservable::Pi1: {
      ComplexVector one(2), zero(2);
      one << 0.0, 1.0;
      zero << 1.0, 0.0;
      return PointerSetting{obs, {{1.0, outer(one)}, {0.0, outer(zero)}}};
    }
  }
  return PointerSetting{obs, {{1.0, outer(plus)}, {-1.0, outer(minus)}}};
}

ComplexMatrix embed_system_pointer(const ComplexMatrix& op, int d, PointerLeg leg) {
  if (op.rows() != 2 * d || op.cols() != 2 * d) {
    throw std::invalid_argument("embed_system_pointer: operator must be 2d x 2d");
  }
  if (leg == PointerLeg::A) return tensor(op, pauli::identity());
  // Index layout: system-pointer (s, p) -> 2s + p; tripartite (s, a, b) -> 4s + 2a + b.
  ComplexMatrix out = ComplexMatrix::Zero(4 * d, 4 * d);
  for (int s1 = 0; s1 < d; ++s1)
    for (int p1 = 0; p1 < 2; ++p1)
      for (int s2 = 0; s2 < d; ++s2)
        for (int p2 = 0; p2 < 2; ++p2) {
          const Complex v = op(2 * s1 + p1, 2 * s2 + p2);
          if (v == Complex(0.0, 0.0)) continue;
          for (int a = 0; a < 2; ++a) out(4 * s1 + 2 * a + p1, 4 * s2 + 2 * a + p2) = v;
        }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& sys, const ComplexMatrix& ptr_a, const ComplexMatrix& ptr_b) {
  return tensor(sys, ptr_a, ptr_b);
}

ComplexMatrix coupling_unitary(const ComplexMatrix& proj, double theta) {
  if (proj.rows() != proj.cols() || proj.rows() == 0) {
    throw std::invalid_argument("coupling_unitary: projector must be square");
  }
  if (!is_hermitian(proj) || !approx_equal(proj * proj, proj)) {
    throw std::invalid_argument("coupling_unitary: input is not an orthogonal projector");
  }
  const auto d = proj.rows();
  ComplexMatrix rot(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // exp(-i theta Y) = cos(theta) 1 - i sin(theta) Y
  rot << c, -s, s, c;
  return tensor(ComplexMatrix::Identity(d, d) - proj, pauli::identity()) + tensor(proj, rot);
}

namespace {

void check_index(int j, int d, const char* what) {
  if (j < 1 || j > d) {
    throw std::out_of_range(std::string(what) + ": index " + std::to_string(j) + " outside 1.." +
                            std::to_string(d));
  }
}

ComplexMatrix pointer_a_unitary(int j, const CouplingConfig& cfg) {
  return embed_system_pointer(coupling_unitary(outer(basis_state(cfg.dim(), j)), cfg.theta_a()), cfg.dim(),
                              PointerLeg::A);
}

ComplexMatrix pointer_b_unitary(const CouplingConfig& cfg) {
  return embed_system_pointer(coupling_unitary(outer(b0_state(cfg.dim())), cfg.theta_b()), cfg.dim(),
                              PointerLeg::B);
}

} // namespace

ComplexMatrix build_coupled_evolution(int j, const CouplingConfig& cfg) {
  check_index(j, cfg.dim(), "build_coupled_evolution");
  return pointer_b_unitary(cfg) * pointer_a_unitary(j, cfg);
}

ComplexMatrix build_reversed_evolution(int j, const CouplingConfig& cfg) {
  check_index(j, cfg.dim(), "build_reversed_evolution");
  return pointer_a_unitary(j, cfg) * pointer_b_unitary(cfg);
}

TripartiteState evolve_with(const DensityMatrix& rho, int j, const ComplexMatrix& unitary) {
  const int d = rho.dim();
  if (unitary.rows() != 4 * d || unitary.cols() != 4 * d) {
    throw std::invalid_argument("evolve: unitary is " + std::to_string(unitary.rows()) + "x" +
                                std::to_string(unitary.cols()) + ", expected " + std::to_string(4 * d));
  }
  const ComplexMatrix ground = pauli::identity() - pauli::pi1(); // |0><0|
  const ComplexMatrix sigma_in = embed(rho.matrix(), ground, ground);
  return TripartiteState{d, j, unitary * sigma_in * unitary.adjoint()};
}

TripartiteState evolve(const DensityMatrix& rho, int j, const CouplingConfig& cfg) {
  if (rho.dim() != cfg.dim()) {
    throw std::invalid_argument("evolve: state dimension " + std::to_string(rho.dim()) +
                                " does not match coupling dimension " + std::to_string(cfg.dim()));
  }
  return evolve_with(rho, j, build_coupled_evolution(j, cfg));
}

OutcomeTable::OutcomeTable(int j, int d, SettingPair settings, std::vector<double> probs)
    : j_(j), d_(d), settings_(std::move(settings)), probs_(std::move(probs)) {
  if (probs_.size() != outcomes_a() * outcomes_b() * static_cast<std::size_t>(d_)) {
    throw std::invalid_argument("OutcomeTable: probability table has the wrong size");
  }
}

double OutcomeTable::total() const {
  double t = 0.0;
  for (double p : probs_) t += p;
  return t;
}

OutcomeTable outcome_probabilities(const TripartiteState& sigma_out, const SettingPair& settings) {
  const int d = sigma_out.d;
  const std::size_t na = settings.a.projectors.size();
  const std::size_t nb = settings.b.projectors.size();
  std::vector<double> probs(na * nb * static_cast<std::size_t>(d), 0.0);
  for (std::size_t alpha = 0; alpha < na; ++alpha) {
    for (std::size_t beta = 0; beta < nb; ++beta) {
      const ComplexMatrix pointer_op =
          tensor(settings.a.projectors[alpha].projector, settings.b.projectors[beta].projector);
      for (int k = 0; k < d; ++k) {
        // Pi_{a_k} selects the k-th 4x4 diagonal block of sigma_out.
        const ComplexMatrix block = sigma_out.sigma.block(4 * k, 4 * k, 4, 4);
        double p = (pointer_op * block).trace().real();
        if (p < -1e-9) {
          throw std::runtime_error("outcome_probabilities: probability " + std::to_string(p) +
                                   " is negative beyond rounding");
        }
        if (p < 0.0 && p >= -1e-12) p = 0.0;
        probs[(alpha * nb + beta) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] = p;
      }
    }
  }
  return OutcomeTable(sigma_out.j, d, settings, std::move(probs));
}

} // namespace dmrecon
