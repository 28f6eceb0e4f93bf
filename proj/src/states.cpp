#include "dmrecon/states.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <stdexcept>

#include "dmrecon/rng.hpp"

namespace dmrecon {

DensityMatrix::DensityMatrix(ComplexMatrix m, bool check_positivity, double tol)
    : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  if (!is_hermitian(matrix_, tol)) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  if (check_positivity) {
    const HermitianEigenSystem es = eigh(matrix_, tol);
    if (es.eigenvalues(0) < -1e-9) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(es.eigenvalues(0)));
    }
    positivity_checked_ = true;
  }
}

ComplexVector basis_state(int d, int j) {
  if (d < 1 || d > kMaxSystemDim) throw std::invalid_argument("basis_state: dimension out of range");
  if (j < 1 || j > d) {
    throw std::out_of_range("basis_state: index " + std::to_string(j) + " outside 1.." +
                            std::to_string(d));
  }
  ComplexVector v = ComplexVector::Zero(d);
  v(j - 1) = 1.0;
  return v;
}

ComplexVector b0_state(int d) {
  if (d < 1 || d > kMaxSystemDim) throw std::invalid_argument("b0_state: dimension out of range");
  return ComplexVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

DensityMatrix purity_family(double p, const ComplexVector& psi) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("purity_family: p must lie in [0, 1], got " + std::to_string(p));
  }
  if (std::abs(psi.norm() - 1.0) > kDefaultTolerance) {
    throw std::invalid_argument("purity_family: psi is not normalized");
  }
  const auto d = psi.size();
  ComplexMatrix m = p * outer(psi) +
                    ((1.0 - p) / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  return DensityMatrix(std::move(m), true);
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  if (d < 1 || d > kMaxSystemDim) throw std::invalid_argument("random_density: dimension out of range");
  CounterRng rng(derive_seed(seed, {0x72616e646f6dULL}));
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix w = g * g.adjoint();
  w = hermitian_part(w);
  w /= w.trace().real();
  return DensityMatrix(std::move(w), true);
}

double purity(const DensityMatrix& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

ComplexVector named_state(const std::string& label, int d) {
  const double s = 1.0 / std::sqrt(2.0);
  if (label == "D" || label == "b0") return b0_state(d);
  if (label.size() > 1 && label[0] == 'a') {
    int j = 0;
    const auto* first = label.data() + 1;
    const auto* last = label.data() + label.size();
    auto [ptr, ec] = std::from_chars(first, last, j);
    if (ec != std::errc() || ptr != last) {
      throw std::invalid_argument("unknown state label '" + label + "'");
    }
    return basis_state(d, j);
  }
  const bool qubit_label = label == "H" || label == "V" || label == "A" || label == "R" || label == "L";
  if (qubit_label && d != 2) {
    throw std::invalid_argument("state label '" + label + "' is only defined for d = 2");
  }
  ComplexVector v(2);
  if (label == "H") v << 1.0, 0.0;
  else if (label == "V") v << 0.0, 1.0;
  else if (label == "A") v << s, -s;
  else if (label == "R") v << s, Complex(0.0, -s);
  else if (label == "L") v << s, Complex(0.0, s);
  else throw std::invalid_argument("unknown state label '" + label + "'");
  return v;
}

namespace {

double parse_double(std::string_view text, const std::string& ctx) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument(ctx + ": malformed number '" + std::string(text) + "'");
  }
  return v;
}

} // namespace

StateSpec parse_state_spec(const std::string& text) {
  if (text == "mixed") return MixedSpec{};
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("malformed state spec '" + text +
                                "' (expected pure:<label>, mixed, family:p=<p>,psi=<label> or "
                                "random:seed=<int>)");
  }
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "pure") {
    if (body.empty()) throw std::invalid_argument("state spec 'pure:' needs a label");
    return PureSpec{body};
  }
  if (kind == "random") {
    if (body.rfind("seed=", 0) != 0) {
      throw std::invalid_argument("state spec '" + text + "': expected random:seed=<int>");
    }
    const std::string num = body.substr(5);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), seed);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw std::invalid_argument("state spec '" + text + "': malformed seed");
    }
    return RandomSpec{seed};
  }
  if (kind == "family") {
    FamilySpec f;
    bool have_p = false;
    bool have_psi = false;
    std::size_t start = 0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (item.rfind("p=", 0) == 0) {
        f.p = parse_double(std::string_view(item).substr(2), "state spec '" + text + "'");
        have_p = true;
      } else if (item.rfind("psi=", 0) == 0) {
        f.psi = item.substr(4);
        have_psi = !f.psi.empty();
      } else {
        throw std::invalid_argument("state spec '" + text + "': unexpected field '" + item + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!have_p || !have_psi) {
      throw std::invalid_argument("state spec '" + text + "': family needs both p= and psi=");
    }
    if (!(f.p >= 0.0 && f.p <= 1.0)) {
      throw std::invalid_argument("state spec '" + text + "': p must lie in [0, 1]");
    }
    return f;
  }
  throw std::invalid_argument("unknown state spec kind '" + kind + "'");
}

std::string format_state_spec(const StateSpec& spec) {
  struct Visitor {
    std::string operator()(const PureSpec& s) const { return "pure:" + s.label; }
    std::string operator()(const MixedSpec&) const { return "mixed"; }
    std::string operator()(const FamilySpec& s) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", s.p);
      return std::string("family:p=") + buf + ",psi=" + s.psi;
    }
    std::string operator()(const RandomSpec& s) const { return "random:seed=" + std::to_string(s.seed); }
  };
  return std::visit(Visitor{}, spec);
}

DensityMatrix make_state(const StateSpec& spec, int d) {
  struct Visitor {
    int d;
    DensityMatrix operator()(const PureSpec& s) const { return purity_family(1.0, named_state(s.label, d)); }
    DensityMatrix operator()(const MixedSpec&) const {
      return purity_family(0.0, b0_state(d));
    }
    DensityMatrix operator()(const FamilySpec& s) const { return purity_family(s.p, named_state(s.psi, d)); }
    DensityMatrix operator()(const RandomSpec& s) const { return random_density(d, s.seed); }
  };
  return std::visit(Visitor{d}, spec);
}

} // namespace dmrecon
