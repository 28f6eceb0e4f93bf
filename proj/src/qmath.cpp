#include "dmrecon/qmath.hpp"

#include <stdexcept>
#include <string>

namespace dmrecon {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": expected a nonempty square matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

} // namespace

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument("tensor: empty operand");
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  return tensor(tensor(a, b), c);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return approx_equal(m.adjoint() * m, id, tol);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

HermitianEigenSystem eigh(const ComplexMatrix& h, double tol) {
  require_square(h, "eigh");
  if (!is_hermitian(h, tol)) {
    throw std::invalid_argument("eigh: input is not Hermitian within tolerance");
  }
  // Symmetrize so rounding in the input does not leak into the solver.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_exponential(const ComplexMatrix& h, double scale, double tol) {
  require_square(h, "matrix_exponential");
  if (!is_hermitian(h, tol)) {
    throw std::invalid_argument("matrix_exponential: generator is not Hermitian within " +
                                std::to_string(tol));
  }
  const HermitianEigenSystem es = eigh(h, tol);
  ComplexVector phases(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -scale * es.eigenvalues(i)));
  }
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  require_square(m, "hermitian_part");
  return 0.5 * (m + m.adjoint());
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch (" + std::to_string(a.rows()) +
                                " vs " + std::to_string(b.rows()) + ")");
  }
  if (!is_hermitian(a, tol) || !is_hermitian(b, tol)) {
    throw std::invalid_argument("trace_distance: inputs must be Hermitian");
  }
  const HermitianEigenSystem es = eigh(a - b, tol);
  return 0.5 * es.eigenvalues.cwiseAbs().sum();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix pi1() {
  ComplexMatrix m(2, 2);
  m << 0.0, 0.0, 0.0, 1.0;
  return m;
}

} // namespace pauli

} // namespace dmrecon
