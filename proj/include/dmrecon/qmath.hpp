#pragma once

#include <complex>
#include <Eigen/Dense>

namespace dmrecon {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-10;

// Tripartite Hilbert spaces are d x 2 x 2 with d <= 16.
inline constexpr int kMaxSystemDim = 16;

struct HermitianEigenSystem {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // orthonormal columns
};

/// Kronecker product, a-index major.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product of three factors, in the order given.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c);

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTolerance);

/// Max absolute entrywise difference <= tol. Shapes must match.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTolerance);

HermitianEigenSystem eigh(const ComplexMatrix& h, double tol = kDefaultTolerance);

/// exp(-i * scale * h) for Hermitian h, through the eigendecomposition of h.
ComplexMatrix matrix_exponential(const ComplexMatrix& h, double scale,
                                 double tol = kDefaultTolerance);

/// (m + m^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Half the trace norm of (a - b). Both inputs must be Hermitian.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b,
                      double tol = kDefaultTolerance);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// Rank-one projector |v><v|.
ComplexMatrix outer(const ComplexVector& v);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// |1><1| = (1 - Z)/2
ComplexMatrix pi1();
} // namespace pauli

} // namespace dmrecon
