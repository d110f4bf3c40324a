#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace enttemp {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

namespace linalg {

struct Svd {
  DenseMatrix u;          // rows x k, orthonormal columns
  std::vector<double> s;  // k values, descending
  DenseMatrix v_dag;      // k x cols, orthonormal rows
};

struct Eigh {
  Eigen::VectorXd values;  // ascending
  DenseMatrix vectors;     // column k pairs with values[k]
};

// Singular values below this fraction of the largest are set to exactly zero.
inline constexpr double kSingularFloor = 1e-14;
inline constexpr double kHermitianTol = 1e-12;

/// Thin SVD, k = min(rows, cols). Throws InvalidInput on non-finite entries.
Svd svd(const DenseMatrix& m);

/// Full Hermitian eigendecomposition with ascending eigenvalues.
Eigh eigh(const DenseMatrix& h);

/// exp(scale * h) for Hermitian h, built from its eigendecomposition.
DenseMatrix hermitian_exp(const DenseMatrix& h, double scale);

/// Lowest `count` eigenpairs of a Hermitian matrix. Uses the LAPACK range
/// driver so large exact-diagonalization oracles only pay for what they need.
Eigh eigh_lowest(const DenseMatrix& h, int count);

/// Same for a real symmetric matrix (half the memory of the complex path).
Eigh eigh_lowest(const Eigen::MatrixXd& h, int count);

struct EigenPair {
  double value = 0.0;
  DenseVector vector;
};

/// Lowest eigenpair of a Hermitian operator given as a matvec, by restarted
/// Lanczos from `start` (nonzero) with full reorthogonalization. Stops once
/// ||Hv - ev|| < tol; otherwise returns the last Ritz pair.
EigenPair lanczos_lowest(const std::function<DenseVector(const DenseVector&)>& apply, const DenseVector& start,
                         double tol, std::size_t max_restarts = 200, Eigen::Index krylov_size = 40);

bool is_hermitian(const DenseMatrix& h, double tol = kHermitianTol);

/// Largest |eigenvalue| of a Hermitian matrix.
double operator_norm_hermitian(const DenseMatrix& h);

/// Kronecker product a (x) b with a acting on the more significant index.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace linalg
}  // namespace enttemp
