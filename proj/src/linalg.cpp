#include "enttemp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "enttemp/errors.hpp"

namespace enttemp::linalg {

namespace {

void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_hermitian(const DenseMatrix& h, const char* what) {
  if (h.rows() != h.cols()) throw InvalidInput(std::string(what) + ": matrix is not square");
  require_finite(h, what);
  if (!is_hermitian(h)) throw InvalidInput(std::string(what) + ": matrix is not Hermitian");
}

}  // namespace

bool is_hermitian(const DenseMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  if (h.size() == 0) return true;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Svd svd(const DenseMatrix& m) {
  require_finite(m, "svd");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  Svd out;
  if (k == 0) return out;

  DenseMatrix work = m;
  DenseMatrix u(rows, k);
  DenseMatrix vt(k, cols);
  std::vector<double> s(static_cast<std::size_t>(k));
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, work.data(), rows, s.data(),
                                   u.data(), rows, vt.data(), k);
  if (info != 0) {
    // Divide-and-conquer occasionally fails to converge; QR iteration is slower but robust.
    work = m;
    std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(k - 1, 1)));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', rows, cols, work.data(), rows, s.data(),
                          u.data(), rows, vt.data(), k, superb.data());
    if (info != 0) throw std::runtime_error("svd: LAPACK failed to converge");
  }

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  out.u.resize(rows, k);
  out.v_dag.resize(k, cols);
  out.s.resize(s.size());
  const double floor = s.empty() ? 0.0 : kSingularFloor * s[order.front()];
  for (lapack_int j = 0; j < k; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.u.col(j) = u.col(static_cast<Eigen::Index>(src));
    out.v_dag.row(j) = vt.row(static_cast<Eigen::Index>(src));
    const double value = s[src];
    out.s[static_cast<std::size_t>(j)] = value < floor ? 0.0 : value;
  }
  return out;
}

Eigh eigh(const DenseMatrix& h) {
  require_hermitian(h, "eigh");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Eigh out;
  out.vectors = 0.5 * (h + h.adjoint());
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data());
  if (info != 0) throw std::runtime_error("eigh: LAPACK failed to converge");
  return out;
}

DenseMatrix hermitian_exp(const DenseMatrix& h, double scale) {
  const Eigh e = eigh(h);
  const Eigen::VectorXcd factors = (scale * e.values.array()).exp().cast<cplx>();
  return e.vectors * factors.asDiagonal() * e.vectors.adjoint();
}

Eigh eigh_lowest(const DenseMatrix& h, int count) {
  require_hermitian(h, "eigh_lowest");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  count = std::clamp(count, 1, static_cast<int>(n));
  DenseMatrix work = 0.5 * (h + h.adjoint());
  Eigen::VectorXd w(n);
  DenseMatrix z(n, count);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, 1, count, 0.0,
                     &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != count) throw std::runtime_error("eigh_lowest: LAPACK failed to converge");
  return {w.head(count), z};
}

Eigh eigh_lowest(const Eigen::MatrixXd& h, int count) {
  if (h.rows() != h.cols()) throw InvalidInput("eigh_lowest: matrix is not square");
  if (!h.allFinite()) throw InvalidInput("eigh_lowest: non-finite entries");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  count = std::clamp(count, 1, static_cast<int>(n));
  Eigen::MatrixXd work = h;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, count);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0,
                                         1, count, 0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != count) throw std::runtime_error("eigh_lowest: LAPACK failed to converge");
  return {w.head(count), z.cast<cplx>()};
}

EigenPair lanczos_lowest(const std::function<DenseVector(const DenseVector&)>& apply, const DenseVector& start,
                         double tol, std::size_t max_restarts, Eigen::Index krylov_size) {
  if (!(start.norm() > 0.0)) throw InvalidInput("lanczos_lowest: zero start vector");
  const Eigen::Index dim = start.size();
  const Eigen::Index krylov = std::min<Eigen::Index>(dim, std::max<Eigen::Index>(krylov_size, 2));
  DenseVector v = start / start.norm();
  EigenPair best{apply(v).dot(v).real(), v};
  for (std::size_t restart = 0; restart < max_restarts; ++restart) {
    // Full reorthogonalization keeps the small basis exact.
    DenseMatrix basis(dim, krylov);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(krylov, krylov);
    basis.col(0) = v;
    Eigen::Index size = krylov;
    for (Eigen::Index j = 0; j < krylov; ++j) {
      DenseVector w = apply(DenseVector(basis.col(j)));
      for (int pass = 0; pass < 2; ++pass) {
        const DenseVector c = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * c;
        if (pass == 0) t(j, j) = c(j).real();
      }
      const double beta = w.norm();
      if (j + 1 == krylov) break;
      if (beta < 1e-13) {
        size = j + 1;
        break;
      }
      t(j, j + 1) = t(j + 1, j) = beta;
      basis.col(j + 1) = w / beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t.topLeftCorner(size, size));
    v = basis.leftCols(size) * small.eigenvectors().col(0).cast<cplx>();
    v /= v.norm();
    const DenseVector hv = apply(v);
    const double e = v.dot(hv).real();
    best = {e, v};
    if ((hv - e * v).norm() < tol) return best;
  }
  return best;
}

double operator_norm_hermitian(const DenseMatrix& h) {
  const Eigh e = eigh(h);
  if (e.values.size() == 0) return 0.0;
  return std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace enttemp::linalg
