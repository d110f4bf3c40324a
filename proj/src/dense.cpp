#include "enttemp/dense.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "enttemp/errors.hpp"

namespace enttemp::dense {

namespace {

Eigen::Index ipow(std::size_t base, std::size_t exp) {
  Eigen::Index v = 1;
  for (std::size_t i = 0; i < exp; ++i) v *= static_cast<Eigen::Index>(base);
  return v;
}

// Calls emit(row, col, value) for every nonzero matrix element of `term` on the full chain.
template <typename Emit>
void for_each_element(const HamiltonianTerm& term, std::size_t n, std::size_t d, Emit&& emit) {
  const Eigen::Index dim = ipow(d, n);
  const auto di = static_cast<Eigen::Index>(d);
  std::uint64_t mask = 0;
  for (auto s : term.parity_string) mask |= std::uint64_t{1} << (n - 1 - s);

  if (term.sites.size() == 1) {
    const Eigen::Index w = ipow(d, n - 1 - term.sites[0]);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const Eigen::Index s = (col / w) % di;
      const Eigen::Index base = col - s * w;
      const double sign = (std::popcount(static_cast<std::uint64_t>(col) & mask) & 1) ? -1.0 : 1.0;
      for (Eigen::Index t = 0; t < di; ++t) {
        const cplx v = term.op(t, s);
        if (v != cplx(0.0)) emit(base + t * w, col, sign * v);
      }
    }
    return;
  }

  const Eigen::Index wp = ipow(d, n - 1 - term.sites[0]);
  const Eigen::Index wq = ipow(d, n - 1 - term.sites[1]);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index sp = (col / wp) % di;
    const Eigen::Index sq = (col / wq) % di;
    const Eigen::Index base = col - sp * wp - sq * wq;
    const double sign = (std::popcount(static_cast<std::uint64_t>(col) & mask) & 1) ? -1.0 : 1.0;
    for (Eigen::Index t1 = 0; t1 < di; ++t1)
      for (Eigen::Index t2 = 0; t2 < di; ++t2) {
        const cplx v = term.op(t1 * di + t2, sp * di + sq);
        if (v != cplx(0.0)) emit(base + t1 * wp + t2 * wq, col, sign * v);
      }
  }
}

void require_length(const DenseVector& psi, std::size_t n, std::size_t d) {
  if (n > kMaxVectorSites) throw ResourceLimit("dense: too many sites for a state vector");
  if (psi.size() != ipow(d, n)) throw InvalidInput("dense: vector length does not match d^n");
}

}  // namespace

DenseVector apply_term(const HamiltonianTerm& term, std::size_t n_sites, std::size_t phys_dim, const DenseVector& psi) {
  require_length(psi, n_sites, phys_dim);
  DenseVector out = DenseVector::Zero(psi.size());
  for_each_element(term, n_sites, phys_dim,
                   [&](Eigen::Index row, Eigen::Index col, cplx v) { out(row) += v * psi(col); });
  return out;
}

DenseVector apply(const LocalHamiltonian& h, const DenseVector& psi) {
  require_length(psi, h.n_sites(), h.phys_dim());
  DenseVector out = DenseVector::Zero(psi.size());
  for (const auto& term : h.terms())
    for_each_element(term, h.n_sites(), h.phys_dim(),
                     [&](Eigen::Index row, Eigen::Index col, cplx v) { out(row) += v * psi(col); });
  return out;
}

double expectation(const LocalHamiltonian& h, const DenseVector& psi) {
  return psi.dot(apply(h, psi)).real() / psi.squaredNorm();
}

DenseMatrix matrix(const LocalHamiltonian& h) {
  if (h.n_sites() > kMaxMatrixSites) throw ResourceLimit("dense::matrix: too many sites");
  const Eigen::Index dim = ipow(h.phys_dim(), h.n_sites());
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (const auto& term : h.terms())
    for_each_element(term, h.n_sites(), h.phys_dim(),
                     [&](Eigen::Index row, Eigen::Index col, cplx v) { m(row, col) += v; });
  return m;
}

GroundState ground_state(const LocalHamiltonian& h) {
  if (h.n_sites() > kMaxMatrixSites) throw ResourceLimit("dense::ground_state: too many sites");
  linalg::Eigh e;
  if (h.real_valued()) {
    const Eigen::Index dim = ipow(h.phys_dim(), h.n_sites());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& term : h.terms())
      for_each_element(term, h.n_sites(), h.phys_dim(),
                       [&](Eigen::Index row, Eigen::Index col, cplx v) { m(row, col) += v.real(); });
    e = linalg::eigh_lowest(m, 1);
  } else {
    e = linalg::eigh_lowest(matrix(h), 1);
  }
  return {e.values[0], e.vectors.col(0)};
}

GroundState lanczos_ground(const LocalHamiltonian& h, const DenseVector& start, double tol, std::size_t max_restarts) {
  require_length(start, h.n_sites(), h.phys_dim());
  if (!(start.norm() > 0.0)) throw InvalidInput("dense::lanczos_ground: zero start vector");
  const linalg::EigenPair p = linalg::lanczos_lowest(
      [&h](const DenseVector& x) { return dense::apply(h, x); }, start, tol, max_restarts);
  return {p.value, p.vector};
}

DenseMatrix bipartite_matrix(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond) {
  require_length(psi, n_sites, phys_dim);
  if (bond > n_sites) throw InvalidInput("dense: bond out of range");
  const Eigen::Index left = ipow(phys_dim, bond);
  const Eigen::Index right = ipow(phys_dim, n_sites - bond);
  // psi(l * right + r) is column-major (right x left).
  return Eigen::Map<const DenseMatrix>(psi.data(), right, left).transpose();
}

SchmidtSpectrum schmidt(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond) {
  if (bond < 1 || bond >= n_sites) throw InvalidInput("dense::schmidt: bond out of range");
  linalg::Svd f = linalg::svd(bipartite_matrix(psi, n_sites, phys_dim, bond));
  std::vector<double> s = f.s;
  while (s.size() > 1 && s.back() == 0.0) s.pop_back();
  return SchmidtSpectrum::normalized(std::move(s));
}

DenseMatrix reduced_density_right(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond) {
  const DenseMatrix m = bipartite_matrix(psi, n_sites, phys_dim, bond);
  return m.transpose() * m.conjugate() / psi.squaredNorm();
}

}  // namespace enttemp::dense
