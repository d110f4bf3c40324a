#include "enttemp/mps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "enttemp/errors.hpp"

namespace enttemp {

namespace {

// Stack A[s] vertically: row s * Dl + l, column r.
DenseMatrix stack_rows(const SiteTensor& a) {
  const auto dl = a.front().rows();
  const auto dr = a.front().cols();
  DenseMatrix m(dl * static_cast<Eigen::Index>(a.size()), dr);
  for (std::size_t s = 0; s < a.size(); ++s) m.middleRows(static_cast<Eigen::Index>(s) * dl, dl) = a[s];
  return m;
}

// Stack A[s] horizontally: row l, column s * Dr + r.
DenseMatrix stack_cols(const SiteTensor& a) {
  const auto dl = a.front().rows();
  const auto dr = a.front().cols();
  DenseMatrix m(dl, dr * static_cast<Eigen::Index>(a.size()));
  for (std::size_t s = 0; s < a.size(); ++s) m.middleCols(static_cast<Eigen::Index>(s) * dr, dr) = a[s];
  return m;
}

struct ThinQr {
  DenseMatrix q;
  DenseMatrix r;
};

ThinQr thin_qr(const DenseMatrix& m) {
  const auto k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  ThinQr out;
  out.q = qr.householderQ() * DenseMatrix::Identity(m.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

// Number of singular values kept under (chi_max, tol); always at least one.
std::size_t kept_count(const std::vector<double>& s, std::size_t chi_max, double tol) {
  double total = 0.0;
  for (double v : s) total += v * v;
  std::size_t k = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](double v) { return v > 0.0; }));
  k = std::clamp<std::size_t>(k, 1, std::max<std::size_t>(chi_max, 1));
  double discarded = 0.0;
  for (std::size_t i = k; i < s.size(); ++i) discarded += s[i] * s[i];
  while (k > 1 && discarded + s[k - 1] * s[k - 1] <= tol * total) {
    discarded += s[k - 1] * s[k - 1];
    --k;
  }
  return k;
}

std::size_t saturating_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp && v < cap; ++i) v *= base;
  return std::min(v, cap);
}

void require_same_shape(const MatrixProductState& a, const MatrixProductState& b, const char* what) {
  if (a.n_sites() != b.n_sites() || a.phys_dim() != b.phys_dim())
    throw InvalidInput(std::string(what) + ": states have different shapes");
}

// X -> sum_{t,s} op(t, s) A[t]^dag X A[s]; identity when op is empty.
DenseMatrix transfer(const DenseMatrix& x, const SiteTensor& a, const DenseMatrix* op) {
  const auto dr = a.front().cols();
  DenseMatrix out = DenseMatrix::Zero(dr, dr);
  const auto d = static_cast<Eigen::Index>(a.size());
  for (Eigen::Index s = 0; s < d; ++s) {
    const DenseMatrix xs = x * a[static_cast<std::size_t>(s)];
    if (op == nullptr) {
      out.noalias() += a[static_cast<std::size_t>(s)].adjoint() * xs;
      continue;
    }
    for (Eigen::Index t = 0; t < d; ++t) {
      const cplx c = (*op)(t, s);
      if (c == cplx(0.0)) continue;
      out.noalias() += c * (a[static_cast<std::size_t>(t)].adjoint() * xs);
    }
  }
  return out;
}

}  // namespace

MatrixProductState::MatrixProductState(std::vector<SiteTensor> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw InvalidInput("MatrixProductState: no sites");
  const std::size_t d = sites_.front().size();
  if (d < 1) throw InvalidInput("MatrixProductState: empty physical dimension");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto& a = sites_[i];
    if (a.size() != d) throw InvalidInput("MatrixProductState: inconsistent physical dimension");
    for (const auto& m : a) {
      if (m.rows() != a.front().rows() || m.cols() != a.front().cols())
        throw InvalidInput("MatrixProductState: inconsistent bond dimensions within a site");
      if (!m.allFinite()) throw InvalidInput("MatrixProductState: non-finite entries");
    }
    if (i == 0 && a.front().rows() != 1) throw InvalidInput("MatrixProductState: left boundary bond must be 1");
    if (i + 1 == sites_.size() && a.front().cols() != 1)
      throw InvalidInput("MatrixProductState: right boundary bond must be 1");
    if (i > 0 && sites_[i - 1].front().cols() != a.front().rows())
      throw InvalidInput("MatrixProductState: adjacent bond dimensions differ");
  }
  for (std::size_t i = sites_.size() - 1; i > 0; --i) right_orthonormalize(i);
  center_ = 0;
  normalize_center();
}

std::size_t MatrixProductState::bond_dim(std::size_t b) const {
  if (b == 0 || b >= sites_.size()) return 1;
  return static_cast<std::size_t>(sites_[b].front().rows());
}

std::size_t MatrixProductState::max_bond_dim() const {
  std::size_t m = 1;
  for (std::size_t b = 1; b < sites_.size(); ++b) m = std::max(m, bond_dim(b));
  return m;
}

void MatrixProductState::left_orthonormalize(std::size_t i) {
  const auto dl = sites_[i].front().rows();
  ThinQr qr = thin_qr(stack_rows(sites_[i]));
  for (std::size_t s = 0; s < sites_[i].size(); ++s)
    sites_[i][s] = qr.q.middleRows(static_cast<Eigen::Index>(s) * dl, dl);
  for (auto& m : sites_[i + 1]) m = qr.r * m;
}

void MatrixProductState::right_orthonormalize(std::size_t i) {
  const auto dr = sites_[i].front().cols();
  ThinQr qr = thin_qr(stack_cols(sites_[i]).adjoint());
  const DenseMatrix q_dag = qr.q.adjoint();
  for (std::size_t s = 0; s < sites_[i].size(); ++s)
    sites_[i][s] = q_dag.middleCols(static_cast<Eigen::Index>(s) * dr, dr);
  const DenseMatrix r_dag = qr.r.adjoint();
  for (auto& m : sites_[i - 1]) m = m * r_dag;
}

void MatrixProductState::normalize_center() {
  auto& a = sites_[*center_];
  double norm2 = 0.0;
  for (const auto& m : a) norm2 += m.squaredNorm();
  if (!(norm2 > 0.0)) throw std::runtime_error("MatrixProductState: state has zero norm");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& m : a) m *= inv;
}

void MatrixProductState::move_center(std::size_t target) {
  if (target >= sites_.size()) throw InvalidInput("move_center: site out of range");
  if (!center_) {
    for (std::size_t i = 0; i < target; ++i) left_orthonormalize(i);
    for (std::size_t i = sites_.size() - 1; i > target; --i) right_orthonormalize(i);
  } else {
    for (std::size_t c = *center_; c < target; ++c) left_orthonormalize(c);
    for (std::size_t c = *center_; c > target; --c) right_orthonormalize(c);
  }
  center_ = target;
  normalize_center();
}

MatrixProductState::CenterSplit MatrixProductState::split_center_right(std::size_t bond) {
  if (bond < 1 || bond >= sites_.size()) throw InvalidInput("bond index out of range");
  move_center(bond - 1);
  linalg::Svd f = linalg::svd(stack_rows(sites_[bond - 1]));
  return {std::move(f.u), std::move(f.s), std::move(f.v_dag)};
}

void MatrixProductState::absorb_split(std::size_t bond, const CenterSplit& split, const std::vector<double>& weights) {
  std::size_t k = 0;
  double norm2 = 0.0;
  for (double w : weights) {
    if (w > 0.0) ++k;
    norm2 += w * w;
  }
  if (k == 0 || !(norm2 > 0.0)) throw std::runtime_error("reweight produced a zero Schmidt spectrum");
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) keep.push_back(static_cast<Eigen::Index>(i));

  auto& left = sites_[bond - 1];
  auto& right = sites_[bond];
  const auto dl = left.front().rows();
  const auto kk = static_cast<Eigen::Index>(keep.size());
  DenseMatrix u(split.u.rows(), kk);
  DenseMatrix sv(kk, split.v_dag.cols());
  const double inv = 1.0 / std::sqrt(norm2);
  for (Eigen::Index j = 0; j < kk; ++j) {
    u.col(j) = split.u.col(keep[static_cast<std::size_t>(j)]);
    sv.row(j) = (weights[static_cast<std::size_t>(keep[static_cast<std::size_t>(j)])] * inv) *
                split.v_dag.row(keep[static_cast<std::size_t>(j)]);
  }
  for (std::size_t s = 0; s < left.size(); ++s) left[s] = u.middleRows(static_cast<Eigen::Index>(s) * dl, dl);
  for (auto& m : right) m = sv * m;
  center_ = bond;
}

void MatrixProductState::reweight_bond(
    std::size_t bond, const std::function<std::vector<double>(const std::vector<double>&)>& reweight) {
  CenterSplit split = split_center_right(bond);
  const std::vector<double> w = reweight(split.s);
  if (w.size() != split.s.size()) throw InvalidInput("reweight_bond: weight count changed");
  for (double v : w)
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("reweight_bond: weights must be finite and nonnegative");
  absorb_split(bond, split, w);
}

std::vector<double> MatrixProductState::bond_singular_values(std::size_t bond) {
  CenterSplit split = split_center_right(bond);
  double norm2 = 0.0;
  for (double v : split.s) norm2 += v * v;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : split.s) v *= inv;
  return split.s;
}

double MatrixProductState::apply_two_site(std::size_t b, const DenseMatrix& gate, std::size_t chi_max, double tol,
                                          bool center_right) {
  if (b + 1 >= sites_.size()) throw InvalidInput("apply_two_site: bond out of range");
  const auto d = static_cast<Eigen::Index>(phys_dim());
  if (gate.rows() != d * d || gate.cols() != d * d) throw InvalidInput("apply_two_site: gate has wrong shape");
  move_center(b);
  const auto& a1 = sites_[b];
  const auto& a2 = sites_[b + 1];
  const auto dl = a1.front().rows();
  const auto dr = a2.front().cols();

  std::vector<DenseMatrix> theta(static_cast<std::size_t>(d * d));
  for (Eigen::Index s1 = 0; s1 < d; ++s1)
    for (Eigen::Index s2 = 0; s2 < d; ++s2)
      theta[static_cast<std::size_t>(s1 * d + s2)] = a1[static_cast<std::size_t>(s1)] * a2[static_cast<std::size_t>(s2)];

  DenseMatrix m = DenseMatrix::Zero(d * dl, d * dr);
  for (Eigen::Index t = 0; t < d * d; ++t) {
    auto block = m.block((t / d) * dl, (t % d) * dr, dl, dr);
    for (Eigen::Index s = 0; s < d * d; ++s) {
      const cplx g = gate(t, s);
      if (g != cplx(0.0)) block += g * theta[static_cast<std::size_t>(s)];
    }
  }

  linalg::Svd f = linalg::svd(m);
  const std::size_t k = kept_count(f.s, chi_max, tol);
  double total = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < f.s.size(); ++i) {
    total += f.s[i] * f.s[i];
    if (i < k) kept += f.s[i] * f.s[i];
  }
  if (!(kept > 0.0)) throw std::runtime_error("apply_two_site: gate annihilated the state");
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), kk) / std::sqrt(kept);

  DenseMatrix left = f.u.leftCols(kk);
  DenseMatrix right = f.v_dag.topRows(kk);
  if (center_right)
    right = s.cast<cplx>().asDiagonal() * right;
  else
    left = left * s.cast<cplx>().asDiagonal();

  auto& out1 = sites_[b];
  auto& out2 = sites_[b + 1];
  for (Eigen::Index t = 0; t < d; ++t) {
    out1[static_cast<std::size_t>(t)] = left.middleRows(t * dl, dl);
    out2[static_cast<std::size_t>(t)] = right.middleCols(t * dr, dr);
  }
  center_ = center_right ? b + 1 : b;
  return total > 0.0 ? (total - kept) / total : 0.0;
}

MatrixProductState random_mps(std::size_t n_sites, std::size_t phys_dim, std::size_t chi, std::uint64_t seed) {
  if (n_sites < 2) throw InvalidInput("random_mps: need at least 2 sites");
  if (chi == 0) throw InvalidInput("random_mps: chi must be >= 1");
  if (phys_dim < 2) throw InvalidInput("random_mps: physical dimension must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> dims(n_sites + 1, 1);
  for (std::size_t b = 1; b < n_sites; ++b)
    dims[b] = std::min({chi, saturating_pow(phys_dim, b, chi), saturating_pow(phys_dim, n_sites - b, chi)});

  std::vector<SiteTensor> sites(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) {
    sites[i].resize(phys_dim);
    for (auto& m : sites[i]) {
      m.resize(static_cast<Eigen::Index>(dims[i]), static_cast<Eigen::Index>(dims[i + 1]));
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          m(r, c) = cplx(re, im);
        }
    }
  }
  return MatrixProductState(std::move(sites));
}

MatrixProductState product_state(const std::vector<std::size_t>& digits, std::size_t phys_dim) {
  if (digits.empty()) throw InvalidInput("product_state: no sites");
  std::vector<SiteTensor> sites(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= phys_dim) throw InvalidInput("product_state: local state out of range");
    sites[i].assign(phys_dim, DenseMatrix::Zero(1, 1));
    sites[i][digits[i]](0, 0) = 1.0;
  }
  return MatrixProductState(std::move(sites));
}

MatrixProductState from_dense(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim) {
  if (n_sites == 0 || phys_dim < 2) throw InvalidInput("from_dense: bad shape");
  if (n_sites > 16) throw ResourceLimit("from_dense: too many sites for a dense vector");
  const auto d = static_cast<Eigen::Index>(phys_dim);
  Eigen::Index rest = 1;
  for (std::size_t i = 0; i < n_sites; ++i) rest *= d;
  if (psi.size() != rest) throw InvalidInput("from_dense: vector length does not match d^n");
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidInput("from_dense: zero vector");

  std::vector<SiteTensor> sites(n_sites);
  DenseMatrix c = (psi / norm).transpose();  // 1 x d^n
  for (std::size_t i = 0; i + 1 < n_sites; ++i) {
    const auto dl = c.rows();
    rest /= d;
    DenseMatrix m(d * dl, rest);
    for (Eigen::Index s = 0; s < d; ++s) m.middleRows(s * dl, dl) = c.middleCols(s * rest, rest);
    linalg::Svd f = linalg::svd(m);
    const std::size_t k = kept_count(f.s, f.s.size(), 0.0);
    const auto kk = static_cast<Eigen::Index>(k);
    sites[i].resize(phys_dim);
    for (Eigen::Index s = 0; s < d; ++s) sites[i][static_cast<std::size_t>(s)] = f.u.block(s * dl, 0, dl, kk);
    c = Eigen::Map<const Eigen::VectorXd>(f.s.data(), kk).cast<cplx>().asDiagonal() * f.v_dag.topRows(kk);
  }
  sites.back().resize(phys_dim);
  for (Eigen::Index s = 0; s < d; ++s) sites.back()[static_cast<std::size_t>(s)] = c.col(s);
  return MatrixProductState(std::move(sites));
}

SchmidtSpectrum schmidt(const MatrixProductState& state, std::size_t bond) {
  if (bond < 1 || bond >= state.n_sites()) throw InvalidInput("schmidt: bond out of range");
  MatrixProductState work = state;
  std::vector<double> s = work.bond_singular_values(bond);
  while (s.size() > 1 && s.back() == 0.0) s.pop_back();
  return SchmidtSpectrum::normalized(std::move(s));
}

MatrixProductState truncate(const MatrixProductState& state, std::size_t chi_max, double tol) {
  if (chi_max == 0) throw InvalidInput("truncate: chi_max must be >= 1");
  MatrixProductState out = state;
  out.move_center(0);
  for (std::size_t bond = 1; bond < out.n_sites(); ++bond) {
    out.reweight_bond(bond, [&](const std::vector<double>& s) {
      std::vector<double> w = s;
      std::fill(w.begin() + static_cast<std::ptrdiff_t>(kept_count(s, chi_max, tol)), w.end(), 0.0);
      return w;
    });
  }
  return out;
}

double energy(const MatrixProductState& state, const LocalHamiltonian& h) {
  if (state.n_sites() != h.n_sites() || state.phys_dim() != h.phys_dim())
    throw InvalidInput("energy: state and Hamiltonian shapes differ");
  const std::size_t n = state.n_sites();
  const auto& a = state.sites();

  std::vector<DenseMatrix> left(n + 1);
  std::vector<DenseMatrix> right(n + 1);
  left[0] = DenseMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) left[i + 1] = transfer(left[i], a[i], nullptr);
  right[n] = DenseMatrix::Identity(1, 1);
  for (std::size_t i = n; i-- > 0;) {
    const auto dl = a[i].front().rows();
    DenseMatrix r = DenseMatrix::Zero(dl, dl);
    for (const auto& m : a[i]) r.noalias() += m * right[i + 1] * m.adjoint();
    right[i] = std::move(r);
  }
  const double norm2 = right[0](0, 0).real();

  const auto d = static_cast<Eigen::Index>(h.phys_dim());
  DenseMatrix pauli_z = DenseMatrix::Zero(2, 2);
  pauli_z(0, 0) = 1.0;
  pauli_z(1, 1) = -1.0;

  cplx total = 0.0;
  for (const auto& term : h.terms()) {
    // Operator-Schmidt split of two-site terms into sums of one-site products.
    std::vector<std::pair<DenseMatrix, DenseMatrix>> products;
    if (term.sites.size() == 1) {
      products.emplace_back(term.op, DenseMatrix());
    } else {
      DenseMatrix reordered(d * d, d * d);
      for (Eigen::Index t1 = 0; t1 < d; ++t1)
        for (Eigen::Index t2 = 0; t2 < d; ++t2)
          for (Eigen::Index s1 = 0; s1 < d; ++s1)
            for (Eigen::Index s2 = 0; s2 < d; ++s2)
              reordered(t1 * d + s1, t2 * d + s2) = term.op(t1 * d + t2, s1 * d + s2);
      linalg::Svd f = linalg::svd(reordered);
      for (std::size_t k = 0; k < f.s.size(); ++k) {
        if (f.s[k] == 0.0) break;
        DenseMatrix o1(d, d);
        DenseMatrix o2(d, d);
        for (Eigen::Index t = 0; t < d; ++t)
          for (Eigen::Index s = 0; s < d; ++s) {
            o1(t, s) = f.s[k] * f.u(t * d + s, static_cast<Eigen::Index>(k));
            o2(t, s) = f.v_dag(static_cast<Eigen::Index>(k), t * d + s);
          }
        products.emplace_back(std::move(o1), std::move(o2));
      }
    }
    const std::size_t lo = term.first_site();
    const std::size_t hi = term.last_site();
    for (const auto& [o1, o2] : products) {
      DenseMatrix x = left[lo];
      for (std::size_t i = lo; i <= hi; ++i) {
        const DenseMatrix* op = nullptr;
        if (i == term.sites[0])
          op = &o1;
        else if (term.sites.size() == 2 && i == term.sites[1])
          op = &o2;
        else if (std::find(term.parity_string.begin(), term.parity_string.end(), i) != term.parity_string.end())
          op = &pauli_z;
        x = transfer(x, a[i], op);
      }
      total += (x * right[hi + 1]).trace();
    }
  }
  return total.real() / norm2;
}

cplx overlap(const MatrixProductState& a, const MatrixProductState& b) {
  require_same_shape(a, b, "overlap");
  DenseMatrix x = DenseMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < a.n_sites(); ++i) {
    const auto& sa = a.site(i);
    const auto& sb = b.site(i);
    DenseMatrix next = DenseMatrix::Zero(sa.front().cols(), sb.front().cols());
    for (std::size_t s = 0; s < sa.size(); ++s) next.noalias() += sa[s].adjoint() * x * sb[s];
    x = std::move(next);
  }
  return x(0, 0);
}

DenseVector to_dense(const MatrixProductState& state) {
  if (state.n_sites() > 16) throw ResourceLimit("to_dense: more than 16 sites");
  const auto d = static_cast<Eigen::Index>(state.phys_dim());
  DenseMatrix v = DenseMatrix::Identity(1, 1);  // rows: basis prefix, cols: right bond
  for (const auto& a : state.sites()) {
    DenseMatrix next(v.rows() * d, a.front().cols());
    for (Eigen::Index p = 0; p < v.rows(); ++p)
      for (Eigen::Index s = 0; s < d; ++s) next.row(p * d + s) = v.row(p) * a[static_cast<std::size_t>(s)];
    v = std::move(next);
  }
  return v.col(0);
}

}  // namespace enttemp
