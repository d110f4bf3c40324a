#include "enttemp/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"
#include "enttemp/spectrum.hpp"

namespace enttemp::oracles {

KrausChannel::KrausChannel(std::vector<DenseMatrix> kraus_ops, double tol) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw InvalidInput("KrausChannel: no Kraus operators");
  const Eigen::Index d = ops_.front().cols();
  DenseMatrix sum = DenseMatrix::Zero(d, d);
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) throw InvalidInput("KrausChannel: Kraus operators must be square and equal size");
    if (!k.allFinite()) throw InvalidInput("KrausChannel: non-finite Kraus operator");
    sum += k.adjoint() * k;
  }
  if ((sum - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw InvalidInput("KrausChannel: not trace preserving (sum K^dag K != 1)");
}

DenseMatrix KrausChannel::apply(const DenseMatrix& rho) const {
  DenseMatrix out = DenseMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

DenseMatrix KrausChannel::apply_adjoint(const DenseMatrix& op) const {
  DenseMatrix out = DenseMatrix::Zero(op.rows(), op.cols());
  for (const auto& k : ops_) out += k.adjoint() * op * k;
  return out;
}

KrausChannel KrausChannel::identity(Eigen::Index dim) { return KrausChannel({DenseMatrix::Identity(dim, dim)}); }

KrausChannel KrausChannel::depolarizing_qubit() {
  return KrausChannel({0.5 * pauli::identity(), 0.5 * pauli::x(), 0.5 * pauli::y(), 0.5 * pauli::z()});
}

KrausChannel KrausChannel::replacement(const DenseVector& target) {
  const DenseVector t = target / target.norm();
  std::vector<DenseMatrix> ops;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    DenseMatrix k = DenseMatrix::Zero(t.size(), t.size());
    k.col(i) = t;
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

Method1Solution method1_ansatz(std::size_t n, std::size_t m) {
  if (n == 0 || m > n) throw InvalidInput("method1_ansatz: need 0 <= m <= n, n >= 1");
  const double target = static_cast<double>(n - m) / static_cast<double>(n);
  // h2 decreases from 1 to 0 on [1/2, 1].
  double lo = 0.5;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy_bits(mid) > target ? lo : hi) = mid;
  }
  double p = 0.5 * (lo + hi);
  if (m == 0) p = 0.5;
  if (m == n) p = 1.0;
  Method1Solution out;
  out.alpha = std::sqrt(p);
  out.beta = std::sqrt(1.0 - p);
  out.residual = std::abs(binary_entropy_bits(p) - target);
  const double sum = out.alpha + out.beta;
  out.delta_e = static_cast<double>(n) * (1.0 - 0.5 * sum * sum);
  return out;
}

DenseVector pair_product_state(const LocalHamiltonian& h, cplx alpha, cplx beta) {
  if (!h.pair_layout()) throw InvalidInput("pair_product_state: model has no pair layout");
  if (h.phys_dim() != 2) throw InvalidInput("pair_product_state: qubit model required");
  const std::size_t n = h.n_sites();
  if (n > dense::kMaxVectorSites) throw ResourceLimit("pair_product_state: too many sites");
  DenseVector psi = DenseVector::Zero(Eigen::Index{1} << n);
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    cplx amp = 1.0;
    for (const auto& [a, b] : *h.pair_layout()) {
      const bool bit_a = (idx >> (n - 1 - a)) & 1;
      const bool bit_b = (idx >> (n - 1 - b)) & 1;
      if (bit_a != bit_b) {
        amp = 0.0;
        break;
      }
      amp *= bit_a ? beta : alpha;
    }
    psi(idx) = amp;
  }
  return psi / psi.norm();
}

namespace {

struct LagrangeParts {
  DenseVector psi;
  DenseVector h_psi;
  DenseVector log_psi;  // (1 (x) ln rho_B) psi
  bool regularized = false;
};

LagrangeParts lagrange_parts(const DenseVector& state, const LocalHamiltonian& h) {
  const std::size_t n = h.n_sites();
  const std::size_t d = h.phys_dim();
  const std::size_t cut = h.ab_cut();
  if (cut < 1) throw InvalidInput("lagrange_residual: model has no bipartition");
  if (n > dense::kMaxMatrixSites) throw ResourceLimit("lagrange_residual: at most 12 sites");
  LagrangeParts parts;
  parts.psi = state / state.norm();
  parts.h_psi = dense::apply(h, parts.psi);

  const linalg::Eigh rho = linalg::eigh(dense::reduced_density_right(parts.psi, n, d, cut));
  Eigen::VectorXd logs(rho.values.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    double v = rho.values[i];
    if (v < kLogFloor) {
      parts.regularized = true;
      v = kLogFloor;
    }
    logs[i] = std::log(v);
  }
  const DenseMatrix log_rho = rho.vectors * logs.cast<cplx>().asDiagonal() * rho.vectors.adjoint();
  const DenseMatrix m = dense::bipartite_matrix(parts.psi, n, d, cut);
  const DenseMatrix applied = (m * log_rho.transpose()).transpose();  // column-major of the transpose = row-major
  parts.log_psi = Eigen::Map<const DenseVector>(applied.data(), applied.size());
  return parts;
}

}  // namespace

LagrangeFit lagrange_residual(const DenseVector& psi, const LocalHamiltonian& h, double mu1, double mu2) {
  const LagrangeParts p = lagrange_parts(psi, h);
  LagrangeFit fit;
  fit.mu1 = mu1;
  fit.mu2 = mu2;
  fit.regularized = p.regularized;
  fit.residual = (p.h_psi - mu1 * p.log_psi - (mu1 - mu2) * p.psi).norm();
  return fit;
}

LagrangeFit lagrange_residual_best_fit(const DenseVector& psi, const LocalHamiltonian& h) {
  const LagrangeParts p = lagrange_parts(psi, h);
  // residual = h_psi - mu1 (log_psi + psi) + mu2 psi, linear in real (mu1, mu2).
  const DenseVector u = p.log_psi + p.psi;
  const Eigen::Index dim = p.psi.size();
  Eigen::MatrixXd a(2 * dim, 2);
  Eigen::VectorXd b(2 * dim);
  a.col(0) << -u.real(), -u.imag();
  a.col(1) << p.psi.real(), p.psi.imag();
  b << -p.h_psi.real(), -p.h_psi.imag();
  const Eigen::Vector2d mu = a.completeOrthogonalDecomposition().solve(b);
  LagrangeFit fit;
  fit.mu1 = mu[0];
  fit.mu2 = mu[1];
  fit.regularized = p.regularized;
  fit.residual = (p.h_psi - mu[0] * u + mu[1] * p.psi).norm();
  return fit;
}

double method2_cost(std::size_t m) { return 1.0 - std::ldexp(1.0, -static_cast<int>(m)); }

double method2_overlap_bound(std::size_t m) { return std::pow(2.0, -0.5 * static_cast<double>(m)); }

double method2_optimized_overlap(std::size_t n, std::size_t m, std::uint64_t seed, std::size_t iterations) {
  if (m > n) throw InvalidInput("method2_optimized_overlap: m > n");
  if (n > 6) throw ResourceLimit("method2_optimized_overlap: at most 6 pairs");
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index rank = Eigen::Index{1} << (n - m);
  const DenseMatrix omega = DenseMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix psi(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      psi(r, c) = cplx(re, im);
    }

  auto project = [rank](const DenseMatrix& m) {
    const linalg::Svd f = linalg::svd(m);
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), static_cast<Eigen::Index>(f.s.size()));
    s.tail(s.size() - rank).setZero();
    DenseMatrix out = f.u * s.cast<cplx>().asDiagonal() * f.v_dag;
    return DenseMatrix(out / out.norm());
  };

  psi = project(psi);
  double best = 0.0;
  double previous = -1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const cplx c = (omega.adjoint() * psi).trace();  // <Omega|psi>
    best = std::max(best, std::abs(c));
    if (std::abs(std::abs(c) - previous) < 1e-15) break;
    previous = std::abs(c);
    psi = project(psi + omega * c);
  }
  return std::max(best, std::abs((omega.adjoint() * psi).trace()));
}

double channel_energy_cost(const KrausChannel& channel, const DenseMatrix& h) {
  if (h.rows() != channel.dim() || h.cols() != channel.dim())
    throw InvalidInput("channel_energy_cost: Hamiltonian and channel dimensions differ");
  if (!linalg::is_hermitian(h)) throw InvalidInput("channel_energy_cost: Hamiltonian is not Hermitian");
  return linalg::operator_norm_hermitian(h - channel.apply_adjoint(h));
}

double naive_protocol_bound(const LocalHamiltonian& h) { return 2.0 * interaction_norm(h); }

double fermion_ground_energy(const FermionChainSpec& spec) {
  spec.validate();
  const double n = static_cast<double>(spec.n_sites);
  return (n - 1.0 / std::tan(std::numbers::pi / n)) / spec.lattice_spacing;
}

std::vector<double> fermion_mode_filling_spectrum(const FermionChainSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  if (n > 20) throw ResourceLimit("fermion_mode_filling_spectrum: too many modes");
  const double a = spec.lattice_spacing;
  std::vector<double> modes(n);
  for (std::size_t k = 0; k < n; ++k)
    modes[k] = -std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)) / a;
  std::vector<double> levels(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < levels.size(); ++mask) {
    double e = static_cast<double>(n) / a;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1u) e += modes[k];
    levels[mask] = e;
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

ProductBoundSample fermion_product_bound(const FermionChainSpec& spec, std::size_t samples, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  if (n > dense::kMaxMatrixSites) throw ResourceLimit("fermion_product_bound: at most 12 sites");
  const LocalHamiltonian h = staggered_fermion_spin(spec);
  const std::size_t half = n / 2;
  const auto it = std::find_if(h.terms().begin(), h.terms().end(), [&](const HamiltonianTerm& t) {
    return t.sites.size() == 2 && t.sites[0] == half - 1 && t.sites[1] == half && t.parity_string.empty();
  });
  const HamiltonianTerm& hop = *it;
  const double constant = 1.0 / spec.lattice_spacing;

  const Eigen::Index dim_half = Eigen::Index{1} << half;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  auto random_definite_parity = [&] {
    const int parity = coin(rng);
    DenseVector v = DenseVector::Zero(dim_half);
    for (Eigen::Index i = 0; i < dim_half; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      if ((std::popcount(static_cast<std::uint64_t>(i)) & 1) == parity) v(i) = cplx(re, im);
    }
    return DenseVector(v / v.norm());
  };

  ProductBoundSample out;
  out.bound = constant;
  out.minimum = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const DenseVector alice = random_definite_parity();
    const DenseVector bob = random_definite_parity();
    DenseVector psi(dim_half * dim_half);
    for (Eigen::Index i = 0; i < dim_half; ++i) psi.segment(i * dim_half, dim_half) = alice(i) * bob;
    const double value = psi.dot(dense::apply_term(hop, n, 2, psi)).real() + constant;
    out.minimum = std::min(out.minimum, value);
  }
  return out;
}

void QftScalingParams::validate() const {
  if (dimension < 1) throw InvalidInput("qft scaling: dimension must be >= 1");
  if (dimension == 1 && !(central_charge > 0.0)) throw InvalidInput("qft scaling: central charge must be positive");
  if (!(prefactor > 0.0)) throw InvalidInput("qft scaling: prefactor must be positive");
}

std::vector<ScalingPoint> qft_scaling_curve(const QftScalingParams& params, const std::vector<double>& delta_s) {
  params.validate();
  std::vector<ScalingPoint> out;
  out.reserve(delta_s.size());
  const double d = static_cast<double>(params.dimension);
  for (double s : delta_s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("qft scaling: delta_s must be finite and >= 0");
    const double e = params.dimension == 1
                         ? params.prefactor * std::exp(6.0 * std::numbers::ln2 / params.central_charge * s)
                         : params.prefactor * std::pow(s, d / (d - 1.0));
    out.push_back({s, e, s > 0.0 ? e / s : std::numeric_limits<double>::quiet_NaN()});
  }
  return out;
}

}  // namespace enttemp::oracles
