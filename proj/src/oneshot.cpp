#include "enttemp/oneshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include <Eigen/SparseCore>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"

namespace enttemp::oneshot {

bool ExtractionBudget::feasible() const {
  return m < 64 && (std::uint64_t{1} << m) <= initial_rank;
}

bool majorizes(const SchmidtSpectrum& target, const SchmidtSpectrum& source, double tol) {
  const auto t = target.weights();
  const auto s = source.weights();
  double pt = 0.0;
  double ps = 0.0;
  for (std::size_t k = 0; k < std::max(t.size(), s.size()); ++k) {
    if (k < t.size()) pt += t[k];
    if (k < s.size()) ps += s[k];
    if (pt + tol < ps) return false;
  }
  return true;
}

std::size_t feasible_final_rank(std::size_t initial_rank, std::size_t m) {
  if (!ExtractionBudget{m, initial_rank}.feasible())
    throw Infeasible("cannot extract " + std::to_string(m) + " EPR pairs from Schmidt rank " +
                     std::to_string(initial_rank));
  return initial_rank >> m;
}

double toy_cost(std::size_t n, std::size_t m) {
  if (m > n) throw Infeasible("toy_cost: cannot extract more pairs than the model holds");
  return 0.5 * static_cast<double>(m);
}

namespace {

DenseMatrix orthonormal_columns(const DenseMatrix& m) {
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  return qr.householderQ() * DenseMatrix::Identity(m.rows(), m.cols());
}

DenseMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

struct AlsOutcome {
  double energy = std::numeric_limits<double>::infinity();
  DenseMatrix amplitudes;
  bool converged = false;
};

using SparseH = Eigen::SparseMatrix<cplx>;

// Lowest eigenpair of a rank-restricted subproblem, matrix-free. Vectors are
// column-major (rows x chi) blocks; `embed` maps one to the full state's
// transpose (dim_b x dim_a) and `project` maps H psi back.
template <class Embed, class Project>
linalg::EigenPair solve_factor(const SparseH& h, Eigen::Index dim_a, Eigen::Index dim_b, const DenseVector& start,
                               double tol, Embed embed, Project project) {
  auto apply = [&](const DenseVector& v) {
    const DenseMatrix psi_t = embed(v);
    const DenseVector hpsi = h * Eigen::Map<const DenseVector>(psi_t.data(), psi_t.size());
    const DenseMatrix out = project(Eigen::Map<const DenseMatrix>(hpsi.data(), dim_b, dim_a));
    return DenseVector(Eigen::Map<const DenseVector>(out.data(), out.size()));
  };
  return linalg::lanczos_lowest(apply, start, tol);
}

// Alternating minimization of <psi|H|psi> with psi = X Y^T, rank chi. Each
// half-step solves exactly for one factor with the other held as an isometry,
// warm-started from the current state; the first start and a small fixed
// jitter come from `rng` so a start is never orthogonal to a lower eigenspace.
AlsOutcome run_als(const SparseH& h, double tol_residual, Eigen::Index dim_a, Eigen::Index dim_b, Eigen::Index chi,
                   DenseMatrix y, std::mt19937_64& rng, const RankOptions& opts) {
  AlsOutcome out;
  double previous = std::numeric_limits<double>::infinity();
  DenseMatrix xt = random_complex(chi, dim_a, rng);  // X^T, the Alice factor in Bob's current basis
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    // Alice factor with Bob's isometry fixed: psi^T = Y X^T.
    const DenseVector xs = Eigen::Map<const DenseVector>(xt.data(), xt.size()) +
                           1e-4 * xt.norm() * random_complex(xt.size(), 1, rng).col(0);
    const linalg::EigenPair pa = solve_factor(
        h, dim_a, dim_b, xs, tol_residual,
        [&](const DenseVector& v) { return DenseMatrix(y * Eigen::Map<const DenseMatrix>(v.data(), chi, dim_a)); },
        [&](const auto& mt) { return DenseMatrix(y.adjoint() * mt); });
    const DenseMatrix x = Eigen::Map<const DenseMatrix>(pa.vector.data(), chi, dim_a).transpose();
    const DenseMatrix q = orthonormal_columns(x);

    // Bob factor with Alice's isometry fixed: psi^T = Z^T Q^T.
    const DenseMatrix zt0 = (q.adjoint() * x * y.transpose()).transpose();  // dim_b x chi
    const DenseVector zs = Eigen::Map<const DenseVector>(zt0.data(), zt0.size()) +
                           1e-4 * zt0.norm() * random_complex(zt0.size(), 1, rng).col(0);
    const linalg::EigenPair pb = solve_factor(
        h, dim_a, dim_b, zs, tol_residual,
        [&](const DenseVector& v) {
          return DenseMatrix(Eigen::Map<const DenseMatrix>(v.data(), dim_b, chi) * q.transpose());
        },
        [&](const auto& mt) { return DenseMatrix(mt * q.conjugate()); });
    const DenseMatrix zt = Eigen::Map<const DenseMatrix>(pb.vector.data(), dim_b, chi);
    const double energy = pb.value;
    y = orthonormal_columns(zt);
    xt = y.adjoint() * zt * q.transpose();  // current state in the new Bob basis

    if (energy < out.energy) {
      out.energy = energy;
      out.amplitudes = q * zt.transpose();
    }
    if (std::abs(previous - energy) < opts.tol) {
      out.converged = true;
      break;
    }
    previous = energy;
  }
  return out;
}

std::size_t schmidt_rank(const DenseMatrix& amplitudes) {
  const linalg::Svd f = linalg::svd(amplitudes);
  double total = 0.0;
  for (double v : f.s) total += v * v;
  return static_cast<std::size_t>(
      std::count_if(f.s.begin(), f.s.end(), [total](double v) { return v * v > 1e-12 * total; }));
}

struct Problem {
  DenseMatrix h;
  SparseH sparse;
  double tol_residual;
  Eigen::Index dim_a;
  Eigen::Index dim_b;
  double e0;
  DenseMatrix ground;  // dim_a x dim_b
  std::size_t initial_rank;
};

Problem make_problem(DenseMatrix h, std::size_t dim_a, std::size_t dim_b) {
  if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != dim_a * dim_b)
    throw InvalidInput("min_energy_at_rank: Hamiltonian dimension does not match dim_a * dim_b");
  if (!linalg::is_hermitian(h)) throw InvalidInput("min_energy_at_rank: Hamiltonian is not Hermitian");
  Problem p{std::move(h), {}, 0.0, static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b), 0.0, {}, 0};
  p.sparse = p.h.sparseView();
  p.tol_residual = 1e-11 * std::max(1.0, p.h.norm());
  const linalg::Eigh g = linalg::eigh_lowest(p.h, 1);
  p.e0 = g.values[0];
  p.ground = Eigen::Map<const DenseMatrix>(g.vectors.data(), p.dim_b, p.dim_a).transpose();
  p.initial_rank = schmidt_rank(p.ground);
  return p;
}

RankResult solve(const Problem& p, std::size_t chi, const RankOptions& opts, const std::optional<DenseMatrix>& warm) {
  if (chi == 0) throw InvalidInput("min_energy_at_rank: chi must be >= 1");
  RankResult result;
  result.chi = chi;
  result.initial_rank = p.initial_rank;
  result.delta_s0 = std::log2(static_cast<double>(p.initial_rank)) - std::log2(static_cast<double>(chi));
  const auto full = static_cast<std::size_t>(std::min(p.dim_a, p.dim_b));
  if (chi >= full || chi >= p.initial_rank) {
    result.delta_e = 0.0;
    result.amplitudes = p.ground;
    return result;
  }
  const auto k = static_cast<Eigen::Index>(chi);

  // Restart r uses its own stream so the merge is independent of scheduling.
  std::vector<AlsOutcome> outcomes(opts.restarts + (warm ? 1 : 0));
  auto run = [&](std::size_t r) {
    DenseMatrix y0;
    std::mt19937_64 rng(opts.seed * 1000003ull + r);
    if (r < opts.restarts) {
      y0 = orthonormal_columns(random_complex(p.dim_b, k, rng));
    } else {
      // Bob-side Schmidt vectors of the warm start, padded with random directions.
      const linalg::Svd f = linalg::svd(*warm);
      DenseMatrix cols = random_complex(p.dim_b, k, rng) * 1e-3;
      const Eigen::Index keep = std::min<Eigen::Index>(k, static_cast<Eigen::Index>(f.s.size()));
      cols.leftCols(keep) = f.v_dag.topRows(keep).transpose();
      y0 = orthonormal_columns(cols);
    }
    outcomes[r] = run_als(p.sparse, p.tol_residual, p.dim_a, p.dim_b, k, std::move(y0), rng, opts);
  };

  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, outcomes.size());
  if (threads == 1) {
    for (std::size_t r = 0; r < outcomes.size(); ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < outcomes.size(); r += threads) run(r);
      });
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].energy < outcomes[best].energy) best = r;
  result.delta_e = std::max(0.0, outcomes[best].energy - p.e0);
  result.amplitudes = outcomes[best].amplitudes;
  result.converged = outcomes[best].converged;
  if (!result.converged)
    std::fprintf(stderr, "warning: rank-%zu minimization hit the iteration cap; reporting best iterate\n", chi);
  return result;
}

Problem problem_from(const LocalHamiltonian& h) {
  if (h.n_sites() > dense::kMaxMatrixSites) throw ResourceLimit("min_energy_at_rank: at most 12 sites");
  if (h.ab_cut() < 1) throw InvalidInput("min_energy_at_rank: model has no bipartition");
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;
  for (std::size_t i = 0; i < h.n_sites(); ++i) (i < h.ab_cut() ? dim_a : dim_b) *= h.phys_dim();
  return make_problem(dense::matrix(h), dim_a, dim_b);
}

}  // namespace

RankResult min_energy_at_rank(const LocalHamiltonian& h, std::size_t chi, const RankOptions& opts) {
  return solve(problem_from(h), chi, opts, std::nullopt);
}

RankResult min_energy_at_rank(const DenseMatrix& h, std::size_t dim_a, std::size_t dim_b, std::size_t chi,
                              const RankOptions& opts) {
  return solve(make_problem(h, dim_a, dim_b), chi, opts, std::nullopt);
}

std::vector<RankResult> rank_sweep(const LocalHamiltonian& h, const RankOptions& opts) {
  const Problem p = problem_from(h);
  const auto full = static_cast<std::size_t>(std::min(p.dim_a, p.dim_b));
  std::vector<RankResult> out;
  std::optional<DenseMatrix> warm;
  for (std::size_t chi = 1; chi <= full; ++chi) {
    out.push_back(solve(p, chi, opts, warm));
    warm = out.back().amplitudes;
  }
  return out;
}

}  // namespace enttemp::oneshot
