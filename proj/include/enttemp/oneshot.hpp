#pragma once

#include <cstdint>
#include <vector>

#include "enttemp/hamiltonian.hpp"
#include "enttemp/linalg.hpp"
#include "enttemp/spectrum.hpp"

// One-shot extraction: majorization feasibility and rank-restricted energy minimization.
namespace enttemp::oneshot {

struct ExtractionBudget {
  std::size_t m = 0;             // EPR pairs to extract
  std::size_t initial_rank = 1;  // Schmidt rank of the ground state at the cut

  bool feasible() const;
};

/// Nielsen's criterion on squared weights: every partial sum of the target's
/// descending weights is >= the source's. True iff source -> target by LOCC.
bool majorizes(const SchmidtSpectrum& target, const SchmidtSpectrum& source, double tol = 1e-12);

/// floor(initial_rank / 2^m); throws Infeasible when 2^m > initial_rank.
std::size_t feasible_final_rank(std::size_t initial_rank, std::size_t m);

/// Energy of the simple swap-out protocol on the toy model: m / 2.
double toy_cost(std::size_t n, std::size_t m);

struct RankOptions {
  std::size_t restarts = 20;
  std::size_t max_iterations = 500;
  double tol = 1e-13;
  std::uint64_t seed = 7;
  std::size_t threads = 1;
};

struct RankResult {
  double delta_e = 0.0;       // min <H> - E0 at Schmidt rank <= chi
  double delta_s0 = 0.0;      // log2(initial rank) - log2(chi)
  std::size_t chi = 0;
  std::size_t initial_rank = 0;
  bool converged = true;
  DenseMatrix amplitudes;     // best state as a (Alice x Bob) matrix
};

/// Minimizes <psi|H|psi> over states of Schmidt rank <= chi across the cut of
/// `h` (dense, at most 12 sites) by alternating least squares over the two
/// Schmidt factors with seeded multistart.
RankResult min_energy_at_rank(const LocalHamiltonian& h, std::size_t chi, const RankOptions& opts = {});

/// Same on an explicit dense Hamiltonian over a (dim_a x dim_b) bipartite space.
RankResult min_energy_at_rank(const DenseMatrix& h, std::size_t dim_a, std::size_t dim_b, std::size_t chi,
                              const RankOptions& opts = {});

/// chi = 1 .. full rank, each warm-started from the previous optimum as one
/// extra restart, so delta_e is nonincreasing in chi.
std::vector<RankResult> rank_sweep(const LocalHamiltonian& h, const RankOptions& opts = {});

}  // namespace enttemp::oneshot
