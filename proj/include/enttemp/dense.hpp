#pragma once

#include "enttemp/hamiltonian.hpp"
#include "enttemp/linalg.hpp"
#include "enttemp/spectrum.hpp"

// Exact state-vector routines for small chains. Basis index puts site 0 in the
// most significant digit, matching to_dense().
namespace enttemp::dense {

inline constexpr std::size_t kMaxMatrixSites = 12;
inline constexpr std::size_t kMaxVectorSites = 20;

/// H|psi> without forming H.
DenseVector apply(const LocalHamiltonian& h, const DenseVector& psi);

/// One term applied to |psi>.
DenseVector apply_term(const HamiltonianTerm& term, std::size_t n_sites, std::size_t phys_dim, const DenseVector& psi);

double expectation(const LocalHamiltonian& h, const DenseVector& psi);

/// Full Hamiltonian matrix. Throws ResourceLimit above kMaxMatrixSites.
DenseMatrix matrix(const LocalHamiltonian& h);

struct GroundState {
  double energy = 0.0;
  DenseVector vector;
};

/// Lowest eigenpair by dense diagonalization (real-symmetric path when possible).
GroundState ground_state(const LocalHamiltonian& h);

/// Lowest eigenpair by restarted Lanczos from `start` until ||H v - E v|| < tol.
GroundState lanczos_ground(const LocalHamiltonian& h, const DenseVector& start, double tol = 1e-11,
                           std::size_t max_restarts = 200);

/// Amplitudes reshaped to (sites [0, bond)) x (sites [bond, n)).
DenseMatrix bipartite_matrix(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond);

SchmidtSpectrum schmidt(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond);

/// Reduced density matrix of sites [bond, n) (Bob's side).
DenseMatrix reduced_density_right(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim, std::size_t bond);

}  // namespace enttemp::dense
