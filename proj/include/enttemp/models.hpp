#pragma once

#include <string>

#include "enttemp/hamiltonian.hpp"

namespace enttemp {

namespace pauli {
DenseMatrix identity();
DenseMatrix x();
DenseMatrix y();
DenseMatrix z();
DenseMatrix raising();   // |1><0|, creates an occupied site
DenseMatrix lowering();  // |0><1|
}  // namespace pauli

/// Staggered free-fermion chain: N sites (even, >= 4), lattice spacing a > 0.
struct FermionChainSpec {
  std::size_t n_sites = 4;
  double lattice_spacing = 1.0;

  void validate() const;
};

/// Sum over n pairs of (1 - P_Bell) with sites nested A_n..A_1 B_1..B_n and the cut at the middle bond.
LocalHamiltonian toy_model(std::size_t n_pairs);

/// Open Heisenberg chain sum sx sx + sy sy + sz sz, unit coupling, cut at n/2.
LocalHamiltonian heisenberg_af(std::size_t n_sites);

/// Critical transverse-field Ising chain -sum sz sz - sum sx (open), cut at n/2.
LocalHamiltonian tfi_critical(std::size_t n_sites);

/// Jordan-Wigner image of the periodic staggered hopping chain including the
/// 1/a per-site constant. Occupied = |1>, psi_n = (prod_{m<n} Z_m) sigma^-_n.
LocalHamiltonian staggered_fermion_spin(const FermionChainSpec& spec);

/// ||V_AB||: operator norm of the sum of terms crossing the cut. Terms are
/// grouped into clusters of overlapping support; disjoint clusters commute, so
/// the extreme eigenvalues add. Throws ResourceLimit for clusters above 12 sites.
double interaction_norm(const LocalHamiltonian& h);

/// Parses "toy:<n>", "haf:<N>", "tfi:<N>", "fermion:<N>:<a>". Throws InvalidInput.
LocalHamiltonian parse_model(const std::string& spec);

}  // namespace enttemp
