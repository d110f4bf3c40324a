#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "enttemp/linalg.hpp"

namespace enttemp {

/// One local term. `op` acts on the tensor product of `sites` in listed order
/// (first site most significant). Sites in `parity_string` additionally carry
/// a Pauli-z factor; this is how Jordan-Wigner strings of long-range fermion
/// hoppings are represented without materialising a many-site matrix.
struct HamiltonianTerm {
  std::vector<std::size_t> sites;
  DenseMatrix op;
  std::vector<std::size_t> parity_string;

  std::size_t first_site() const;
  std::size_t last_site() const;
};

/// Sum of local terms on an open chain of `n_sites` sites with a designated
/// Alice/Bob bond: bond b separates sites [0, b) from [b, n).
class LocalHamiltonian {
 public:
  using PairLayout = std::vector<std::pair<std::size_t, std::size_t>>;

  LocalHamiltonian(std::size_t n_sites, std::size_t phys_dim, std::vector<HamiltonianTerm> terms,
                   std::size_t ab_cut, std::optional<PairLayout> pair_layout = std::nullopt);

  std::size_t n_sites() const { return n_sites_; }
  std::size_t phys_dim() const { return phys_dim_; }
  std::size_t ab_cut() const { return ab_cut_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::optional<PairLayout>& pair_layout() const { return pair_layout_; }

  /// True when `term` has support on both sides of the cut (part of V_AB).
  bool crosses_cut(const HamiltonianTerm& term) const;
  std::vector<HamiltonianTerm> crossing_terms() const;

  /// Every term is one-site or acts on two adjacent sites without a string.
  bool nearest_neighbour() const;

  /// All term matrices are real (enables the real-symmetric dense path).
  bool real_valued() const;

 private:
  std::size_t n_sites_;
  std::size_t phys_dim_;
  std::vector<HamiltonianTerm> terms_;
  std::size_t ab_cut_;
  std::optional<PairLayout> pair_layout_;
};

}  // namespace enttemp
