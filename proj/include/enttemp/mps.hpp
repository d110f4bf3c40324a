#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "enttemp/hamiltonian.hpp"
#include "enttemp/linalg.hpp"
#include "enttemp/spectrum.hpp"

namespace enttemp {

/// Site tensor A[s] stored as one (left bond x right bond) matrix per physical index s.
using SiteTensor = std::vector<DenseMatrix>;

/// Open-boundary matrix product state.
///
/// Bond b (1 <= b < n) separates sites [0, b) from [b, n). When a canonical
/// center c is recorded, sites left of c are left isometries and sites right
/// of c are right isometries. Public operations return normalized states.
class MatrixProductState {
 public:
  MatrixProductState() = default;

  /// Takes ownership of raw tensors, checks bond consistency, then brings the
  /// state to canonical form with center 0 and unit norm.
  explicit MatrixProductState(std::vector<SiteTensor> sites);

  std::size_t n_sites() const { return sites_.size(); }
  std::size_t phys_dim() const { return sites_.empty() ? 0 : sites_.front().size(); }
  std::optional<std::size_t> canonical_center() const { return center_; }
  const std::vector<SiteTensor>& sites() const { return sites_; }
  const SiteTensor& site(std::size_t i) const { return sites_[i]; }

  /// Dimension of bond b, i.e. between sites b-1 and b; bond 0 and bond n are 1.
  std::size_t bond_dim(std::size_t b) const;
  std::size_t max_bond_dim() const;

  /// Moves the orthogonality center, normalizing the center tensor.
  void move_center(std::size_t target);

  /// Splits the pair (b, b+1) after applying `gate` (d^2 x d^2) to it, keeping
  /// at most chi_max singular values with discarded weight <= tol; the kept
  /// spectrum is renormalized. The center ends at b+1 when `center_right`,
  /// else at b. Returns the discarded squared weight.
  double apply_two_site(std::size_t b, const DenseMatrix& gate, std::size_t chi_max, double tol, bool center_right);

  /// Schmidt values at bond `bond` (unit norm, descending).
  std::vector<double> bond_singular_values(std::size_t bond);

  /// Replaces the Schmidt values at `bond` with reweight(values) (same length,
  /// zeros drop the corresponding Schmidt pair), renormalizes, and keeps the
  /// Schmidt vectors. The center ends at site `bond`.
  void reweight_bond(std::size_t bond, const std::function<std::vector<double>(const std::vector<double>&)>& reweight);

 private:
  struct CenterSplit {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v_dag;
  };
  CenterSplit split_center_right(std::size_t bond);
  void absorb_split(std::size_t bond, const CenterSplit& split, const std::vector<double>& weights);
  void left_orthonormalize(std::size_t i);
  void right_orthonormalize(std::size_t i);
  void normalize_center();

  std::vector<SiteTensor> sites_;
  std::optional<std::size_t> center_;
};

/// Random state with bond dims min(chi, d^b, d^(n-b)); complex Gaussian entries.
MatrixProductState random_mps(std::size_t n_sites, std::size_t phys_dim, std::size_t chi, std::uint64_t seed);

/// Computational basis product state; `digits[i]` is the local state of site i.
MatrixProductState product_state(const std::vector<std::size_t>& digits, std::size_t phys_dim = 2);

/// Exact MPS of a dense state vector (site 0 most significant), no truncation.
MatrixProductState from_dense(const DenseVector& psi, std::size_t n_sites, std::size_t phys_dim = 2);

SchmidtSpectrum schmidt(const MatrixProductState& state, std::size_t bond);

/// Keeps at most chi_max Schmidt values per bond, dropping the smallest squared
/// weights while the dropped total stays <= tol, then renormalizes.
MatrixProductState truncate(const MatrixProductState& state, std::size_t chi_max, double tol = 0.0);

/// <psi|H|psi>; throws InvalidInput on shape mismatch.
double energy(const MatrixProductState& state, const LocalHamiltonian& h);

/// <a|b>.
cplx overlap(const MatrixProductState& a, const MatrixProductState& b);

/// Amplitudes with site 0 as most significant digit. Throws ResourceLimit above 16 sites.
DenseVector to_dense(const MatrixProductState& state);

}  // namespace enttemp
