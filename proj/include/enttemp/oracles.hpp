#pragma once

#include <cstdint>
#include <vector>

#include "enttemp/hamiltonian.hpp"
#include "enttemp/linalg.hpp"
#include "enttemp/models.hpp"

// Closed-form and small dense reference results.
namespace enttemp::oracles {

/// CPTP map given by Kraus operators; the constructor checks sum K^dag K = 1.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<DenseMatrix> kraus_ops, double tol = 1e-10);

  const std::vector<DenseMatrix>& kraus_ops() const { return ops_; }
  Eigen::Index dim() const { return ops_.front().cols(); }

  DenseMatrix apply(const DenseMatrix& rho) const;          // E(rho)
  DenseMatrix apply_adjoint(const DenseMatrix& op) const;   // E*(op)

  static KrausChannel identity(Eigen::Index dim);
  static KrausChannel depolarizing_qubit();
  /// Maps every state to |target><target|.
  static KrausChannel replacement(const DenseVector& target);

 private:
  std::vector<DenseMatrix> ops_;
};

struct Method1Solution {
  double alpha = 0.0;
  double beta = 0.0;
  double delta_e = 0.0;
  double residual = 0.0;  // |h2(alpha^2) - (n - m)/n|
};

/// Product ansatz with every pair in alpha|00> + beta|11>: bisection on
/// alpha^2 in [1/2, 1] for h2(alpha^2) = (n - m)/n, then dE = n[1 - (alpha+beta)^2/2].
Method1Solution method1_ansatz(std::size_t n, std::size_t m);

/// Every pair of a paired model (toy layout) in alpha|00> + beta|11>.
DenseVector pair_product_state(const LocalHamiltonian& h, cplx alpha, cplx beta);

struct LagrangeFit {
  double residual = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool regularized = false;  // rho_B had eigenvalues below the floor
};

inline constexpr double kLogFloor = 1e-12;

/// || [H - mu1 (1_A (x) ln rho_B) - mu1 + mu2] psi || for rho_B at the cut of h.
LagrangeFit lagrange_residual(const DenseVector& psi, const LocalHamiltonian& h, double mu1, double mu2);

/// Minimizes the residual over real (mu1, mu2) by linear least squares.
LagrangeFit lagrange_residual_best_fit(const DenseVector& psi, const LocalHamiltonian& h);

double method2_cost(std::size_t m);
double method2_overlap_bound(std::size_t m);

/// Maximal |<Omega|psi>| over states of Schmidt rank <= 2^(n-m), where Omega is
/// maximally entangled on 2^n x 2^n, by truncated-SVD ascent from a random start.
double method2_optimized_overlap(std::size_t n, std::size_t m, std::uint64_t seed = 11, std::size_t iterations = 200);

/// || H - E*(H) ||.
double channel_energy_cost(const KrausChannel& channel, const DenseMatrix& h);

/// 2 ||V_AB||.
double naive_protocol_bound(const LocalHamiltonian& h);

/// Filled Fermi sea of the periodic staggered chain: (N - cot(pi/N)) / a.
double fermion_ground_energy(const FermionChainSpec& spec);

/// Every many-body level of the free chain from single-particle mode fillings, ascending.
std::vector<double> fermion_mode_filling_spectrum(const FermionChainSpec& spec);

struct ProductBoundSample {
  double minimum = 0.0;
  double bound = 0.0;  // 1 / a
};

/// Minimum of the middle hopping term plus 1/a over random states that are
/// products across the middle cut with definite fermion parity on each side.
ProductBoundSample fermion_product_bound(const FermionChainSpec& spec, std::size_t samples, std::uint64_t seed);

struct QftScalingParams {
  std::size_t dimension = 1;
  double central_charge = 1.0;
  double prefactor = 1.0;

  void validate() const;
};

struct ScalingPoint {
  double delta_s;
  double delta_e;
  double t_ent;  // delta_e / delta_s; NaN at delta_s = 0
};

/// d = 1: dE = A exp((6 ln 2 / c) dS); d > 1: dE = A dS^(d/(d-1)).
std::vector<ScalingPoint> qft_scaling_curve(const QftScalingParams& params, const std::vector<double>& delta_s);

}  // namespace enttemp::oracles
