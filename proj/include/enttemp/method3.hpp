#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "enttemp/hamiltonian.hpp"
#include "enttemp/mps.hpp"

// Sampling of the energy / entanglement trade-off: imaginary-time TEBD,
// Schmidt sharpening, Pareto fronts and entanglement temperatures.
namespace enttemp::method3 {

struct TradeoffPoint {
  double delta_e = 0.0;  // energy above the reference ground energy
  double delta_s = 0.0;  // bits removed at the cut: S(ground) - S(state)
  std::size_t sample = 0;
  std::string move_digest;  // hex digest of the move sequence that produced the state
};

/// Mutually nondominated points sorted by delta_s ascending.
struct ParetoFront {
  std::vector<TradeoffPoint> points;
};

struct SamplerConfig {
  std::size_t n_samples = 200;
  std::size_t rounds_per_sample = 40;
  double tau_min = 1e-3;
  double tau_max = 1.0;
  double epsilon_min = 0.0;
  double epsilon_max = 0.5;
  bool epsilon_log_uniform = false;  // resolves the near-ground front; needs epsilon_min > 0
  std::size_t chi_max = 16;
  std::uint64_t seed = 1;
  double truncation_tol = 0.0;  // only the chi_max cap truncates
  std::size_t threads = 1;

  void validate() const;
};

struct GroundStage {
  double tau;
  std::size_t steps;
};

struct GroundResult {
  MatrixProductState state;
  double energy = 0.0;
  std::size_t steps_taken = 0;
};

/// Raised by find_ground when the schedule ends before the energy settles.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, GroundResult best) : std::runtime_error(what), best_(std::move(best)) {}
  const GroundResult& best() const { return best_; }

 private:
  GroundResult best_;
};

/// Two-site bond Hamiltonians of a nearest-neighbour chain; one-site terms are
/// shared evenly between the bonds touching their site.
std::vector<DenseMatrix> bond_hamiltonians(const LocalHamiltonian& h);

/// One second-order Trotter step of exp(-tau H): even bonds at tau/2, odd bonds
/// at tau, even bonds at tau/2, truncating each split to chi_max.
MatrixProductState imaginary_step(const MatrixProductState& state, const LocalHamiltonian& h, double tau,
                                  std::size_t chi_max, double tol = 1e-12);

std::vector<GroundStage> default_ground_schedule();

/// Imaginary-time evolution from a seeded random state along `schedule`
/// (decreasing taus). A stage ends early once the energy change per step drops
/// below `tol`; the final stage must reach that or ConvergenceError is thrown.
GroundResult find_ground(const LocalHamiltonian& h, std::size_t chi_max, const std::vector<GroundStage>& schedule,
                         double tol = 1e-10, std::uint64_t seed = 20170401);

/// Replaces a TEBD ground by the exact ground (Lanczos started from it)
/// truncated to chi_max, removing the Trotter bias of the reference state.
/// Chains above 16 sites are returned unchanged.
GroundResult refine_ground(const LocalHamiltonian& h, GroundResult tebd, std::size_t chi_max);

/// Schmidt values at `bond` replaced by lambda^(1+epsilon), renormalized.
MatrixProductState sharpen(const MatrixProductState& state, std::size_t bond, double epsilon);

/// Random sequences of imaginary steps and sharpenings started alternately from
/// the ground state (even samples) and random states (odd samples). Output is
/// ordered by (sample, move) and independent of the thread count.
std::vector<TradeoffPoint> sample_tradeoff(const LocalHamiltonian& h, const MatrixProductState& ground, double e0,
                                           const SamplerConfig& cfg);

ParetoFront pareto_front(const std::vector<TradeoffPoint>& points);

struct TemperaturePoint {
  double delta_s;
  double delta_e;
  double t_ent;
};

struct TemperatureCurve {
  std::vector<TemperaturePoint> points;
  std::size_t excluded = 0;  // front points with delta_s <= 0
};

TemperatureCurve ent_temperature(const ParetoFront& front);

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  std::size_t used = 0;
};

/// Least-squares fit of log T = log A + gamma log dS over points with dS in
/// (0, max_delta_s] and dE above `min_delta_e` (the energy resolution).
PowerLawFit fit_temperature_power_law(const TemperatureCurve& curve, double max_delta_s, double min_delta_e = 0.0);

/// Smallest energy difference treated as resolved: 1e-10 max(1, |e0|).
double energy_resolution(double e0);

struct PerturbativeCoefficients {
  double c1 = 0.0;  // dS/d(epsilon) in bits at epsilon = 0
  double c2 = 0.0;  // lim dE / epsilon^2
  double top_weight = 0.0;
  double entropy_bits = 0.0;
};

/// Leading coefficients of the entropy and energy change when the largest
/// Schmidt weight at the cut is raised by epsilon. Throws Degeneracy when the
/// top two weights coincide within 1e-10.
PerturbativeCoefficients appendix_d_coefficients(const DenseVector& ground, const LocalHamiltonian& h, double e0);

/// The perturbed state sum_a sqrt(lambda_a^2 + eps delta_{a0}) |l_a r_a>, normalized.
DenseVector perturb_top_weight(const DenseVector& ground, std::size_t n_sites, std::size_t phys_dim, std::size_t bond,
                               double epsilon);

}  // namespace enttemp::method3
