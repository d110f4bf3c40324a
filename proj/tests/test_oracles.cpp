#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"
#include "enttemp/models.hpp"
#include "enttemp/oracles.hpp"

using namespace enttemp;

namespace {

DenseMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix a(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      a(r, c) = cplx(re, im);
    }
  return (a + a.adjoint()) / 2.0;
}

DenseVector random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseVector v(dim);
  for (auto& x : v) {
    const double re = g(rng);
    const double im = g(rng);
    x = cplx(re, im);
  }
  return v.normalized();
}

// Random channel from a Stinespring isometry: stack k blocks and orthonormalize.
oracles::KrausChannel random_channel(Eigen::Index dim, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix v(dim * k, dim);
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double re = g(rng);
      const double im = g(rng);
      v(r, c) = cplx(re, im);
    }
  Eigen::HouseholderQR<DenseMatrix> qr(v);
  const DenseMatrix iso = qr.householderQ() * DenseMatrix::Identity(v.rows(), v.cols());
  std::vector<DenseMatrix> ops;
  for (int j = 0; j < k; ++j) ops.push_back(iso.middleRows(j * dim, dim));
  return oracles::KrausChannel(ops);
}

// Energy change of rho under the channel, evaluated in the Schroedinger picture.
double energy_change(const oracles::KrausChannel& ch, const DenseMatrix& h, const DenseMatrix& rho) {
  return ((ch.apply(rho) - rho) * h).trace().real();
}

}  // namespace

TEST(Method1, HalfExtractionCostPerPair) {
  const auto s = oracles::method1_ansatz(100, 50);
  EXPECT_GE(s.delta_e / 50.0, 0.37);
  EXPECT_LE(s.delta_e / 50.0, 0.38);
  EXPECT_LT(s.residual, 1e-10);
  EXPECT_NEAR(binary_entropy_bits(s.alpha * s.alpha), 0.5, 1e-10);
  EXPECT_NEAR(s.alpha * s.alpha + s.beta * s.beta, 1.0, 1e-14);
}

TEST(Method1, Endpoints) {
  EXPECT_EQ(oracles::method1_ansatz(8, 8).delta_e, 4.0);
  EXPECT_NEAR(oracles::method1_ansatz(8, 0).delta_e, 0.0, 1e-12);
  EXPECT_THROW(oracles::method1_ansatz(3, 4), InvalidInput);
  EXPECT_THROW(oracles::method1_ansatz(0, 0), InvalidInput);
}

TEST(Method1, NeverExceedsOneShotCost) {
  for (std::size_t m = 1; m <= 20; ++m) EXPECT_LE(oracles::method1_ansatz(20, m).delta_e / m, 0.5 + 1e-12);
}

TEST(Method1, AnsatzStateMatchesDenseEnergyAndEntropy) {
  const LocalHamiltonian h = toy_model(3);
  for (std::size_t m = 0; m <= 3; ++m) {
    const auto s = oracles::method1_ansatz(3, m);
    const DenseVector psi = oracles::pair_product_state(h, s.alpha, s.beta);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    EXPECT_NEAR(dense::expectation(h, psi), s.delta_e, 1e-10);
    EXPECT_NEAR(entropy_bits(dense::schmidt(psi, 6, 2, 3)), 3.0 - static_cast<double>(m), 1e-9);
  }
}

TEST(Lagrange, AnsatzIsStationary) {
  const LocalHamiltonian h = toy_model(2);
  const auto s = oracles::method1_ansatz(2, 1);
  const auto fit = oracles::lagrange_residual_best_fit(oracles::pair_product_state(h, s.alpha, s.beta), h);
  EXPECT_LT(fit.residual, 1e-6);
  EXPECT_FALSE(fit.regularized);
}

TEST(Lagrange, EigenvectorHasZeroResidualAtZeroMultiplier) {
  const LocalHamiltonian h = tfi_critical(6);
  const auto g = dense::ground_state(h);
  EXPECT_LT(oracles::lagrange_residual(g.vector, h, 0.0, -g.energy).residual, 1e-9);
  EXPECT_LT(oracles::lagrange_residual_best_fit(g.vector, h).residual, 1e-9);
}

TEST(Lagrange, RandomStateIsNotStationary) {
  std::mt19937_64 rng(17);
  const LocalHamiltonian h = tfi_critical(6);
  EXPECT_GT(oracles::lagrange_residual_best_fit(random_state(64, rng), h).residual, 0.01);
}

TEST(Lagrange, ProductStateIsRegularized) {
  const LocalHamiltonian h = toy_model(1);
  const auto fit = oracles::lagrange_residual(oracles::pair_product_state(h, 1.0, 0.0), h, 0.1, 0.0);
  EXPECT_TRUE(fit.regularized);
  EXPECT_TRUE(std::isfinite(fit.residual));
}

TEST(Method2, ClosedForm) {
  for (std::size_t m = 0; m <= 6; ++m) {
    const double p = std::pow(2.0, -static_cast<double>(m));
    EXPECT_NEAR(oracles::method2_cost(m), 1.0 - p, 1e-15);
    EXPECT_NEAR(oracles::method2_overlap_bound(m), std::sqrt(p), 1e-15);
    // Cost is one minus the squared overlap bound.
    EXPECT_NEAR(oracles::method2_cost(m), 1.0 - std::pow(oracles::method2_overlap_bound(m), 2), 1e-15);
  }
}

TEST(Method2, OptimizedOverlapReachesBound) {
  for (std::size_t m : {1u, 2u})
    EXPECT_NEAR(oracles::method2_optimized_overlap(3, m), oracles::method2_overlap_bound(m), 1e-6);
  EXPECT_THROW(oracles::method2_optimized_overlap(2, 3), InvalidInput);
}

TEST(Channel, RejectsNonTracePreserving) {
  EXPECT_THROW(oracles::KrausChannel({DenseMatrix::Identity(2, 2) * 0.5}), InvalidInput);
  EXPECT_THROW(oracles::channel_energy_cost(oracles::KrausChannel::identity(2), DenseMatrix::Identity(3, 3)),
               InvalidInput);
}

TEST(Channel, Examples) {
  EXPECT_NEAR(oracles::channel_energy_cost(oracles::KrausChannel::identity(3), DenseMatrix::Identity(3, 3)), 0.0, 1e-14);
  EXPECT_NEAR(oracles::channel_energy_cost(oracles::KrausChannel::depolarizing_qubit(), pauli::z()), 1.0, 1e-12);
}

TEST(Channel, ReplacementToGroundCostsFullGap) {
  std::mt19937_64 rng(3);
  const DenseMatrix h = random_hermitian(3, rng);
  const auto e = linalg::eigh(h);
  EXPECT_NEAR(oracles::channel_energy_cost(oracles::KrausChannel::replacement(e.vectors.col(0)), h),
              e.values[2] - e.values[0], 1e-10);
}

TEST(Channel, NormMatchesSchroedingerPictureEnumeration) {
  std::mt19937_64 rng(8);
  for (Eigen::Index dim : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const DenseMatrix h = random_hermitian(dim, rng);
      const auto ch = random_channel(dim, 3, rng);
      const double cost = oracles::channel_energy_cost(ch, h);
      // The extremal states are eigenvectors of the Heisenberg-picture difference;
      // build that difference from the Schroedinger picture on a matrix basis.
      DenseMatrix d = DenseMatrix::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
          DenseMatrix unit = DenseMatrix::Zero(dim, dim);
          unit(j, i) = 1.0;
          d(i, j) = ((ch.apply(unit) - unit) * h).trace();
        }
      const auto ed = linalg::eigh(d);
      double best = 0.0;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const DenseVector v = ed.vectors.col(k);
        best = std::max(best, std::abs(energy_change(ch, h, v * v.adjoint())));
      }
      EXPECT_NEAR(cost, best, 1e-10);
      for (int s = 0; s < 50; ++s) {
        const DenseVector v = random_state(dim, rng);
        EXPECT_LE(std::abs(energy_change(ch, h, v * v.adjoint())), cost + 1e-10);
      }
    }
  }
}

TEST(NaiveBound, Examples) {
  EXPECT_NEAR(oracles::naive_protocol_bound(heisenberg_af(4)), 6.0, 1e-10);
  EXPECT_NEAR(oracles::naive_protocol_bound(tfi_critical(4)), 2.0, 1e-10);
  EXPECT_NEAR(oracles::naive_protocol_bound(toy_model(2)), 4.0, 1e-10);
  EXPECT_LE(1.0, oracles::naive_protocol_bound(toy_model(2)));
}

TEST(Fermion, GroundEnergyClosedForm) {
  EXPECT_NEAR(oracles::fermion_ground_energy({4, 1.0}), 3.0, 1e-12);
  EXPECT_NEAR(oracles::fermion_ground_energy({4, 0.5}), 6.0, 1e-12);
  EXPECT_THROW(oracles::fermion_ground_energy({5, 1.0}), InvalidInput);
}

TEST(Fermion, SpinChainMatchesFreeFermionSpectrum) {
  for (std::size_t n : {4u, 6u, 8u}) {
    const FermionChainSpec spec{n, 1.0};
    const auto levels = oracles::fermion_mode_filling_spectrum(spec);
    const auto e = linalg::eigh(dense::matrix(staggered_fermion_spin(spec)));
    ASSERT_EQ(levels.size(), static_cast<std::size_t>(e.values.size()));
    for (std::size_t k = 0; k < levels.size(); ++k) EXPECT_NEAR(levels[k], e.values[k], 1e-8);
    EXPECT_NEAR(oracles::fermion_ground_energy(spec), e.values[0], 1e-8);
  }
}

TEST(Fermion, ProductBoundHolds) {
  for (double a : {1.0, 0.5}) {
    const auto b = oracles::fermion_product_bound({8, a}, 1000, 3);
    EXPECT_DOUBLE_EQ(b.bound, 1.0 / a);
    EXPECT_GE(b.minimum, b.bound - 1e-9);
  }
}

TEST(Fermion, EnergyDensityApproachesRiemannLimit) {
  double previous_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = 8; n <= 256; n *= 2) {
    const double gap = std::abs(oracles::fermion_ground_energy({n, 1.0}) / n - (1.0 - 1.0 / std::numbers::pi));
    EXPECT_LT(gap, previous_gap);
    previous_gap = gap;
  }
  EXPECT_LT(previous_gap, 1e-4);
}

TEST(Scaling, OneDimensionalRatio) {
  const auto c = oracles::qft_scaling_curve({1, 1.0, 1.0}, {0.0, 1.0, 2.0});
  EXPECT_NEAR(c[1].delta_e / c[0].delta_e, 64.0, 1e-9);
  EXPECT_NEAR(c[2].delta_e / c[1].delta_e, 64.0, 1e-9);
  EXPECT_TRUE(std::isnan(c[0].t_ent));
  const auto c2 = oracles::qft_scaling_curve({1, 2.0, 1.0}, {0.0, 1.0});
  EXPECT_NEAR(c2[1].delta_e / c2[0].delta_e, 8.0, 1e-9);
}

TEST(Scaling, HigherDimensionExponent) {
  for (std::size_t d : {2u, 3u}) {
    const auto c = oracles::qft_scaling_curve({d, 1.0, 3.0}, {0.5, 1.0});
    const double dd = static_cast<double>(d);
    EXPECT_NEAR(std::log2(c[1].delta_e / c[0].delta_e), dd / (dd - 1.0), 1e-12);
  }
}

TEST(Scaling, MonotoneAndConvex) {
  std::vector<double> xs;
  for (int i = 0; i <= 40; ++i) xs.push_back(0.05 * i);
  for (std::size_t d : {1u, 2u, 3u})
    for (double c : {0.5, 1.0, 3.0}) {
      const auto curve = oracles::qft_scaling_curve({d, c, 1.0}, xs);
      for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GT(curve[i].delta_e, curve[i - 1].delta_e);
      for (std::size_t i = 1; i + 1 < curve.size(); ++i)
        EXPECT_GE(curve[i - 1].delta_e + curve[i + 1].delta_e - 2.0 * curve[i].delta_e, -1e-12);
    }
}

TEST(Scaling, RejectsBadParameters) {
  EXPECT_THROW(oracles::qft_scaling_curve({0, 1.0, 1.0}, {1.0}), InvalidInput);
  EXPECT_THROW(oracles::qft_scaling_curve({1, 0.0, 1.0}, {1.0}), InvalidInput);
  EXPECT_THROW(oracles::qft_scaling_curve({1, -1.0, 1.0}, {1.0}), InvalidInput);
  EXPECT_THROW(oracles::qft_scaling_curve({1, 1.0, 1.0}, {-0.5}), InvalidInput);
  EXPECT_THROW(oracles::qft_scaling_curve({2, 1.0, 0.0}, {1.0}), InvalidInput);
}
