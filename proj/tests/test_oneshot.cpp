#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"
#include "enttemp/models.hpp"
#include "enttemp/oneshot.hpp"

using namespace enttemp;

namespace {

SchmidtSpectrum random_spectrum(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::exponential_distribution<double> w(1.0);
  std::vector<double> weights(len(rng));
  for (auto& v : weights) v = w(rng);
  return SchmidtSpectrum::from_weights(weights);
}

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

// Independent reference: gradient descent on the Rayleigh quotient of
// psi = X Y^T over unconstrained (dim x chi) factors, best of `starts` runs.
double gradient_reference(const DenseMatrix& h, Eigen::Index dim_a, Eigen::Index dim_b, Eigen::Index chi, int starts,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rnd = [&](Eigen::Index r, Eigen::Index c) {
    DenseMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        m(i, j) = cplx(re, im);
      }
    return m;
  };
  auto flatten = [&](const DenseMatrix& m) {
    const DenseMatrix t = m.transpose();
    return DenseVector(Eigen::Map<const DenseVector>(t.data(), t.size()));
  };
  auto value = [&](const DenseMatrix& x, const DenseMatrix& y) {
    const DenseVector psi = flatten(x * y.transpose());
    return (psi.dot(h * psi)).real() / psi.squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    DenseMatrix x = rnd(dim_a, chi);
    DenseMatrix y = rnd(dim_b, chi);
    double f = value(x, y);
    double step = 0.5;
    for (int it = 0; it < 3000 && step > 1e-14; ++it) {
      const DenseVector psi = flatten(x * y.transpose());
      const double norm2 = psi.squaredNorm();
      const DenseVector r = (h * psi - f * psi) / norm2;
      const DenseMatrix gm = Eigen::Map<const DenseMatrix>(r.data(), dim_b, dim_a).transpose();
      const DenseMatrix gx = gm * y.conjugate();
      const DenseMatrix gy = gm.transpose() * x.conjugate();
      const double scale = std::sqrt(norm2);
      for (;;) {
        const DenseMatrix nx = x - step * scale * gx;
        const DenseMatrix ny = y - step * scale * gy;
        const double nf = value(nx, ny);
        if (nf < f) {
          // Keep the factors balanced to avoid drifting scales.
          const double bal = std::sqrt(nx.norm() / ny.norm());
          x = nx / bal;
          y = ny * bal;
          f = nf;
          step *= 1.5;
          break;
        }
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    best = std::min(best, f);
  }
  return best;
}

}  // namespace

TEST(Majorizes, Examples) {
  const auto bell = SchmidtSpectrum::normalized({1.0, 1.0});
  const auto product = SchmidtSpectrum::normalized({1.0});
  EXPECT_TRUE(oneshot::majorizes(product, bell));
  EXPECT_FALSE(oneshot::majorizes(bell, product));
  EXPECT_TRUE(oneshot::majorizes(SchmidtSpectrum::from_weights(std::vector<double>{0.6, 0.4}),
                                 SchmidtSpectrum::from_weights(std::vector<double>{0.5, 0.3, 0.2})));
}

TEST(Majorizes, OrderProperties) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_spectrum(rng, 5);
    const auto b = random_spectrum(rng, 5);
    const auto c = random_spectrum(rng, 5);
    EXPECT_TRUE(oneshot::majorizes(a, a));
    if (oneshot::majorizes(a, b) && oneshot::majorizes(b, a)) {
      auto wa = a.weights();
      auto wb = b.weights();
      wa.resize(5, 0.0);
      wb.resize(5, 0.0);
      for (int k = 0; k < 5; ++k) EXPECT_NEAR(wa[k], wb[k], 1e-9);
    }
    if (oneshot::majorizes(a, b) && oneshot::majorizes(b, c)) EXPECT_TRUE(oneshot::majorizes(a, c));
  }
}

TEST(FeasibleFinalRank, Examples) {
  EXPECT_EQ(oneshot::feasible_final_rank(16, 1), 8u);
  EXPECT_EQ(oneshot::feasible_final_rank(32, 5), 1u);
  EXPECT_THROW(oneshot::feasible_final_rank(16, 5), Infeasible);
  EXPECT_TRUE((oneshot::ExtractionBudget{3, 8}.feasible()));
  EXPECT_FALSE((oneshot::ExtractionBudget{4, 8}.feasible()));
}

TEST(ToyCost, Examples) {
  EXPECT_EQ(oneshot::toy_cost(7, 0), 0.0);
  EXPECT_EQ(oneshot::toy_cost(4, 4), 2.0);
  EXPECT_EQ(oneshot::toy_cost(10, 3), 1.5);
  EXPECT_THROW(oneshot::toy_cost(2, 3), Infeasible);
}

TEST(MinEnergyAtRank, ToyIntegerPoints) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const LocalHamiltonian h = toy_model(n);
    for (std::size_t m = 0; m <= n; ++m) {
      const auto r = oneshot::min_energy_at_rank(h, std::size_t{1} << (n - m));
      EXPECT_NEAR(r.delta_e, oneshot::toy_cost(n, m), 1e-6) << "n=" << n << " m=" << m;
      EXPECT_NEAR(r.delta_s0, static_cast<double>(m), 1e-12);
    }
  }
}

TEST(MinEnergyAtRank, NonPowerOfTwoRankIsBracketed) {
  const LocalHamiltonian h = toy_model(3);
  const double r2 = oneshot::min_energy_at_rank(h, 2).delta_e;
  const double r3 = oneshot::min_energy_at_rank(h, 3).delta_e;
  const double r4 = oneshot::min_energy_at_rank(h, 4).delta_e;
  EXPECT_LE(r3, r2 + 1e-9);
  EXPECT_GE(r3, r4 - 1e-9);
  // Cross-check the optimum with the unconstrained gradient reference on the
  // same dense Hamiltonian.
  EXPECT_NEAR(r3, gradient_reference(dense::matrix(h), 8, 8, 3, 30, 1), 1e-6);
}

TEST(MinEnergyAtRank, SweepIsMonotone) {
  const auto sweep = oneshot::rank_sweep(toy_model(3));
  ASSERT_EQ(sweep.size(), 8u);
  EXPECT_NEAR(sweep.front().delta_e, 1.5, 1e-6);
  EXPECT_NEAR(sweep.back().delta_e, 0.0, 1e-12);
  for (std::size_t i = 1; i < sweep.size(); ++i) EXPECT_LE(sweep[i].delta_e, sweep[i - 1].delta_e + 1e-9);
}

TEST(MinEnergyAtRank, TwoPlusTwoQubitsMatchGradientReference) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const DenseMatrix h = random_hermitian(16, rng);
    const double e0 = linalg::eigh(h).values[0];
    for (Eigen::Index chi = 1; chi <= 3; ++chi) {
      const auto r = oneshot::min_energy_at_rank(h, 4, 4, static_cast<std::size_t>(chi));
      const double ref = gradient_reference(h, 4, 4, chi, 200, 100 + trial * 10 + chi) - e0;
      EXPECT_NEAR(r.delta_e, ref, 1e-6) << "trial " << trial << " chi " << chi;
    }
    EXPECT_NEAR(oneshot::min_energy_at_rank(h, 4, 4, 4).delta_e, 0.0, 1e-12);
  }
}

TEST(MinEnergyAtRank, ThreadCountDoesNotChangeResult) {
  oneshot::RankOptions one;
  oneshot::RankOptions many;
  many.threads = 4;
  const LocalHamiltonian h = toy_model(2);
  EXPECT_EQ(oneshot::min_energy_at_rank(h, 3, one).delta_e, oneshot::min_energy_at_rank(h, 3, many).delta_e);
}

TEST(MinEnergyAtRank, RejectsBadInput) {
  EXPECT_THROW(oneshot::min_energy_at_rank(toy_model(2), 0), InvalidInput);
  EXPECT_THROW(oneshot::min_energy_at_rank(DenseMatrix::Identity(6, 6), 2, 2, 1), InvalidInput);
  EXPECT_THROW(oneshot::min_energy_at_rank(toy_model(7), 2), ResourceLimit);
}
