#include "enttemp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"
#include "enttemp/method3.hpp"
#include "enttemp/models.hpp"
#include "enttemp/oneshot.hpp"
#include "enttemp/oracles.hpp"

namespace enttemp::checks {

namespace {

CheckResult near(std::string name, double measured, double expected, double tol) {
  return {std::move(name), std::abs(measured - expected) <= tol, measured, expected, tol, false, ""};
}

CheckResult within(std::string name, double measured, double lo, double hi) {
  return {std::move(name), measured >= lo && measured <= hi, measured, nlohmann::json::array({lo, hi}), 0.0, false,
          ""};
}

CheckResult at_least(std::string name, double measured, double bound, double tol) {
  return {std::move(name), measured >= bound - tol, measured, nlohmann::json::array({bound, nullptr}), tol, false,
          ""};
}

CheckResult at_most(std::string name, double measured, double bound, double tol) {
  return {std::move(name), measured <= bound + tol, measured, nlohmann::json::array({nullptr, bound}), tol, false,
          ""};
}

CheckResult info(std::string name, double measured, double expected, std::string note) {
  return {std::move(name), true, measured, expected, 0.0, true, std::move(note)};
}

std::vector<CheckResult> method1() {
  std::vector<CheckResult> out;
  const auto half = oracles::method1_ansatz(100, 50);
  out.push_back(within("delta_e_per_pair_at_half_extraction", half.delta_e / 50.0, 0.37, 0.38));
  out.push_back(at_most("entropy_equation_residual", half.residual, 0.0, 1e-10));
  out.push_back(near("alpha_squared_at_half_extraction", half.alpha * half.alpha, 0.8900, 5e-4));
  out.push_back(near("full_extraction_cost", oracles::method1_ansatz(8, 8).delta_e, 4.0, 1e-12));
  out.push_back(near("zero_extraction_cost", oracles::method1_ansatz(8, 0).delta_e, 0.0, 1e-12));
  double worst = 0.0;
  for (std::size_t m = 1; m <= 20; ++m) worst = std::max(worst, oracles::method1_ansatz(20, m).delta_e / m);
  out.push_back(at_most("max_cost_per_pair_n20", worst, 0.5, 1e-12));
  return out;
}

std::vector<CheckResult> method2() {
  std::vector<CheckResult> out;
  out.push_back(near("cost_m1", oracles::method2_cost(1), 0.5, 1e-15));
  out.push_back(near("bound_m1", oracles::method2_overlap_bound(1), std::sqrt(0.5), 1e-15));
  out.push_back(near("cost_m0", oracles::method2_cost(0), 0.0, 1e-15));
  for (std::size_t m : {1u, 2u})
    out.push_back(near("optimized_overlap_n3_m" + std::to_string(m), oracles::method2_optimized_overlap(3, m),
                       oracles::method2_overlap_bound(m), 1e-6));
  return out;
}

std::vector<CheckResult> toy() {
  std::vector<CheckResult> out;
  const LocalHamiltonian h = toy_model(4);
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto r = oneshot::min_energy_at_rank(h, std::size_t{1} << (4 - m));
    out.push_back(near("min_energy_n4_m" + std::to_string(m), r.delta_e, 0.5 * m, 1e-6));
  }
  out.push_back(near("full_rank_cost", oneshot::min_energy_at_rank(h, 16).delta_e, 0.0, 1e-12));
  out.push_back(near("toy_cost_10_3", oneshot::toy_cost(10, 3), 1.5, 0.0));
  return out;
}

std::vector<CheckResult> channel() {
  std::vector<CheckResult> out;
  out.push_back(near("identity_channel", oracles::channel_energy_cost(oracles::KrausChannel::identity(2), pauli::z()),
                     0.0, 1e-12));
  out.push_back(near("depolarizing_pauli_z",
                     oracles::channel_energy_cost(oracles::KrausChannel::depolarizing_qubit(), pauli::z()), 1.0,
                     1e-12));
  // Replacement by the ground state of a seeded random qutrit Hamiltonian.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix a(3, 3);
  for (Eigen::Index c = 0; c < 3; ++c)
    for (Eigen::Index r = 0; r < 3; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      a(r, c) = cplx(re, im);
    }
  const DenseMatrix h = a + a.adjoint();
  const linalg::Eigh e = linalg::eigh(h);
  const auto replace = oracles::KrausChannel::replacement(e.vectors.col(0));
  out.push_back(near("replacement_to_ground_qutrit", oracles::channel_energy_cost(replace, h),
                     e.values[2] - e.values[0], 1e-10));
  return out;
}

std::vector<CheckResult> naive() {
  std::vector<CheckResult> out;
  out.push_back(near("haf4_bound", oracles::naive_protocol_bound(heisenberg_af(4)), 6.0, 1e-10));
  out.push_back(near("tfi4_bound", oracles::naive_protocol_bound(tfi_critical(4)), 2.0, 1e-10));
  const LocalHamiltonian toy2 = toy_model(2);
  out.push_back(at_most("toy2_full_extraction_within_bound", oneshot::min_energy_at_rank(toy2, 1).delta_e,
                        oracles::naive_protocol_bound(toy2), 1e-9));
  return out;
}

std::vector<CheckResult> fermion() {
  std::vector<CheckResult> out;
  for (std::size_t n : {4u, 6u, 8u}) {
    const FermionChainSpec spec{n, 1.0};
    out.push_back(near("ground_energy_N" + std::to_string(n), dense::ground_state(staggered_fermion_spin(spec)).energy,
                       oracles::fermion_ground_energy(spec), 1e-8));
  }
  out.push_back(near("ground_energy_N4_a0.5", oracles::fermion_ground_energy({4, 0.5}), 6.0, 1e-12));
  for (double a : {1.0, 0.5}) {
    const auto b = oracles::fermion_product_bound({8, a}, 1000, 3);
    out.push_back(at_least(std::string(a == 1.0 ? "product_bound_N8_a1" : "product_bound_N8_a0.5"), b.minimum, b.bound, 1e-9));
  }
  const FermionChainSpec big{256, 1.0};
  out.push_back(info("energy_density_limit_N256", oracles::fermion_ground_energy(big) / 256.0, 1.0 - 1.0 / std::numbers::pi,
                     "E0 a / N; extensive, so E0 depends on a"));
  return out;
}

std::vector<CheckResult> scaling() {
  std::vector<CheckResult> out;
  const auto d1 = oracles::qft_scaling_curve({1, 1.0, 1.0}, {0.0, 1.0, 2.0});
  out.push_back(near("d1_at_zero", d1[0].delta_e, 1.0, 1e-12));
  out.push_back(near("d1_ratio_per_bit", d1[2].delta_e / d1[1].delta_e, 64.0, 1e-9));
  for (std::size_t d : {2u, 3u}) {
    const auto c = oracles::qft_scaling_curve({d, 1.0, 1.0}, {1.0, 2.0});
    const double dd = static_cast<double>(d);
    out.push_back(near("exponent_d" + std::to_string(d), std::log2(c[1].delta_e / c[0].delta_e), dd / (dd - 1.0),
                       1e-12));
  }
  return out;
}

std::vector<CheckResult> lagrange() {
  std::vector<CheckResult> out;
  const LocalHamiltonian h = toy_model(2);
  const auto sol = oracles::method1_ansatz(2, 1);
  out.push_back(at_most("method1_ansatz_best_fit",
                        oracles::lagrange_residual_best_fit(oracles::pair_product_state(h, sol.alpha, sol.beta), h)
                            .residual,
                        0.0, 1e-6));
  const LocalHamiltonian t = tfi_critical(6);
  const auto g = dense::ground_state(t);
  out.push_back(at_most("ground_state_eigenvector", oracles::lagrange_residual(g.vector, t, 0.0, -g.energy).residual,
                        0.0, 1e-9));
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  DenseVector psi(g.vector.size());
  for (auto& v : psi) {
    const double re = n(rng);
    const double im = n(rng);
    v = cplx(re, im);
  }
  out.push_back(at_least("random_state_not_stationary", oracles::lagrange_residual_best_fit(psi, t).residual, 0.01, 0.0));
  return out;
}

std::vector<CheckResult> perturbative() {
  std::vector<CheckResult> out;
  const LocalHamiltonian h = tfi_critical(8);
  const auto g = dense::ground_state(h);
  const auto c = method3::appendix_d_coefficients(g.vector, h, g.energy);
  auto entropy = [&](double eps) {
    return entropy_bits(dense::schmidt(method3::perturb_top_weight(g.vector, 8, 2, h.ab_cut(), eps), 8, 2, h.ab_cut()));
  };
  const double step = 1e-5;
  out.push_back(near("entropy_slope", (entropy(step) - entropy(-step)) / (2.0 * step), c.c1, 1e-4));
  const double eps = 1e-4;
  const double de = dense::expectation(h, method3::perturb_top_weight(g.vector, 8, 2, h.ab_cut(), eps)) - g.energy;
  out.push_back(near("energy_curvature_eps1e-4", de / (eps * eps) / c.c2, 1.0, 1e-3));
  return out;
}

std::vector<CheckResult> tebd() {
  std::vector<CheckResult> out;
  for (const char* model : {"haf:8", "tfi:8"}) {
    const LocalHamiltonian h = parse_model(model);
    const double exact = dense::ground_state(h).energy;
    const auto r = method3::find_ground(h, 32, method3::default_ground_schedule());
    out.push_back(near(std::string("relative_ground_error_") + model, std::abs(r.energy - exact) / std::abs(exact), 0.0,
                       1e-5));
  }
  return out;
}

std::vector<CheckResult> majorization() {
  std::vector<CheckResult> out;
  auto flag = [](bool b) { return b ? 1.0 : 0.0; };
  const auto bell = SchmidtSpectrum::normalized({1.0, 1.0});
  const auto product = SchmidtSpectrum::normalized({1.0});
  out.push_back(near("product_majorizes_bell", flag(oneshot::majorizes(product, bell)), 1.0, 0.0));
  out.push_back(near("bell_does_not_majorize_product", flag(oneshot::majorizes(bell, product)), 0.0, 0.0));
  out.push_back(near("partial_sums_example",
                     flag(oneshot::majorizes(SchmidtSpectrum::from_weights(std::vector<double>{0.6, 0.4}),
                                             SchmidtSpectrum::from_weights(std::vector<double>{0.5, 0.3, 0.2}))),
                     1.0, 0.0));
  out.push_back(near("final_rank_16_m1", static_cast<double>(oneshot::feasible_final_rank(16, 1)), 8.0, 0.0));
  return out;
}

const std::map<std::string, std::function<std::vector<CheckResult>()>>& registry() {
  static const std::map<std::string, std::function<std::vector<CheckResult>()>> suites = {
      {"channel", channel}, {"fermion", fermion}, {"lagrange", lagrange},
      {"majorization", majorization}, {"method1", method1}, {"method2", method2}, {"naive", naive},
      {"perturbative", perturbative}, {"scaling", scaling}, {"tebd", tebd}, {"toy", toy}};
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  const auto& suites = registry();
  const auto it = suites.find(name);
  if (it == suites.end()) throw InvalidInput("unknown check suite '" + name + "'");
  return it->second();
}

nlohmann::json to_json(const std::string& suite, const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json j = {{"name", r.name},
                        {"pass", r.passed},
                        {"measured", r.measured},
                        {"expected", r.expected},
                        {"tolerance", r.tolerance}};
    if (r.informational) j["informational"] = true;
    if (!r.note.empty()) j["note"] = r.note;
    checks.push_back(std::move(j));
  }
  return {{"suite", suite}, {"pass", all_passed(results)}, {"checks", checks}};
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace enttemp::checks
