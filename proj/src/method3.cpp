#include "enttemp/method3.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"

namespace enttemp::method3 {

namespace {

struct TrotterGates {
  std::vector<DenseMatrix> half;  // exp(-tau/2 h_b)
  std::vector<DenseMatrix> full;  // exp(-tau h_b)
};

TrotterGates make_gates(const std::vector<DenseMatrix>& bonds, double tau) {
  TrotterGates g;
  g.half.reserve(bonds.size());
  g.full.reserve(bonds.size());
  for (const auto& hb : bonds) {
    const linalg::Eigh e = linalg::eigh(hb);
    auto build = [&](double t) -> DenseMatrix {
      const Eigen::VectorXcd f = (-t * e.values.array()).exp().cast<cplx>();
      return e.vectors * f.asDiagonal() * e.vectors.adjoint();
    };
    g.half.push_back(build(0.5 * tau));
    g.full.push_back(build(tau));
  }
  return g;
}

void trotter_sweep(MatrixProductState& state, const TrotterGates& gates, std::size_t chi_max, double tol) {
  const std::size_t n_bonds = gates.full.size();
  for (std::size_t b = 0; b < n_bonds; b += 2) state.apply_two_site(b, gates.half[b], chi_max, tol, true);
  if (n_bonds > 1) {
    std::size_t b = (n_bonds - 1) % 2 == 1 ? n_bonds - 1 : n_bonds - 2;
    for (;; b -= 2) {
      state.apply_two_site(b, gates.full[b], chi_max, tol, false);
      if (b < 3) break;
    }
  }
  for (std::size_t b = 0; b < n_bonds; b += 2) state.apply_two_site(b, gates.half[b], chi_max, tol, true);
}

void require_match(const MatrixProductState& state, const LocalHamiltonian& h, const char* what) {
  if (state.n_sites() != h.n_sites() || state.phys_dim() != h.phys_dim())
    throw InvalidInput(std::string(what) + ": state and Hamiltonian shapes differ");
}

// FNV-1a, 64 bit.
struct Digest {
  std::uint64_t value = 1469598103934665603ull;
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      value ^= (word >> (8 * i)) & 0xffu;
      value *= 1099511628211ull;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
  }
};

double cut_entropy(const MatrixProductState& state, std::size_t bond) { return entropy_bits(schmidt(state, bond)); }

}  // namespace

void SamplerConfig::validate() const {
  if (!(tau_min > 0.0) || !(tau_max >= tau_min)) throw InvalidInput("sampler: need 0 < tau_min <= tau_max");
  if (!(epsilon_min >= 0.0) || !(epsilon_max > epsilon_min))
    throw InvalidInput("sampler: need 0 <= epsilon_min < epsilon_max");
  if (epsilon_log_uniform && !(epsilon_min > 0.0))
    throw InvalidInput("sampler: log-uniform epsilon needs epsilon_min > 0");
  if (chi_max == 0) throw InvalidInput("sampler: chi_max must be >= 1");
  if (!(truncation_tol >= 0.0)) throw InvalidInput("sampler: truncation tolerance must be >= 0");
}

std::vector<DenseMatrix> bond_hamiltonians(const LocalHamiltonian& h) {
  if (!h.nearest_neighbour()) throw InvalidInput("TEBD needs a nearest-neighbour Hamiltonian");
  const std::size_t n = h.n_sites();
  if (n < 2) throw InvalidInput("TEBD needs at least two sites");
  const auto d = static_cast<Eigen::Index>(h.phys_dim());
  const DenseMatrix id = DenseMatrix::Identity(d, d);
  std::vector<DenseMatrix> bonds(n - 1, DenseMatrix::Zero(d * d, d * d));
  for (const auto& t : h.terms()) {
    if (t.sites.size() == 2) {
      bonds[t.sites[0]] += t.op;
      continue;
    }
    const std::size_t i = t.sites[0];
    const double share = (i == 0 || i + 1 == n) ? 1.0 : 0.5;
    if (i > 0) bonds[i - 1] += share * linalg::kron(id, t.op);
    if (i + 1 < n) bonds[i] += share * linalg::kron(t.op, id);
  }
  return bonds;
}

MatrixProductState imaginary_step(const MatrixProductState& state, const LocalHamiltonian& h, double tau,
                                  std::size_t chi_max, double tol) {
  require_match(state, h, "imaginary_step");
  if (!(tau > 0.0)) throw InvalidInput("imaginary_step: tau must be positive");
  if (chi_max == 0) throw InvalidInput("imaginary_step: chi_max must be >= 1");
  const TrotterGates gates = make_gates(bond_hamiltonians(h), tau);
  MatrixProductState out = state;
  trotter_sweep(out, gates, chi_max, tol);
  return out;
}

std::vector<GroundStage> default_ground_schedule() {
  return {{0.2, 200}, {0.1, 400}, {0.05, 600}, {0.02, 1500}, {0.01, 3000}};
}

GroundResult find_ground(const LocalHamiltonian& h, std::size_t chi_max, const std::vector<GroundStage>& schedule,
                         double tol, std::uint64_t seed) {
  if (schedule.empty()) throw InvalidInput("find_ground: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i].tau > 0.0)) throw InvalidInput("find_ground: taus must be positive");
    if (i > 0 && schedule[i].tau > schedule[i - 1].tau) throw InvalidInput("find_ground: taus must decrease");
  }
  const auto bonds = bond_hamiltonians(h);
  constexpr std::size_t kCheckEvery = 5;

  GroundResult result{random_mps(h.n_sites(), h.phys_dim(), std::min<std::size_t>(chi_max, 4), seed), 0.0, 0};
  result.energy = energy(result.state, h);
  bool settled = false;
  for (const auto& stage : schedule) {
    const TrotterGates gates = make_gates(bonds, stage.tau);
    settled = false;
    double last = result.energy;
    for (std::size_t step = 1; step <= stage.steps; ++step) {
      trotter_sweep(result.state, gates, chi_max, 1e-14);
      ++result.steps_taken;
      if (step % kCheckEvery != 0 && step != stage.steps) continue;
      const double e = energy(result.state, h);
      const std::size_t since = step % kCheckEvery == 0 ? kCheckEvery : step % kCheckEvery;
      const double per_step = std::abs(e - last) / static_cast<double>(since);
      last = e;
      result.energy = e;
      if (per_step < tol) {
        settled = true;
        break;
      }
    }
  }
  if (!settled)
    throw ConvergenceError("find_ground: energy still changing at the end of the schedule", std::move(result));
  return result;
}

GroundResult refine_ground(const LocalHamiltonian& h, GroundResult tebd, std::size_t chi_max) {
  require_match(tebd.state, h, "refine_ground");
  if (h.n_sites() > 16) return tebd;
  const dense::GroundState exact = dense::lanczos_ground(h, to_dense(tebd.state));
  tebd.state = truncate(from_dense(exact.vector, h.n_sites(), h.phys_dim()), chi_max, 1e-14);
  tebd.energy = energy(tebd.state, h);
  return tebd;
}

MatrixProductState sharpen(const MatrixProductState& state, std::size_t bond, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInput("sharpen: epsilon must be >= 0");
  if (bond < 1 || bond >= state.n_sites()) throw InvalidInput("sharpen: bond out of range");
  MatrixProductState out = state;
  const double power = 1.0 + epsilon;
  out.reweight_bond(bond, [power](const std::vector<double>& s) {
    std::vector<double> w(s.size());
    std::transform(s.begin(), s.end(), w.begin(), [power](double v) { return v > 0.0 ? std::pow(v, power) : 0.0; });
    return w;
  });
  return out;
}

std::vector<TradeoffPoint> sample_tradeoff(const LocalHamiltonian& h, const MatrixProductState& ground, double e0,
                                           const SamplerConfig& cfg) {
  cfg.validate();
  require_match(ground, h, "sample_tradeoff");
  const std::size_t cut = h.ab_cut();
  if (cut < 1) throw InvalidInput("sample_tradeoff: model has no bipartition");
  const auto bonds = bond_hamiltonians(h);
  const double s_ground = cut_entropy(ground, cut);

  std::vector<std::vector<TradeoffPoint>> per_sample(cfg.n_samples);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t idx = next++; idx < cfg.n_samples; idx = next++) {
      try {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        MatrixProductState state = idx % 2 == 0 ? ground : random_mps(h.n_sites(), h.phys_dim(), cfg.chi_max, rng());
        Digest digest;
        digest.add(idx);
        auto& out = per_sample[idx];
        for (std::size_t round = 0; round < cfg.rounds_per_sample; ++round) {
          if (unit(rng) < 0.5) {
            const double tau = std::exp(std::log(cfg.tau_min) + unit(rng) * std::log(cfg.tau_max / cfg.tau_min));
            trotter_sweep(state, make_gates(bonds, tau), cfg.chi_max, cfg.truncation_tol);
            digest.add('I');
            digest.add(std::bit_cast<std::uint64_t>(tau));
          } else {
            // (epsilon_min, epsilon_max]
            const double u = unit(rng);
            const double eps = cfg.epsilon_log_uniform
                                   ? cfg.epsilon_max * std::exp(-u * std::log(cfg.epsilon_max / cfg.epsilon_min))
                                   : cfg.epsilon_max - u * (cfg.epsilon_max - cfg.epsilon_min);
            state = sharpen(state, cut, eps);
            digest.add('S');
            digest.add(std::bit_cast<std::uint64_t>(eps));
          }
          const double ds = s_ground - cut_entropy(state, cut);
          if (!(ds > 0.0)) continue;
          out.push_back({energy(state, h) - e0, ds, idx, digest.hex()});
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          try {
            std::rethrow_exception(std::current_exception());
          } catch (const std::exception& e) {
            failure = std::make_exception_ptr(
                std::runtime_error("sample " + std::to_string(idx) + ": " + e.what()));
          }
        }
        return;
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(cfg.n_samples, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TradeoffPoint> merged;
  for (auto& v : per_sample) merged.insert(merged.end(), v.begin(), v.end());
  return merged;
}

ParetoFront pareto_front(const std::vector<TradeoffPoint>& points) {
  for (const auto& p : points)
    if (!std::isfinite(p.delta_e) || !std::isfinite(p.delta_s)) throw InvalidInput("pareto_front: non-finite point");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].delta_s != points[b].delta_s) return points[a].delta_s > points[b].delta_s;
    return points[a].delta_e < points[b].delta_e;
  });

  ParetoFront front;
  double best = std::numeric_limits<double>::infinity();  // lowest dE among strictly larger dS
  std::size_t i = 0;
  while (i < order.size()) {
    const double ds = points[order[i]].delta_s;
    const double group_min = points[order[i]].delta_e;
    std::size_t j = i;
    for (; j < order.size() && points[order[j]].delta_s == ds; ++j) {
      // Equal copies of the group minimum do not dominate each other.
      if (group_min < best && points[order[j]].delta_e == group_min) front.points.push_back(points[order[j]]);
    }
    best = std::min(best, group_min);
    i = j;
  }
  std::reverse(front.points.begin(), front.points.end());
  return front;
}

TemperatureCurve ent_temperature(const ParetoFront& front) {
  TemperatureCurve curve;
  for (const auto& p : front.points) {
    if (!(p.delta_s > 0.0)) {
      ++curve.excluded;
      continue;
    }
    curve.points.push_back({p.delta_s, p.delta_e, p.delta_e / p.delta_s});
  }
  if (curve.excluded > 0)
    std::fprintf(stderr, "warning: %zu front point(s) with delta_s <= 0 excluded from T_ent\n", curve.excluded);
  return curve;
}

PowerLawFit fit_temperature_power_law(const TemperatureCurve& curve, double max_delta_s, double min_delta_e) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& p : curve.points) {
    if (!(p.delta_s > 0.0) || p.delta_s > max_delta_s || !(p.delta_e > min_delta_e) || !(p.t_ent > 0.0)) continue;
    const double x = std::log(p.delta_s);
    const double y = std::log(p.t_ent);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  PowerLawFit fit;
  fit.used = n;
  if (n < 2) return fit;
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return fit;
  fit.exponent = (static_cast<double>(n) * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / static_cast<double>(n));
  return fit;
}

double energy_resolution(double e0) { return 1e-10 * std::max(1.0, std::abs(e0)); }

PerturbativeCoefficients appendix_d_coefficients(const DenseVector& ground, const LocalHamiltonian& h, double e0) {
  const std::size_t n = h.n_sites();
  const std::size_t d = h.phys_dim();
  const std::size_t cut = h.ab_cut();
  if (n > dense::kMaxMatrixSites) throw ResourceLimit("appendix_d_coefficients: chain too long for dense evaluation");
  if (cut < 1) throw InvalidInput("appendix_d_coefficients: model has no bipartition");
  const DenseVector psi = ground / ground.norm();
  const linalg::Svd f = linalg::svd(dense::bipartite_matrix(psi, n, d, cut));
  if (f.s.size() > 1 && f.s[0] * f.s[0] - f.s[1] * f.s[1] < 1e-10)
    throw Degeneracy("appendix_d_coefficients: leading Schmidt weight is degenerate");

  PerturbativeCoefficients c;
  c.top_weight = f.s[0] * f.s[0];
  c.entropy_bits = entropy_bits(SchmidtSpectrum::normalized(f.s));
  c.c1 = -(c.entropy_bits + std::log2(c.top_weight));

  const Eigen::Index right = f.v_dag.cols();
  DenseVector top(psi.size());
  for (Eigen::Index l = 0; l < f.u.rows(); ++l)
    for (Eigen::Index r = 0; r < right; ++r) top(l * right + r) = f.u(l, 0) * f.v_dag(0, r);
  const double h_top = top.dot(dense::apply(h, top)).real();
  c.c2 = (h_top - e0) / (4.0 * c.top_weight);
  return c;
}

DenseVector perturb_top_weight(const DenseVector& ground, std::size_t n_sites, std::size_t phys_dim, std::size_t bond,
                               double epsilon) {
  const linalg::Svd f = linalg::svd(dense::bipartite_matrix(ground / ground.norm(), n_sites, phys_dim, bond));
  std::vector<double> s = f.s;
  s[0] = std::sqrt(s[0] * s[0] + epsilon);
  DenseMatrix m = f.u * Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()))
                            .cast<cplx>()
                            .asDiagonal() *
                  f.v_dag;
  // Row-major flatten back to the dense basis order.
  DenseMatrix mt = m.transpose();
  DenseVector out = Eigen::Map<const DenseVector>(mt.data(), mt.size());
  return out / out.norm();
}

}  // namespace enttemp::method3
