#include "enttemp/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "enttemp/dense.hpp"
#include "enttemp/errors.hpp"

namespace enttemp {

namespace pauli {

DenseMatrix identity() { return DenseMatrix::Identity(2, 2); }

DenseMatrix x() {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

DenseMatrix y() {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

DenseMatrix z() {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

DenseMatrix raising() {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

DenseMatrix lowering() {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

}  // namespace pauli

void FermionChainSpec::validate() const {
  if (n_sites < 4 || n_sites % 2 != 0) throw InvalidInput("fermion chain: N must be even and >= 4");
  if (!(lattice_spacing > 0.0) || !std::isfinite(lattice_spacing))
    throw InvalidInput("fermion chain: lattice spacing must be positive");
}

LocalHamiltonian toy_model(std::size_t n_pairs) {
  if (n_pairs == 0) throw InvalidInput("toy_model: need at least one pair");
  DenseVector bell = DenseVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DenseMatrix term_op = DenseMatrix::Identity(4, 4) - bell * bell.adjoint();

  std::vector<HamiltonianTerm> terms;
  LocalHamiltonian::PairLayout layout;
  for (std::size_t j = 1; j <= n_pairs; ++j) {
    const std::size_t a_site = n_pairs - j;
    const std::size_t b_site = n_pairs - 1 + j;
    terms.push_back({{a_site, b_site}, term_op, {}});
    layout.emplace_back(a_site, b_site);
  }
  return LocalHamiltonian(2 * n_pairs, 2, std::move(terms), n_pairs, std::move(layout));
}

LocalHamiltonian heisenberg_af(std::size_t n_sites) {
  if (n_sites < 2) throw InvalidInput("heisenberg_af: need at least 2 sites");
  const DenseMatrix bond = linalg::kron(pauli::x(), pauli::x()) + linalg::kron(pauli::y(), pauli::y()) +
                           linalg::kron(pauli::z(), pauli::z());
  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i + 1 < n_sites; ++i) terms.push_back({{i, i + 1}, bond, {}});
  return LocalHamiltonian(n_sites, 2, std::move(terms), n_sites / 2);
}

LocalHamiltonian tfi_critical(std::size_t n_sites) {
  if (n_sites < 1) throw InvalidInput("tfi_critical: need at least 1 site");
  const DenseMatrix zz = -linalg::kron(pauli::z(), pauli::z());
  const DenseMatrix field = -pauli::x();
  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i + 1 < n_sites; ++i) terms.push_back({{i, i + 1}, zz, {}});
  for (std::size_t i = 0; i < n_sites; ++i) terms.push_back({{i}, field, {}});
  return LocalHamiltonian(n_sites, 2, std::move(terms), n_sites / 2);
}

LocalHamiltonian staggered_fermion_spin(const FermionChainSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  const double a = spec.lattice_spacing;
  const cplx hop(0.0, 1.0 / (2.0 * a));
  // psi_n^dag psi_{n+1} -> sigma+_n sigma-_{n+1}; its adjoint is sigma-_n sigma+_{n+1}.
  const DenseMatrix forward = linalg::kron(pauli::raising(), pauli::lowering());
  const DenseMatrix backward = linalg::kron(pauli::lowering(), pauli::raising());

  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i + 1 < n; ++i) terms.push_back({{i, i + 1}, hop * (forward - backward), {}});

  // Wrap-around hop psi_{N-1}^dag psi_0 = sigma-_0 (Z_1..Z_{N-2}) sigma+_{N-1}.
  std::vector<std::size_t> string(n - 2);
  std::iota(string.begin(), string.end(), std::size_t{1});
  terms.push_back({{0, n - 1}, hop * (backward - forward), string});

  for (std::size_t i = 0; i < n; ++i) terms.push_back({{i}, (1.0 / a) * pauli::identity(), {}});
  return LocalHamiltonian(n, 2, std::move(terms), n / 2);
}

double interaction_norm(const LocalHamiltonian& h) {
  const std::vector<HamiltonianTerm> crossing = h.crossing_terms();
  if (crossing.empty()) return 0.0;

  auto support = [](const HamiltonianTerm& t) {
    std::vector<std::size_t> s = t.sites;
    s.insert(s.end(), t.parity_string.begin(), t.parity_string.end());
    return s;
  };

  // Union-find over terms sharing a site.
  std::vector<std::size_t> parent(crossing.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<std::size_t, std::size_t> owner;
  for (std::size_t t = 0; t < crossing.size(); ++t) {
    for (auto s : support(crossing[t])) {
      auto [it, fresh] = owner.emplace(s, t);
      if (!fresh) parent[find(t)] = find(it->second);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t t = 0; t < crossing.size(); ++t) clusters[find(t)].push_back(t);

  double lo_sum = 0.0;
  double hi_sum = 0.0;
  for (const auto& [root, members] : clusters) {
    std::vector<std::size_t> sites;
    for (auto t : members) {
      auto s = support(crossing[t]);
      sites.insert(sites.end(), s.begin(), s.end());
    }
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    if (sites.size() > dense::kMaxMatrixSites)
      throw ResourceLimit("interaction_norm: crossing-term cluster too large for dense evaluation");

    auto local = [&](std::size_t s) {
      return static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), s) - sites.begin());
    };
    std::vector<HamiltonianTerm> remapped;
    for (auto t : members) {
      HamiltonianTerm r = crossing[t];
      for (auto& s : r.sites) s = local(s);
      for (auto& s : r.parity_string) s = local(s);
      remapped.push_back(std::move(r));
    }
    const std::size_t k = sites.size();
    const LocalHamiltonian sub(k, h.phys_dim(), std::move(remapped), k > 1 ? 1 : 0);
    const DenseMatrix m = dense::matrix(sub);
    const linalg::Eigh low = linalg::eigh_lowest(m, 1);
    const linalg::Eigh high = linalg::eigh_lowest(DenseMatrix(-m), 1);
    lo_sum += low.values[0];
    hi_sum += -high.values[0];
  }
  return std::max(std::abs(lo_sum), std::abs(hi_sum));
}

LocalHamiltonian parse_model(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto count = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw InvalidInput("model spec '" + spec + "': bad integer '" + s + "'");
    }
    if (pos != s.size() || v < 0) throw InvalidInput("model spec '" + spec + "': bad integer '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  if (parts.size() == 2 && parts[0] == "toy") return toy_model(count(parts[1]));
  if (parts.size() == 2 && parts[0] == "haf") return heisenberg_af(count(parts[1]));
  if (parts.size() == 2 && parts[0] == "tfi") return tfi_critical(count(parts[1]));
  if (parts.size() == 3 && parts[0] == "fermion") {
    double a = 0.0;
    std::size_t pos = 0;
    try {
      a = std::stod(parts[2], &pos);
    } catch (const std::exception&) {
      throw InvalidInput("model spec '" + spec + "': bad lattice spacing");
    }
    if (pos != parts[2].size()) throw InvalidInput("model spec '" + spec + "': bad lattice spacing");
    return staggered_fermion_spin({count(parts[1]), a});
  }
  throw InvalidInput("unknown model spec '" + spec + "' (expected toy:<n>, haf:<N>, tfi:<N> or fermion:<N>:<a>)");
}

}  // namespace enttemp
