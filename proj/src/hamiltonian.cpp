#include "enttemp/hamiltonian.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "enttemp/errors.hpp"

namespace enttemp {

std::size_t HamiltonianTerm::first_site() const {
  std::size_t lo = *std::min_element(sites.begin(), sites.end());
  for (auto s : parity_string) lo = std::min(lo, s);
  return lo;
}

std::size_t HamiltonianTerm::last_site() const {
  std::size_t hi = *std::max_element(sites.begin(), sites.end());
  for (auto s : parity_string) hi = std::max(hi, s);
  return hi;
}

LocalHamiltonian::LocalHamiltonian(std::size_t n_sites, std::size_t phys_dim, std::vector<HamiltonianTerm> terms,
                                   std::size_t ab_cut, std::optional<PairLayout> pair_layout)
    : n_sites_(n_sites), phys_dim_(phys_dim), terms_(std::move(terms)), ab_cut_(ab_cut),
      pair_layout_(std::move(pair_layout)) {
  if (n_sites_ == 0 || phys_dim_ < 2) throw InvalidInput("LocalHamiltonian: need at least one site of dimension >= 2");
  // A single site has no bond; ab_cut 0 then means "no bipartition".
  if (n_sites_ == 1 ? ab_cut_ != 0 : (ab_cut_ < 1 || ab_cut_ >= n_sites_))
    throw InvalidInput("LocalHamiltonian: ab_cut out of range");

  for (const auto& t : terms_) {
    if (t.sites.empty() || t.sites.size() > 2) throw InvalidInput("LocalHamiltonian: terms act on one or two sites");
    std::set<std::size_t> seen(t.sites.begin(), t.sites.end());
    if (seen.size() != t.sites.size()) throw InvalidInput("LocalHamiltonian: repeated site in term");
    if (t.sites.size() == 2 && t.sites[0] > t.sites[1]) throw InvalidInput("LocalHamiltonian: term sites must ascend");
    for (auto s : t.sites)
      if (s >= n_sites_) throw InvalidInput("LocalHamiltonian: term site out of range");
    for (auto s : t.parity_string) {
      if (s >= n_sites_ || seen.count(s)) throw InvalidInput("LocalHamiltonian: bad parity string site");
    }
    if (!t.parity_string.empty() && phys_dim_ != 2)
      throw InvalidInput("LocalHamiltonian: parity strings need qubit sites");
    Eigen::Index dim = 1;
    for (std::size_t k = 0; k < t.sites.size(); ++k) dim *= static_cast<Eigen::Index>(phys_dim_);
    if (t.op.rows() != dim || t.op.cols() != dim) throw InvalidInput("LocalHamiltonian: term matrix has wrong shape");
    if (!linalg::is_hermitian(t.op)) throw InvalidInput("LocalHamiltonian: term is not Hermitian");
  }

  if (pair_layout_) {
    std::set<std::size_t> used;
    for (auto [a, b] : *pair_layout_) {
      if (a >= n_sites_ || b >= n_sites_ || !used.insert(a).second || !used.insert(b).second)
        throw InvalidInput("LocalHamiltonian: pair layout sites must be distinct and in range");
    }
  }
}

bool LocalHamiltonian::crosses_cut(const HamiltonianTerm& term) const {
  return term.first_site() < ab_cut_ && term.last_site() >= ab_cut_;
}

std::vector<HamiltonianTerm> LocalHamiltonian::crossing_terms() const {
  std::vector<HamiltonianTerm> out;
  std::copy_if(terms_.begin(), terms_.end(), std::back_inserter(out), [this](const auto& t) { return crosses_cut(t); });
  return out;
}

bool LocalHamiltonian::nearest_neighbour() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const HamiltonianTerm& t) {
    if (!t.parity_string.empty()) return false;
    if (t.sites.size() == 1) return true;
    return t.sites[1] == t.sites[0] + 1;
  });
}

bool LocalHamiltonian::real_valued() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const HamiltonianTerm& t) { return t.op.imag().cwiseAbs().maxCoeff() == 0.0; });
}

}  // namespace enttemp
