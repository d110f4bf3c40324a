#include "enttemp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "enttemp/errors.hpp"

namespace enttemp {

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw InvalidInput("SchmidtSpectrum: empty");
  double norm = 0.0;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    const double c = coefficients_[i];
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("SchmidtSpectrum: coefficients must be finite and nonnegative");
    if (i > 0 && c > coefficients_[i - 1]) throw InvalidInput("SchmidtSpectrum: coefficients must be descending");
    norm += c * c;
  }
  if (std::abs(norm - 1.0) > kNormTol) throw InvalidInput("SchmidtSpectrum: sum of squares is not 1");
}

SchmidtSpectrum SchmidtSpectrum::normalized(std::vector<double> coefficients) {
  if (coefficients.empty()) throw InvalidInput("SchmidtSpectrum: empty");
  std::stable_sort(coefficients.begin(), coefficients.end(), std::greater<>());
  double norm = 0.0;
  for (double c : coefficients) norm += c * c;
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("SchmidtSpectrum: zero or non-finite norm");
  norm = std::sqrt(norm);
  for (double& c : coefficients) c /= norm;
  return SchmidtSpectrum(std::move(coefficients));
}

SchmidtSpectrum SchmidtSpectrum::from_weights(std::span<const double> weights) {
  std::vector<double> c;
  c.reserve(weights.size());
  for (double w : weights) {
    if (w < 0.0) throw InvalidInput("SchmidtSpectrum: negative weight");
    c.push_back(std::sqrt(w));
  }
  return normalized(std::move(c));
}

std::vector<double> SchmidtSpectrum::weights() const {
  std::vector<double> w(coefficients_.size());
  std::transform(coefficients_.begin(), coefficients_.end(), w.begin(), [](double c) { return c * c; });
  return w;
}

double entropy_bits(const SchmidtSpectrum& spectrum) {
  double s = 0.0;
  for (double c : spectrum.coefficients()) {
    const double p = c * c;
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

double renyi0_bits(const SchmidtSpectrum& spectrum, double tol) {
  const auto rank = std::count_if(spectrum.coefficients().begin(), spectrum.coefficients().end(),
                                  [tol](double c) { return c * c > tol; });
  return rank > 0 ? std::log2(static_cast<double>(rank)) : 0.0;
}

double binary_entropy_bits(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace enttemp
