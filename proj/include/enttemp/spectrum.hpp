#pragma once

#include <span>
#include <vector>

namespace enttemp {

/// Schmidt coefficients across a bipartition, descending, with sum of squares 1.
class SchmidtSpectrum {
 public:
  static constexpr double kNormTol = 1e-10;

  SchmidtSpectrum() = default;

  /// Validates order, sign and normalization. Throws InvalidInput otherwise.
  explicit SchmidtSpectrum(std::vector<double> coefficients);

  /// Sorts descending, drops nothing, rescales to unit norm.
  static SchmidtSpectrum normalized(std::vector<double> coefficients);

  /// Builds from probability weights p = lambda^2.
  static SchmidtSpectrum from_weights(std::span<const double> weights);

  const std::vector<double>& coefficients() const { return coefficients_; }
  std::vector<double> weights() const;
  std::size_t size() const { return coefficients_.size(); }
  double operator[](std::size_t i) const { return coefficients_[i]; }

 private:
  std::vector<double> coefficients_;
};

/// Von Neumann entropy of the squared weights, in bits (0 log 0 = 0).
double entropy_bits(const SchmidtSpectrum& spectrum);

/// log2 of the number of weights lambda^2 strictly above `tol`.
double renyi0_bits(const SchmidtSpectrum& spectrum, double tol = 1e-12);

/// Binary entropy h2(p) in bits.
double binary_entropy_bits(double p);

}  // namespace enttemp
