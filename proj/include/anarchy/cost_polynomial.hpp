#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace anarchy {

/// Polynomial link latency c(f) = sum_k coeff[k] * f^k with non-negative
/// coefficients, so c is convex and non-decreasing on f >= 0.
class CostPolynomial {
 public:
  CostPolynomial() = default;
  explicit CostPolynomial(std::vector<double> coefficients)
      : coeffs_(std::move(coefficients)) {}

  static CostPolynomial constant(double c) { return CostPolynomial({c}); }

  /// x^p with a constant offset, p a non-negative integer exponent.
  static CostPolynomial monomial(int p, double scale = 1.0, double offset = 0.0) {
    std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
    c[0] = offset;
    c[static_cast<std::size_t>(p)] += scale;
    return CostPolynomial(std::move(c));
  }

  const std::vector<double>& coefficients() const { return coeffs_; }

  bool all_coefficients_nonnegative() const {
    for (double c : coeffs_)
      if (c < 0.0) return false;
    return true;
  }

  double value(double f) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * f + coeffs_[k];
    return v;
  }

  double derivative(double f) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;)
      v = v * f + coeffs_[k] * static_cast<double>(k);
    return v;
  }

  /// Integral from 0 to f, the per-link term of the Beckmann potential.
  double integral(double f) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;)
      v = v * f + coeffs_[k] / static_cast<double>(k + 1);
    return v * f;
  }

 private:
  std::vector<double> coeffs_;
};

}  // namespace anarchy
