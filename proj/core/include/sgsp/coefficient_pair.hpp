#pragma once

#include <complex>
#include <vector>

namespace sgsp {

/// Truncated element of the coefficient-space product: the pair represents
/// (sum a_n rho^n x^n / n!, sum b_n rho^n x^n / n!) with both coefficient
/// vectors cut at the same order. The pair norm is the larger of the two
/// coefficient sups.
class CoefficientPair {
  public:
    using Complex = std::complex<double>;

    CoefficientPair(double rho, std::vector<Complex> a, std::vector<Complex> b);

    static CoefficientPair zeros(double rho, size_t n_trunc);

    double rho() const { return rho_; }
    size_t n_trunc() const { return a_.size() - 1; }
    const std::vector<Complex>& a() const { return a_; }
    const std::vector<Complex>& b() const { return b_; }
    std::vector<Complex>& a() { return a_; }
    std::vector<Complex>& b() { return b_; }

    /// Zero-padded copy with `extra` more coefficients per component.
    CoefficientPair embedded(size_t extra) const;
    /// Copy cut back to order n (n <= n_trunc).
    CoefficientPair truncated(size_t n) const;

  private:
    double rho_;
    std::vector<Complex> a_, b_;
};

double x_rho_norm(const CoefficientPair& u);

CoefficientPair lin_comb(std::complex<double> alpha, const CoefficientPair& u,
                         std::complex<double> beta, const CoefficientPair& w);

}  // namespace sgsp
