#pragma once

#include <complex>
#include <vector>

#include "sgsp/space_params.hpp"

namespace sgsp {

struct MonomialTerm {
    std::complex<double> exponent;     // beta
    std::complex<double> coefficient;  // c, for the term c * x^beta on x > 0
};

/// Finite combination of complex-power monomials. Terms are kept sorted with
/// duplicate exponents merged, so exponents within a combo stay distinct.
class MonomialCombo {
  public:
    MonomialCombo() = default;
    explicit MonomialCombo(std::vector<MonomialTerm> terms);

    static MonomialCombo monomial(std::complex<double> exponent,
                                  std::complex<double> coefficient = 1.0);

    const std::vector<MonomialTerm>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    std::complex<double> eval(double x) const;  // x > 0

  private:
    std::vector<MonomialTerm> terms_;
};

MonomialCombo lin_comb(std::complex<double> alpha, const MonomialCombo& u,
                       std::complex<double> beta, const MonomialCombo& w);

struct SupNormResult {
    double value = 0.0;
    double arg_x = 0.0;
};

struct LogGridOptions {
    double x_lo = 1e-8;
    double x_hi = 1e8;
    int points_per_decade = 4096;
};

/// sup_x |u(x)| / ((1 + x^s)(1 + x^{-tau_y})) estimated on a fixed
/// logarithmic grid; extreme exponents fall back to log-magnitude arithmetic.
SupNormResult y_stau_norm(const MonomialCombo& u, const SpaceParams& params,
                          const LogGridOptions& grid = {});

}  // namespace sgsp
