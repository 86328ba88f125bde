#include "sgsp/coefficient_pair.hpp"

#include <cmath>
#include <stdexcept>

namespace sgsp {

CoefficientPair::CoefficientPair(double rho, std::vector<Complex> a, std::vector<Complex> b)
    : rho_(rho), a_(std::move(a)), b_(std::move(b)) {
    if (!(rho_ > 0)) throw std::invalid_argument("coefficient pair needs rho > 0");
    if (a_.empty() || a_.size() != b_.size())
        throw std::invalid_argument("coefficient components must share one truncation order");
    for (const Complex& c : a_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("coefficients must be finite");
    for (const Complex& c : b_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("coefficients must be finite");
}

CoefficientPair CoefficientPair::zeros(double rho, size_t n_trunc) {
    return CoefficientPair(rho, std::vector<Complex>(n_trunc + 1),
                           std::vector<Complex>(n_trunc + 1));
}

CoefficientPair CoefficientPair::embedded(size_t extra) const {
    std::vector<Complex> a = a_, b = b_;
    a.resize(a.size() + extra);
    b.resize(b.size() + extra);
    return CoefficientPair(rho_, std::move(a), std::move(b));
}

CoefficientPair CoefficientPair::truncated(size_t n) const {
    if (n > n_trunc()) throw std::invalid_argument("cannot truncate upward");
    std::vector<Complex> a(a_.begin(), a_.begin() + long(n) + 1);
    std::vector<Complex> b(b_.begin(), b_.begin() + long(n) + 1);
    return CoefficientPair(rho_, std::move(a), std::move(b));
}

double x_rho_norm(const CoefficientPair& u) {
    double m = 0;
    for (const auto& c : u.a()) m = std::max(m, std::abs(c));
    for (const auto& c : u.b()) m = std::max(m, std::abs(c));
    return m;
}

CoefficientPair lin_comb(std::complex<double> alpha, const CoefficientPair& u,
                         std::complex<double> beta, const CoefficientPair& w) {
    if (std::abs(u.rho() - w.rho()) > 1e-12 * u.rho())
        throw std::invalid_argument("lin_comb needs equal rho");
    size_t n = std::max(u.n_trunc(), w.n_trunc());
    std::vector<std::complex<double>> a(n + 1), b(n + 1);
    for (size_t j = 0; j <= n; ++j) {
        std::complex<double> ua = j < u.a().size() ? u.a()[j] : 0.0;
        std::complex<double> ub = j < u.b().size() ? u.b()[j] : 0.0;
        std::complex<double> wa = j < w.a().size() ? w.a()[j] : 0.0;
        std::complex<double> wb = j < w.b().size() ? w.b()[j] : 0.0;
        a[j] = alpha * ua + beta * wa;
        b[j] = alpha * ub + beta * wb;
    }
    return CoefficientPair(u.rho(), std::move(a), std::move(b));
}

}  // namespace sgsp
