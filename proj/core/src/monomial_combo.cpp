#include "sgsp/monomial_combo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgsp {

namespace {

bool same_exponent(const std::complex<double>& a, const std::complex<double>& b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

MonomialCombo::MonomialCombo(std::vector<MonomialTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (!std::isfinite(t.exponent.real()) || !std::isfinite(t.exponent.imag()) ||
            !std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
            throw std::invalid_argument("monomial terms must be finite");
    }
    std::sort(terms_.begin(), terms_.end(), [](const MonomialTerm& a, const MonomialTerm& b) {
        if (a.exponent.real() != b.exponent.real()) return a.exponent.real() < b.exponent.real();
        return a.exponent.imag() < b.exponent.imag();
    });
    std::vector<MonomialTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && same_exponent(merged.back().exponent, t.exponent))
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const MonomialTerm& t) { return std::abs(t.coefficient) == 0.0; });
    terms_ = std::move(merged);
}

MonomialCombo MonomialCombo::monomial(std::complex<double> exponent,
                                      std::complex<double> coefficient) {
    return MonomialCombo({MonomialTerm{exponent, coefficient}});
}

std::complex<double> MonomialCombo::eval(double x) const {
    if (!(x > 0)) throw std::invalid_argument("monomial combos evaluate on x > 0");
    double lx = std::log(x);
    std::complex<double> acc = 0.0;
    for (const auto& t : terms_) acc += t.coefficient * std::exp(t.exponent * lx);
    return acc;
}

MonomialCombo lin_comb(std::complex<double> alpha, const MonomialCombo& u,
                       std::complex<double> beta, const MonomialCombo& w) {
    std::vector<MonomialTerm> terms;
    terms.reserve(u.terms().size() + w.terms().size());
    for (const auto& t : u.terms()) terms.push_back({t.exponent, alpha * t.coefficient});
    for (const auto& t : w.terms()) terms.push_back({t.exponent, beta * t.coefficient});
    return MonomialCombo(std::move(terms));
}

SupNormResult y_stau_norm(const MonomialCombo& u, const SpaceParams& params,
                          const LogGridOptions& grid) {
    params.validate();
    SupNormResult out;
    out.arg_x = grid.x_lo;
    if (u.zero()) return out;

    double l_lo = std::log(grid.x_lo);
    double l_hi = std::log(grid.x_hi);
    double decades = (l_hi - l_lo) / std::log(10.0);
    size_t count = size_t(decades * grid.points_per_decade) + 1;
    double dl = (l_hi - l_lo) / double(count - 1);

    // Large real exponents would overflow the stepping products; fall back to
    // per-point log-magnitude evaluation in that case.
    double worst = 0.0;
    for (const auto& t : u.terms()) {
        double m = std::max(std::abs(t.exponent.real() * l_lo), std::abs(t.exponent.real() * l_hi));
        worst = std::max(worst, m + std::log(std::max(std::abs(t.coefficient), 1e-300)));
    }
    bool log_safe_path = worst > 600.0;

    const auto& terms = u.terms();
    std::vector<std::complex<double>> val(terms.size()), mul(terms.size());
    if (!log_safe_path) {
        for (size_t k = 0; k < terms.size(); ++k) {
            val[k] = terms[k].coefficient * std::exp(terms[k].exponent * l_lo);
            mul[k] = std::exp(terms[k].exponent * dl);
        }
    }

    for (size_t j = 0; j < count; ++j) {
        double l = l_lo + double(j) * dl;
        double log_den = 0.0;
        {
            double es = params.s * l;
            log_den += es > 40 ? es : std::log1p(std::exp(es));
            double et = -params.tau_y * l;
            log_den += et > 40 ? et : std::log1p(std::exp(et));
        }
        double ratio;
        if (log_safe_path) {
            double m = -std::numeric_limits<double>::infinity();
            for (const auto& t : terms)
                m = std::max(m, t.exponent.real() * l + std::log(std::max(std::abs(t.coefficient), 1e-300)));
            std::complex<double> acc = 0.0;
            for (const auto& t : terms)
                acc += t.coefficient * std::exp(t.exponent * l - m);
            double la = m + std::log(std::max(std::abs(acc), 1e-300));
            ratio = std::exp(la - log_den);
        } else {
            std::complex<double> acc = 0.0;
            for (size_t k = 0; k < terms.size(); ++k) acc += val[k];
            ratio = std::abs(acc) / std::exp(log_den);
            for (size_t k = 0; k < terms.size(); ++k) val[k] *= mul[k];
        }
        if (ratio > out.value) {
            out.value = ratio;
            out.arg_x = std::exp(l);
        }
    }
    return out;
}

}  // namespace sgsp
