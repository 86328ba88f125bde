#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sgsp/grid_function.hpp"
#include "sgsp/weight.hpp"

namespace sgsp {

/// Weighted L^p quadrature result. `value` is the composite-trapezoid
/// estimate over [0, horizon] raised to 1/p; `tail_mass` bounds the omitted
/// integral mass (un-raised) beyond the horizon via sup|f|^p times the
/// analytic tail of the weight.
struct LpNorm {
    enum class Verdict { Finite, Infinite, Unknown };
    double value = 0.0;
    double tail_mass = 0.0;
    double horizon = 0.0;
    double quadrature_step = 0.0;
    Verdict verdict = Verdict::Finite;
    double p = 1.0;

    bool finite() const { return verdict == Verdict::Finite; }
    /// Estimate with the tail mass folded in.
    double upper() const {
        if (verdict == Verdict::Infinite) return std::numeric_limits<double>::infinity();
        return std::pow(std::pow(value, p) + tail_mass, 1.0 / p);
    }
};

struct NormOptions {
    double rel_tol = 1e-9;       // stop when the tail mass is this small relatively
    double max_horizon = 1e6;    // hard cap on the quadrature horizon
    double fixed_horizon = 0.0;  // > 0: integrate exactly to here, skip adaptivity
    const std::vector<double>* weight_cache = nullptr;  // v at nodes j*step, optional
};

namespace detail {

inline double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

template <class T>
LpNorm weighted_lp(const BasicGridFunction<T>* a, const BasicGridFunction<T>* b,
                   const WeightFunction& v, double p, const NormOptions& opt) {
    if (!(p >= 1.0)) throw std::invalid_argument("L^p norms need p >= 1");
    const BasicGridFunction<T>& lead = a ? *a : *b;
    double h = lead.step();
    if (a && b && std::abs(a->step() - b->step()) > 1e-12 * h)
        throw std::invalid_argument("weighted distance needs equal grid steps");

    LpNorm out;
    out.p = p;
    out.quadrature_step = h;

    bool periodic = (a && a->extension() == Extension::Periodic) ||
                    (b && b->extension() == Extension::Periodic);
    double sup_per = 0.0;  // sup of whatever persists beyond the zero supports
    if (a && a->extension() == Extension::Periodic) sup_per += sup_abs(*a);
    if (b && b->extension() == Extension::Periodic) sup_per += sup_abs(*b);

    auto weight_at = [&](size_t j) -> double {
        if (opt.weight_cache && j < opt.weight_cache->size()) return (*opt.weight_cache)[j];
        return v(double(j) * h);
    };
    auto term_at = [&](size_t j) -> double {
        T va = a ? a->at_index(j) : T{};
        T vb = b ? b->at_index(j) : T{};
        return pow_p(detail::abs_sample(va - vb), p);
    };

    size_t j_support = 0;  // last node of the compactly supported parts
    if (a && a->extension() == Extension::Zero) j_support = std::max(j_support, a->n_samples() - 1);
    if (b && b->extension() == Extension::Zero) j_support = std::max(j_support, b->n_samples() - 1);

    size_t j_end;
    bool adaptive = false;
    if (opt.fixed_horizon > 0.0) {
        // never cut off a compactly supported part: only the persistent
        // periodic signal may live past the horizon (covered by the tail)
        j_end = std::max<size_t>(size_t(std::llround(opt.fixed_horizon / h)), j_support);
    } else if (!periodic || sup_per == 0.0) {
        j_end = std::max<size_t>(j_support, 1);
    } else {
        adaptive = true;
        double chunk = 1.0;
        if (a && a->extension() == Extension::Periodic) chunk = std::max(chunk, a->period());
        if (b && b->extension() == Extension::Periodic) chunk = std::max(chunk, b->period());
        j_end = std::max<size_t>(j_support, size_t(std::llround(chunk / h)));
    }

    double sum = 0.0;  // full-weight node sum; trapezoid ends fixed at the close
    size_t j = 0;
    double f0 = term_at(0);
    double fj_last = f0;
    sum += f0 * weight_at(0);
    auto integrate_to = [&](size_t stop) {
        for (++j; j <= stop; ++j) {
            fj_last = term_at(j);
            sum += fj_last * weight_at(j);
        }
        --j;
    };

    if (!adaptive) {
        integrate_to(j_end);
        TailIntegral tail = v.tail_integral(double(j_end) * h);
        if (periodic && sup_per > 0.0) {
            // fixed horizon over a persistent signal: account the tail honestly
            if (tail.divergent()) out.verdict = LpNorm::Verdict::Infinite;
            else if (!tail.finite()) out.verdict = LpNorm::Verdict::Unknown;
            else out.tail_mass = pow_p(sup_per, p) * tail.value;
        }
    } else {
        size_t chunk_nodes = std::max<size_t>(1, j_end);
        while (true) {
            integrate_to(j_end);
            TailIntegral tail = v.tail_integral(double(j_end) * h);
            if (tail.divergent()) {
                out.verdict = LpNorm::Verdict::Infinite;
                break;
            }
            if (!tail.finite()) {
                out.verdict = LpNorm::Verdict::Unknown;
                break;
            }
            double bound = pow_p(sup_per, p) * tail.value;
            double trapz = (sum - 0.5 * f0 * weight_at(0) - 0.5 * fj_last * weight_at(j_end)) * h;
            if (bound <= opt.rel_tol * (trapz + bound) || double(j_end) * h >= opt.max_horizon) {
                out.tail_mass = bound;
                break;
            }
            j_end += chunk_nodes;
        }
    }

    double trapz = (sum - 0.5 * f0 * weight_at(0) - 0.5 * fj_last * weight_at(j_end)) * h;
    trapz = std::max(trapz, 0.0);
    out.horizon = double(j_end) * h;
    if (out.verdict == LpNorm::Verdict::Infinite)
        out.value = std::numeric_limits<double>::infinity();
    else
        out.value = std::pow(trapz, 1.0 / p);
    return out;
}

}  // namespace detail

template <class T>
LpNorm lp_v_norm(const BasicGridFunction<T>& f, const WeightFunction& v, double p,
                 const NormOptions& opt = {}) {
    return detail::weighted_lp<T>(&f, nullptr, v, p, opt);
}

template <class T>
LpNorm lp_v_distance(const BasicGridFunction<T>& a, const BasicGridFunction<T>& b,
                     const WeightFunction& v, double p, const NormOptions& opt = {}) {
    return detail::weighted_lp<T>(&a, &b, v, p, opt);
}

/// Precomputed weight row v(j*step) for j <= horizon/step, shared by repeated
/// norm evaluations on one grid.
inline std::vector<double> weight_row(const WeightFunction& v, double step, double horizon) {
    size_t count = size_t(std::llround(horizon / step)) + 2;
    std::vector<double> row(count);
    for (size_t j = 0; j < count; ++j) row[j] = v(double(j) * step);
    return row;
}

}  // namespace sgsp
