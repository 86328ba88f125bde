#include "sgsp/random_states.hpp"

#include <algorithm>
#include <cmath>

namespace sgsp {

GridFunction random_kn_function(std::mt19937_64& rng, double n, double step,
                                double support_len) {
    const double anchor_gap = 2.0;
    size_t anchors = size_t(std::max(1.0, std::round(support_len / anchor_gap))) + 1;
    std::uniform_real_distribution<double> value(-0.9 * n, 0.9 * n);
    std::vector<double> heights(anchors);
    for (auto& h : heights) h = value(rng);
    heights.back() = 0.0;
    double x_max = double(anchors - 1) * anchor_gap;
    return GridFunction::sampled(step, x_max, [&](double x) {
        double u = x / anchor_gap;
        size_t j = std::min(size_t(u), anchors - 2);
        double th = u - double(j);
        return heights[j] * (1.0 - th) + heights[j + 1] * th;
    });
}

CoefficientPair random_coefficient_pair(std::mt19937_64& rng, double rho, int n_trunc,
                                        double decay) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::complex<double>> a(n_trunc + 1), b(n_trunc + 1);
    double scale = 1.0;
    for (int j = 0; j <= n_trunc; ++j) {
        a[j] = std::complex<double>(unit(rng), unit(rng)) * scale;
        b[j] = std::complex<double>(unit(rng), unit(rng)) * scale;
        scale *= decay;
    }
    return CoefficientPair(rho, std::move(a), std::move(b));
}

MonomialCombo random_monomial_combo(std::mt19937_64& rng, int terms, double beta_lo,
                                    double beta_hi) {
    std::uniform_real_distribution<double> beta(beta_lo, beta_hi);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<MonomialTerm> out;
    for (int k = 0; k < terms; ++k)
        out.push_back({std::complex<double>(beta(rng), 0.0),
                       std::complex<double>(coef(rng), coef(rng))});
    return MonomialCombo(std::move(out));
}

ShadowingSpec random_shadowing_spec(std::mt19937_64& rng, const WeightFunction& v, double p,
                                    const SpecRandomOptions& opt) {
    std::uniform_int_distribution<int> n_pick(opt.n_lo, opt.n_hi);
    std::uniform_int_distribution<int> s_pick(opt.s_lo, opt.s_hi);
    std::uniform_real_distribution<double> delta_pick(opt.delta_lo, opt.delta_hi);
    std::uniform_real_distribution<double> window(0.0, opt.window_max);
    std::uniform_real_distribution<double> margin(0.1, opt.gap_margin_max);
    std::uniform_int_distribution<int> support(1, 3);

    ShadowingSpec spec;
    spec.n = n_pick(rng);
    spec.delta = delta_pick(rng);
    spec.t0 = opt.t0;
    spec.p = p;
    spec.weight = v;
    int s = s_pick(rng);
    RequiredGap gap = required_gap(spec.delta, spec.n, v, p);

    // keep the times on the grid so verification runs on exact shifts
    auto snap = [&](double x) { return std::round(x / opt.step) * opt.step; };
    double a = 0.0;
    for (int r = 0; r < s; ++r) {
        double b = snap(a + window(rng));
        spec.pieces.push_back(
            {random_kn_function(rng, spec.n, opt.step, 2.0 * support(rng)), a, b});
        a = snap(b + gap.gap + margin(rng));
        if (a <= b + gap.gap) a += opt.step;  // rounding must not shave the gap
    }
    return spec;
}

State random_state(std::mt19937_64& rng, const SemigroupHandle& handle, double grid_step) {
    if (std::holds_alternative<TranslationEngine>(handle)) {
        std::uniform_int_distribution<int> n_pick(1, 2);
        return State(random_kn_function(rng, n_pick(rng), grid_step, 6.0));
    }
    if (auto* so = std::get_if<SecondOrderEngine>(&handle))
        return State(random_coefficient_pair(rng, so->rho, so->n_trunc));
    std::uniform_int_distribution<int> terms(1, 3);
    return State(random_monomial_combo(rng, terms(rng)));
}

}  // namespace sgsp
