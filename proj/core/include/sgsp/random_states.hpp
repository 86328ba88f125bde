#pragma once

#include <random>

#include "sgsp/coefficient_pair.hpp"
#include "sgsp/grid_function.hpp"
#include "sgsp/monomial_combo.hpp"
#include "sgsp/semigroup.hpp"
#include "sgsp/shadowing.hpp"

namespace sgsp {

/// Random polyline in K_n: anchors two units apart with values in
/// [-0.9n, 0.9n] (slopes stay below n) and a zero tail anchor.
GridFunction random_kn_function(std::mt19937_64& rng, double n, double step,
                                double support_len);

CoefficientPair random_coefficient_pair(std::mt19937_64& rng, double rho, int n_trunc,
                                        double decay = 0.9);

MonomialCombo random_monomial_combo(std::mt19937_64& rng, int terms, double beta_lo = 0.2,
                                    double beta_hi = 2.4);

struct SpecRandomOptions {
    int n_lo = 1, n_hi = 3;
    int s_lo = 2, s_hi = 5;
    double delta_lo = 0.1, delta_hi = 1.0;
    double t0 = 1.0;
    double step = 0.01;
    double window_max = 2.0;      // piece length b_r - a_r
    double gap_margin_max = 2.0;  // slack on top of the required gap
};

/// Seeded shadowing request with grid-aligned times and K_n pieces.
ShadowingSpec random_shadowing_spec(std::mt19937_64& rng, const WeightFunction& v, double p,
                                    const SpecRandomOptions& opt = {});

/// Seeded state matching the engine (grid function / coefficient pair /
/// monomial combo).
State random_state(std::mt19937_64& rng, const SemigroupHandle& handle, double grid_step = 0.01);

}  // namespace sgsp
