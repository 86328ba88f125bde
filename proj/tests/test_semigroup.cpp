#include <doctest.h>

#include <cmath>
#include <random>

#include "sgsp/random_states.hpp"
#include "sgsp/semigroup.hpp"

using namespace sgsp;

namespace {

// independent route: plain exponential series through the generator alone
CoefficientPair series_flow(double t, const CoefficientPair& u, const SecondOrderEngine& eng,
                            int terms) {
    CoefficientPair acc = u;
    CoefficientPair power = u;
    double factorial = 1.0;
    for (int k = 1; k <= terms; ++k) {
        power = second_order_generator(power, eng);
        factorial *= double(k);
        acc = lin_comb(1.0, acc, std::pow(t, k) / factorial, power);
    }
    return acc;
}

}  // namespace

TEST_CASE("translation laws: identity and aligned composition are exact") {
    TranslationEngine eng(WeightFunction::exp_decay(1.0), 1.0);
    SemigroupHandle handle(eng);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        State f(random_kn_function(rng, 2.0, 0.01, 6.0));
        LawReport rep = check_semigroup_laws(handle, f, 0.5, 0.75);
        CHECK(rep.identity_residual == 0.0);
        CHECK(rep.composition_residual == 0.0);
        CHECK(rep.continuity_residual >= 0.0);
    }
}

TEST_CASE("second-order generator: shift-by-two action and equilibria") {
    SecondOrderEngine eng(1.0, 1.0, 3.0, 10);
    CoefficientPair e2 = CoefficientPair::zeros(3.0, 10);
    e2.a()[2] = 1.0;
    CoefficientPair out = second_order_generator(e2, eng);
    CHECK(out.a()[2] == std::complex<double>(0.0, 0.0));
    CHECK(out.b()[0] == std::complex<double>(9.0, 0.0));  // (alpha/tau) rho^2
    for (size_t j = 1; j <= 10; ++j) CHECK(std::abs(out.b()[j]) == 0.0);

    CHECK(x_rho_norm(second_order_generator(CoefficientPair::zeros(3.0, 10), eng)) == 0.0);

    // affine states are equilibria: D^2 kills them and b = 0
    CoefficientPair affine = CoefficientPair::zeros(3.0, 10);
    affine.a()[0] = 1.5;
    affine.a()[1] = -0.25;
    CHECK(x_rho_norm(second_order_generator(affine, eng)) == 0.0);
    for (double t : {0.5, 2.0}) {
        auto moved = second_order_apply(t, affine, eng);
        CHECK(x_rho_norm(lin_comb(1.0, moved.value, -1.0, affine)) < 1e-12);
    }
}

TEST_CASE("wave form drops the damping term") {
    SecondOrderEngine wave(2.0, std::nullopt, 3.0, 8);
    CHECK(wave.c_coef() == 2.0);
    CHECK(wave.e_coef() == 0.0);
    CoefficientPair u = CoefficientPair::zeros(3.0, 8);
    u.b()[1] = 1.0;
    CoefficientPair out = second_order_generator(u, wave);
    CHECK(out.a()[1] == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(out.b()[1]) == 0.0);  // no -1/tau feedback
}

TEST_CASE("matrix exponential agrees with the plain series route") {
    SecondOrderEngine eng(1.0, 1.0, 3.0, 20);
    std::mt19937_64 rng(11);
    CoefficientPair u = random_coefficient_pair(rng, 3.0, 20);
    auto fast = second_order_apply(0.3, u, eng);
    auto slow = series_flow(0.3, u, eng, 60);
    CHECK(x_rho_norm(lin_comb(1.0, fast.value, -1.0, slow)) < 1e-10);
    CHECK(fast.error_estimate >= 0.0);
}

TEST_CASE("second-order semigroup law at n_trunc = 60") {
    SecondOrderEngine eng(1.0, 1.0, 3.0, 60);
    std::mt19937_64 rng(5);
    CoefficientPair u = random_coefficient_pair(rng, 3.0, 60);
    auto both = second_order_apply(0.5, u, eng).value;
    auto chained = second_order_apply(0.25, second_order_apply(0.25, u, eng).value, eng).value;
    CHECK(x_rho_norm(lin_comb(1.0, both, -1.0, chained)) < 1e-8);
}

TEST_CASE("mismatched truncations converge as the cut order grows") {
    std::vector<std::complex<double>> a61(61), b61(61);
    for (int j = 0; j <= 60; ++j) a61[j] = std::pow(0.98, j);
    CoefficientPair u(3.0, a61, b61);
    SecondOrderEngine ref_eng(1.0, 1.0, 3.0, 60);
    auto reference = second_order_apply(0.5, u, ref_eng).value;

    double previous = std::numeric_limits<double>::infinity();
    for (int n : {10, 20, 40, 60}) {
        SecondOrderEngine eng(1.0, 1.0, 3.0, n);
        CoefficientPair cut = u.truncated(size_t(n));
        CoefficientPair stage = second_order_apply(0.25, cut, eng).value;
        // pad back up and finish the flow at the reference order
        CoefficientPair padded = stage.embedded(size_t(60 - n));
        CoefficientPair chained = second_order_apply(0.25, padded, ref_eng).value;
        double residual = x_rho_norm(lin_comb(1.0, chained, -1.0, reference));
        CHECK(residual <= previous * 1.05 + 1e-12);
        previous = residual;
    }
    CHECK(previous < 0.05);  // by n = 60 only rounding remains
}

TEST_CASE("monomials flow by their eigenvalue multipliers") {
    BlackScholesEngine eng(0.4, 0.02);
    CHECK(std::abs(eng.eigenvalue(1.0)) < 1e-15);          // x is a fixed point
    CHECK(std::abs(eng.eigenvalue(0.0) + eng.rate) == 0.0);  // constants decay at rate r

    auto fixed = MonomialCombo::monomial(1.0);
    for (double t : {0.5, 1.0, 5.0}) {
        auto moved = blackscholes_apply(t, fixed, eng);
        CHECK(std::abs(moved.terms()[0].coefficient - 1.0) < 1e-14);
    }
    auto constant = MonomialCombo::monomial(0.0);
    auto decayed = blackscholes_apply(2.0, constant, eng);
    CHECK(std::abs(decayed.terms()[0].coefficient - std::exp(-2.0 * eng.rate)) < 1e-12);

    auto untouched = blackscholes_apply(0.0, fixed, eng);
    CHECK(untouched.terms()[0].coefficient == fixed.terms()[0].coefficient);
}

TEST_CASE("law residuals for the spectral engine compose to rounding") {
    BlackScholesEngine eng(0.4, 0.02);
    SemigroupHandle handle(eng);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 5; ++i) {
        State f(random_monomial_combo(rng, 3));
        LawReport rep = check_semigroup_laws(handle, f, 0.3, 0.55);
        CHECK(rep.identity_residual == 0.0);
        CHECK(rep.composition_residual < 1e-12);
    }
}

TEST_CASE("all engines act linearly") {
    std::mt19937_64 rng(23);
    std::vector<SemigroupHandle> handles;
    handles.emplace_back(TranslationEngine(WeightFunction::exp_decay(1.0), 1.0));
    handles.emplace_back(SecondOrderEngine(1.0, 1.0, 3.0, 40));
    handles.emplace_back(BlackScholesEngine(0.4, 0.02));
    for (const auto& handle : handles) {
        State f = random_state(rng, handle);
        State g = random_state(rng, handle);
        double t = 0.37;
        double alpha = -1.75;
        State combined, separate;
        if (auto* ff = std::get_if<GridFunction>(&f)) {
            combined = apply(handle, t, State(lin_comb(alpha, *ff, 1.0, std::get<GridFunction>(g))));
            separate = State(lin_comb(alpha, std::get<GridFunction>(apply(handle, t, f)), 1.0,
                                      std::get<GridFunction>(apply(handle, t, g))));
        } else if (auto* fu = std::get_if<CoefficientPair>(&f)) {
            combined = apply(handle, t,
                             State(lin_comb(alpha, *fu, 1.0, std::get<CoefficientPair>(g))));
            separate = State(lin_comb(alpha, std::get<CoefficientPair>(apply(handle, t, f)), 1.0,
                                      std::get<CoefficientPair>(apply(handle, t, g))));
        } else {
            combined = apply(handle, t,
                             State(lin_comb(alpha, std::get<MonomialCombo>(f), 1.0,
                                            std::get<MonomialCombo>(g))));
            separate = State(lin_comb(alpha, std::get<MonomialCombo>(apply(handle, t, f)), 1.0,
                                      std::get<MonomialCombo>(apply(handle, t, g))));
        }
        double scale = std::max(1.0, state_norm(handle, combined));
        CHECK(state_distance(handle, combined, separate) / scale < 1e-10);
    }
}

TEST_CASE("engine construction enforces its parameter domain") {
    CHECK_THROWS_AS(SecondOrderEngine(0.0, 1.0, 3.0, 60), std::invalid_argument);
    CHECK_THROWS_AS(SecondOrderEngine(1.0, -2.0, 3.0, 60), std::invalid_argument);
    CHECK_THROWS_AS(BlackScholesEngine(0.0, 0.02), std::invalid_argument);
    CHECK_THROWS_AS(TranslationEngine(WeightFunction::exp_decay(1.0), 0.5),
                    std::invalid_argument);
    // state/engine mismatch
    SemigroupHandle bs{BlackScholesEngine(0.4, 0.02)};
    CHECK_THROWS_AS(apply(bs, 1.0, State(GridFunction(0.5, {0.0, 0.0}))),
                    std::invalid_argument);
}
