#include <doctest.h>

#include <cmath>

#include "sgsp/criteria.hpp"
#include "sgsp/errors.hpp"

using namespace sgsp;

TEST_CASE("parameter gates match hand arithmetic") {
    CHECK(hhte_parameter_gate(1.0, 1.0, 3.0));
    CHECK_FALSE(hhte_parameter_gate(1.0, 1.0, 1.0));
    CHECK_FALSE(hhte_parameter_gate(2.0, 1.0, 1.0));  // product exactly 2: strict

    CHECK(blackscholes_parameter_gate(4.0, 0.0, 0.4));
    CHECK_FALSE(blackscholes_parameter_gate(4.0, 0.0, 0.2));
    CHECK_FALSE(blackscholes_parameter_gate(1.0, 0.0, 5.0));
    CHECK_THROWS_AS(blackscholes_parameter_gate(4.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("translation eigenfield: forward-difference residual is O(grid step)") {
    TranslationEngine engine(WeightFunction::exp_decay(1.0), 1.0);
    SemigroupHandle handle(engine);
    auto field = translation_wave_field();
    auto gen = translation_difference_generator();
    std::vector<double> ts;
    for (int i = 0; i <= 9; ++i) ts.push_back(0.2 + 1.8 * i / 9.0);
    std::vector<CState> dict{*field(1.1)};
    EigenfieldOptions opts;
    opts.residual_tol = 1e-3;
    opts.span_tol = 0.2;
    EigenfieldReport rep = eigenfield_check(handle, field, gen, ts, dict, opts);
    CHECK(rep.residual_sup < 1e-3);
    CHECK(rep.boundedness_sup > 0.0);
    CHECK(rep.rejected_samples.empty());
    CHECK(rep.criterion_satisfied);
}

TEST_CASE("a zero field is degenerate even though its residual vanishes") {
    TranslationEngine engine(WeightFunction::exp_decay(1.0), 1.0);
    auto zero_field = [](double) -> std::optional<CState> {
        return CState(ComplexGridFunction::zeros(0.01, 2.0));
    };
    auto gen = translation_difference_generator();
    std::vector<double> ts{0.5, 1.0};
    std::vector<CState> dict{CState(ComplexGridFunction::zeros(0.01, 2.0))};
    EigenfieldReport rep =
        eigenfield_check(SemigroupHandle(engine), zero_field, gen, ts, dict, {});
    CHECK(rep.residual_sup == 0.0);
    CHECK(rep.degenerate_field);
    CHECK_FALSE(rep.criterion_satisfied);
}

TEST_CASE("second-order closed-form field: tiny residuals, monotone in truncation") {
    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(-1.0 + 0.1 * i);

    double previous = std::numeric_limits<double>::infinity();
    for (int n : {20, 40, 60}) {
        SecondOrderEngine engine(1.0, 1.0, 3.0, n);
        auto field = second_order_exponential_field(engine);
        auto gen = second_order_generator_applier(engine);
        std::vector<CState> dict{*field(0.37)};
        EigenfieldOptions opts;
        opts.residual_tol = 1e-8;
        EigenfieldReport rep =
            eigenfield_check(SemigroupHandle(engine), field, gen, ts, dict, opts);
        CHECK(rep.rejected_samples.empty());  // |mu| < 1.2 << 3 on [-1, 1]
        CHECK(rep.residual_sup <= previous + 1e-18);
        previous = rep.residual_sup;
        if (n == 60) {
            CHECK(rep.residual_sup < 1e-8);
            CHECK(rep.criterion_satisfied);
        }
    }
}

TEST_CASE("second-order field rejects samples outside the coefficient disc") {
    SecondOrderEngine cramped(1.0, 1.0, 0.5, 20);  // |mu(1)| ~ 1.19 >= 0.5
    auto field = second_order_exponential_field(cramped);
    CHECK_FALSE(field(1.0).has_value());
    std::vector<double> ts{0.05, 1.0};
    std::vector<CState> dict{*field(0.05)};
    EigenfieldReport rep = eigenfield_check(SemigroupHandle(cramped), field,
                                            second_order_generator_applier(cramped), ts, dict,
                                            {});
    CHECK(rep.rejected_samples.size() == 1);
    CHECK(rep.rejected_samples[0] == 1);
}

TEST_CASE("spectral field: diagonal generator gives machine-level residuals") {
    BlackScholesEngine engine(0.4, 0.02);
    auto field = blackscholes_spectral_field(engine);
    auto gen = blackscholes_generator_applier(engine);
    std::vector<double> ts;
    for (int i = 0; i <= 10; ++i) ts.push_back(0.2 * i);
    std::vector<CState> dict{CState(MonomialCombo::monomial(1.0))};
    EigenfieldOptions opts;
    opts.residual_tol = 1e-8;
    opts.span_tol = 1e-3;
    EigenfieldReport rep = eigenfield_check(SemigroupHandle(engine), field, gen, ts, dict, opts);
    CHECK(rep.residual_sup < 1e-8);
    CHECK(rep.criterion_satisfied);  // x^1 is the t = 0 member of the field
}

TEST_CASE("span residuals shrink as samples accumulate") {
    SecondOrderEngine engine(1.0, 1.0, 3.0, 40);
    auto field = second_order_exponential_field(engine);
    auto gen = second_order_generator_applier(engine);
    std::vector<double> ts;
    for (int i = 0; i <= 16; ++i) ts.push_back(-0.8 + 0.1 * i);
    std::vector<CState> dict{*field(0.333), *field(-0.512)};
    EigenfieldReport rep = eigenfield_check(SemigroupHandle(engine), field, gen, ts, dict, {});
    REQUIRE(rep.span_residuals.size() == 2);
    for (const auto& rs : rep.span_residuals) {
        for (size_t k = 1; k < rs.size(); ++k) CHECK(rs[k] <= rs[k - 1] + 1e-9);
        CHECK(rs.back() < 1e-6);  // dictionary members lie on the field
    }
}

TEST_CASE("metadata flags are recorded, not verified") {
    TranslationEngine engine(WeightFunction::exp_decay(1.0), 1.0);
    auto field = translation_wave_field();
    EigenfieldOptions opts;
    opts.smoothness_c2 = true;
    opts.avoids_c0 = true;
    std::vector<double> ts{0.5};
    std::vector<CState> dict{*field(0.5)};
    EigenfieldReport rep = eigenfield_check(SemigroupHandle(engine), field,
                                            translation_difference_generator(), ts, dict, opts);
    CHECK(rep.smoothness_c2);
    CHECK(rep.avoids_c0);
}

TEST_CASE("equivalence reports across the weight-mass dichotomy") {
    auto dict = default_dictionary(0.01);
    EquivalenceConfig config;
    config.shadow_suite = 3;

    EquivalenceReport fin = translation_equivalences(WeightFunction::exp_decay(1.0), 1.0, dict,
                                                     config);
    CHECK(fin.integral.finite());
    CHECK(fin.integral.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fin.shadowing_ok);
    CHECK(fin.periodic_density_ok);
    CHECK(fin.fh_positive);
    CHECK(fin.overall == EquivalenceReport::Overall::Consistent);

    EquivalenceReport div = translation_equivalences(WeightFunction::constant(1.0), 1.0, dict,
                                                     config);
    CHECK(div.integral.divergent());
    CHECK_FALSE(div.refusals.empty());
    CHECK(div.shadow_total == 0);  // a positive suite can never accompany divergence
    CHECK_FALSE(div.shadowing_ok);
    CHECK(div.fh_zero_demonstrated);
    CHECK(div.overall == EquivalenceReport::Overall::Consistent);

    std::vector<double> xs, vs;
    for (int j = 0; j <= 40; ++j) {
        xs.push_back(0.25 * j);
        vs.push_back(std::exp(-0.25 * j));
    }
    EquivalenceReport unknown = translation_equivalences(
        WeightFunction::table(xs, vs, false), 1.0, dict, config);
    CHECK(unknown.integral.verdict == TailIntegral::Verdict::Inconclusive);
    CHECK_FALSE(unknown.probes_run);
}
