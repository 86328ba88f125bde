#include <doctest.h>

#include <cmath>

#include "sgsp/errors.hpp"
#include "sgsp/weight.hpp"

using namespace sgsp;

namespace {

// independent route: bisect the smallest cut with tail below the target
double bisect_cut(const WeightFunction& v, double mass, double hi) {
    double lo = 0.0;
    if (v.tail_integral(0.0).value < mass) return 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (v.tail_integral(mid).value < mass) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("tail integrals of the analytic families are closed forms") {
    auto exp1 = WeightFunction::exp_decay(1.0);
    CHECK(exp1.tail_integral(std::log(10.0)).finite());
    CHECK(exp1.tail_integral(std::log(10.0)).value == doctest::Approx(0.1).epsilon(1e-12));

    auto flat = WeightFunction::constant(1.0);
    CHECK(flat.tail_integral(0.0).divergent());

    auto rat = WeightFunction::rational_decay(2.0);
    CHECK(rat.tail_integral(0.0).value == doctest::Approx(1.0).epsilon(1e-12));

    // q <= 1 diverges
    CHECK(WeightFunction::rational_decay(1.0).tail_integral(0.0).divergent());
    CHECK(WeightFunction::rational_decay(0.5).tail_integral(3.0).divergent());
}

TEST_CASE("exp-decay tails follow the closed form at any cut") {
    for (double rate : {0.5, 1.0, 2.75}) {
        auto v = WeightFunction::exp_decay(rate);
        for (double cut : {0.0, 0.3, 2.0, 11.0}) {
            CHECK(v.tail_integral(cut).value ==
                  doctest::Approx(std::exp(-rate * cut) / rate).epsilon(1e-15));
        }
    }
}

TEST_CASE("cut_for_tail_mass agrees with bisection") {
    auto exp2 = WeightFunction::exp_decay(2.0);
    auto rat3 = WeightFunction::rational_decay(3.0);
    for (double mass : {0.3, 0.05, 1e-3}) {
        CHECK(cut_for_tail_mass(exp2, mass) ==
              doctest::Approx(bisect_cut(exp2, mass, 100.0)).epsilon(1e-9));
        CHECK(cut_for_tail_mass(rat3, mass) ==
              doctest::Approx(bisect_cut(rat3, mass, 1e4)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(cut_for_tail_mass(WeightFunction::constant(2.0), 0.5), Refusal);
}

TEST_CASE("table weights integrate their polyline exactly") {
    auto table = WeightFunction::table({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, /*zero_beyond=*/true);
    CHECK(table.integral_between(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(table.tail_integral(1.0).value == 0.0);
    CHECK(table.tail_integral(0.25).value == doctest::Approx(0.75));
    CHECK(table(2.0) == 0.0);

    // triangle profile: integral is the triangle area
    auto tri = WeightFunction::table({0.0, 1.0, 2.0}, {1e-9, 1.0, 1e-9}, true);
    CHECK(tri.integral_between(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unknown table tails: divergence heuristic and inconclusive verdicts") {
    std::vector<double> xs, flat_vals, decay_vals;
    for (int j = 0; j <= 80; ++j) {
        xs.push_back(0.1 * j);
        flat_vals.push_back(2.0);
        decay_vals.push_back(std::exp(-0.1 * j));
    }
    auto flat_like = WeightFunction::table(xs, flat_vals, false);
    CHECK(flat_like.tail_integral(0.0).divergent());

    auto truncated = WeightFunction::table(xs, decay_vals, false);
    auto t = truncated.tail_integral(0.0);
    CHECK(t.verdict == TailIntegral::Verdict::Inconclusive);
    CHECK(t.value > 0.0);  // carries the partial sum
}

TEST_CASE("admissibility: exp decay and constant are exact, gaussians fail") {
    auto exp1 = WeightFunction::exp_decay(1.0);
    std::vector<double> xs{0, 1, 2, 3, 4}, ts{0, 0.5, 1, 1.5, 2};
    auto rep = admissibility_check(exp1, xs, ts, 1.0);
    CHECK(rep.verdict == AdmissibilityReport::Verdict::Admissible);
    CHECK(*rep.m_min == doctest::Approx(1.0).epsilon(1e-9));

    auto flat = WeightFunction::constant(1.0);
    rep = admissibility_check(flat, xs, ts, 0.0);
    CHECK(rep.verdict == AdmissibilityReport::Verdict::Admissible);
    CHECK(*rep.m_min == doctest::Approx(1.0).epsilon(1e-12));

    // gaussian-profile table: the ratio e^{2xt + t^2 - wt} outgrows any M
    std::vector<double> gx, gv;
    for (int j = 0; j <= 240; ++j) {
        gx.push_back(0.05 * j);
        gv.push_back(std::exp(-gx.back() * gx.back()));
    }
    auto gauss = WeightFunction::table(gx, gv, false);
    rep = admissibility_check(gauss, {0, 1, 2, 3, 4}, {0, 0.5, 1}, 1.0);
    CHECK(rep.verdict == AdmissibilityReport::Verdict::NotAdmissible);
}

TEST_CASE("canonical admissibility constants pass the spot check") {
    for (auto v : {WeightFunction::exp_decay(0.7), WeightFunction::constant(2.0),
                   WeightFunction::rational_decay(2.5)}) {
        auto params = canonical_admissible_params(v);
        REQUIRE(params.has_value());
        CHECK(admissible_params_hold(v, *params));
    }
}

TEST_CASE("weights serialize to the tabular text form and back") {
    auto exp1 = WeightFunction::exp_decay(1.25);
    auto back = WeightFunction::parse(exp1.serialize());
    CHECK(std::get<ExpDecay>(back.kind()).rate == 1.25);
    REQUIRE(back.admissible_params().has_value());
    CHECK(back.admissible_params()->growth == 1.25);

    auto table = WeightFunction::table({0.0, 0.5, 2.0}, {0.25, 1.0, 0.125}, true);
    auto table_back = WeightFunction::parse(table.serialize());
    const auto& t = std::get<TableWeight>(table_back.kind());
    CHECK(t.zero_beyond);
    REQUIRE(t.x.size() == 3);
    CHECK(t.x[2] == 2.0);
    CHECK(t.value[2] == 0.125);
}

TEST_CASE("weights reject invalid construction") {
    CHECK_THROWS_AS(WeightFunction::exp_decay(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::table({0.0, 1.0}, {1.0, 0.0}, true),
                    std::invalid_argument);  // strict positivity at samples
    CHECK_THROWS_AS(WeightFunction::table({1.0, 0.0}, {1.0, 1.0}, true),
                    std::invalid_argument);
}
