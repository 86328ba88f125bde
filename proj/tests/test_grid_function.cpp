#include <doctest.h>

#include <cmath>

#include "sgsp/grid_function.hpp"

using namespace sgsp;

TEST_CASE("evaluation contract: interpolation, zero extension, periodic wrap") {
    GridFunction f(0.5, {0.0, 1.0, 0.0});  // tent on [0, 1] sampled at 0.5
    CHECK(f.eval(0.25) == doctest::Approx(0.5));
    CHECK(f.eval(0.5) == 1.0);
    CHECK(f.eval(1.0) == 0.0);
    CHECK(f.eval(5.0) == 0.0);  // zero beyond x_max

    GridFunction g(0.5, {1.0, 2.0, 1.0}, Extension::Periodic, 1.0);
    CHECK(g.eval(0.0) == 1.0);
    CHECK(g.eval(1.5) == 2.0);   // 1.5 mod 1 = 0.5
    CHECK(g.eval(10.0) == doctest::Approx(1.0));
    CHECK(g.eval(10.25) == doctest::Approx(1.5));
}

TEST_CASE("periodic functions are canonicalised to one period") {
    std::vector<double> samples{1.0, 2.0, 1.0, 9.0, 9.0};  // junk beyond the period
    GridFunction g(0.5, samples, Extension::Periodic, 1.0);
    CHECK(g.n_samples() == 3);
    CHECK(g.x_max() == doctest::Approx(1.0));
}

TEST_CASE("grid-aligned translation is an exact index shift") {
    auto f = tent_function(0.01, 2.0, 1.0, 1.0, 1.0);
    auto same = translate(f, 0.0);
    for (size_t j = 0; j < f.n_samples(); ++j) CHECK(same[j] == f[j]);
    CHECK(translate_error_bound(f, 0.0) == 0.0);

    auto shifted = translate(f, 1.0);  // descending ramp from 1 to 0 on [0, 1]
    CHECK(shifted.eval(0.0) == doctest::Approx(1.0));
    CHECK(shifted.eval(0.5) == doctest::Approx(0.5));
    CHECK(shifted.eval(1.0) == 0.0);
    CHECK(shifted.eval(1.5) == 0.0);

    GridFunction p(0.01, std::vector<double>(201, 3.0), Extension::Periodic, 2.0);
    auto wrapped = translate(p, 2.0);  // full period: bit-identical
    for (size_t j = 0; j < p.n_samples(); ++j) CHECK(wrapped[j] == p[j]);
}

TEST_CASE("non-aligned translation keeps the periodic wrap exact") {
    auto base = tent_function(0.01, 3.0, 1.0, 1.0, 1.0);
    std::vector<double> samples(base.samples().begin(), base.samples().end());
    samples[300] = samples[0];
    GridFunction p(0.01, samples, Extension::Periodic, 3.0);

    auto moved = translate(p, 0.377);
    CHECK(moved[moved.period_index()] == moved[0]);
    CHECK(std::isfinite(max_slope(moved)));
    CHECK(translate_error_bound(p, 0.377) == doctest::Approx(0.5 * 0.01 * 1.0));
}

TEST_CASE("slope and sup helpers flag jumps") {
    auto tent = tent_function(0.01, 2.0, 1.0, 1.0, 1.0);
    CHECK(sup_abs(tent) == doctest::Approx(1.0));
    CHECK(max_slope(tent) == doctest::Approx(1.0));

    GridFunction cut(0.5, {0.0, 1.0, 1.0});  // ends nonzero: jump past x_max
    CHECK(std::isinf(max_slope(cut)));
}

TEST_CASE("linear combinations pad zero extensions") {
    GridFunction a(0.5, {1.0, 1.0, 1.0});
    GridFunction b(0.5, {1.0, 1.0, 1.0, 1.0, 1.0});
    auto c = lin_comb(2.0, a, -1.0, b);
    CHECK(c.n_samples() == 5);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[4] == doctest::Approx(-1.0));  // a is zero there
}

TEST_CASE("grid functions round-trip through the tabular text form") {
    auto f = tent_function(0.01, 2.0, 1.0, 1.0, 0.718281828459045);
    auto back = parse_grid_function(serialize(f));
    REQUIRE(back.n_samples() == f.n_samples());
    for (size_t j = 0; j < f.n_samples(); ++j) CHECK(back[j] == f[j]);
    CHECK(back.extension() == Extension::Zero);

    GridFunction p(0.25, {1.0, 2.0, 3.0, 1.0, 1.0}, Extension::Periodic, 1.0);
    auto pb = parse_grid_function(serialize(p));
    CHECK(pb.extension() == Extension::Periodic);
    CHECK(pb.period() == 1.0);
    CHECK(pb[2] == 3.0);
}

TEST_CASE("construction rejects broken inputs") {
    CHECK_THROWS_AS(GridFunction(0.0, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(0.5, {1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(0.5, {1.0, 2.0, 3.0}, Extension::Periodic, 0.8),
                    std::invalid_argument);  // period not a grid multiple
    CHECK_THROWS_AS(GridFunction(0.5, {1.0, 2.0}, Extension::Periodic, 5.0),
                    std::invalid_argument);  // period exceeds the range
}
