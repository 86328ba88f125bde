#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sgsp/errors.hpp"
#include "sgsp/norms.hpp"
#include "sgsp/probes.hpp"

using namespace sgsp;

namespace {

TranslationEngine exp_engine() { return TranslationEngine(WeightFunction::exp_decay(1.0), 1.0); }

GridFunction tent() { return tent_function(0.01, 4.0, 1.0, 1.0, 1.0); }

}  // namespace

TEST_CASE("mixing witness at t = 12 verifies all four memberships") {
    auto engine = exp_engine();
    MixingWitness w = mixing_witness(engine, tent(), 0.5, 0.5, 12.0);
    REQUIRE(w.built);
    CHECK(w.verified);
    CHECK(w.dist_x_u < 0.5);
    CHECK(w.norm_tx < 0.5);
    CHECK(w.norm_w < 0.5);
    CHECK(w.dist_tw_u < 0.5);
    CHECK(w.t_prime == doctest::Approx(w.period - 12.0));

    // margins re-verify when recomputed at the recorded quadrature horizon
    NormOptions opts;
    opts.fixed_horizon = w.quad_horizon;
    double tx = lp_v_norm(translate(w.x, 12.0), engine.weight, engine.p, opts).upper();
    CHECK(std::abs(tx - w.norm_tx) <= 1e-9);
    double back =
        lp_v_distance(translate(w.w, 12.0), tent(), engine.weight, engine.p, opts).upper();
    CHECK(std::abs(back - w.dist_tw_u) <= 1e-9);
}

TEST_CASE("mixing witness trivial and threshold paths") {
    auto engine = exp_engine();
    MixingWitness zero = mixing_witness(engine, GridFunction::zeros(0.01, 2.0), 0.5, 0.5, 3.0);
    CHECK(zero.built);
    CHECK(zero.verified);
    CHECK(sup_abs(zero.x) == 0.0);

    MixingWitness early = mixing_witness(engine, tent(), 0.5, 0.5, 1.0);
    CHECK_FALSE(early.built);
    CHECK(early.reason.find("threshold") != std::string::npos);
}

TEST_CASE("return-set scan: all times past the threshold belong to both sets") {
    auto engine = exp_engine();
    std::vector<double> grid;
    for (double t = 0.0; t <= 12.0 + 1e-9; t += 0.5) grid.push_back(t);
    Ball u{State(tent()), 0.5};
    Ball w{State(GridFunction::zeros(0.01, 4.0)), 0.5};
    ReturnSetReport rep = return_set_scan(engine, u, w, grid);
    REQUIRE(rep.first_all_pass.has_value());
    double threshold = required_gap(0.25, 1.0, engine.weight, engine.p).gap;
    CHECK(*rep.first_all_pass <= std::ceil(threshold) + 1e-9);
    for (const auto& o : rep.outcomes)
        if (o.t >= *rep.first_all_pass) CHECK((o.in_r_uw && o.in_r_wu));
}

TEST_CASE("retained scan witnesses re-verify within 1e-9 of recorded margins") {
    auto engine = exp_engine();
    MixingOptions opts;
    opts.keep_witnesses = true;
    std::vector<double> grid{6.0, 8.5, 11.0};
    ReturnSetReport rep = return_set_scan(engine, Ball{State(tent()), 0.5},
                                          Ball{State(GridFunction::zeros(0.01, 4.0)), 0.5},
                                          grid, opts);
    REQUIRE(rep.witnesses.size() == grid.size());
    for (const MixingWitness& w : rep.witnesses) {
        REQUIRE(w.built);
        NormOptions quad;
        quad.fixed_horizon = w.quad_horizon;
        double tx = lp_v_norm(translate(w.x, w.t), engine.weight, engine.p, quad).upper();
        double wn = lp_v_norm(w.w, engine.weight, engine.p, quad).upper();
        CHECK(std::abs(tx - w.norm_tx) <= 1e-9);
        CHECK(std::abs(wn - w.norm_w) <= 1e-9);
    }
}

TEST_CASE("return-set scan refuses gracefully on divergent weights") {
    TranslationEngine flat(WeightFunction::constant(1.0), 1.0);
    std::vector<double> grid{0.0, 1.0, 2.0};
    ReturnSetReport rep = return_set_scan(flat, Ball{State(tent()), 0.5},
                                          Ball{State(GridFunction::zeros(0.01, 4.0)), 0.5}, grid);
    CHECK_FALSE(rep.witnesses_available);
    CHECK(rep.note.find("unavailable") != std::string::npos);
    CHECK_FALSE(rep.first_all_pass.has_value());
}

TEST_CASE("a whole-space target makes every time a return time") {
    auto engine = exp_engine();
    std::vector<double> grid{0.0, 0.5, 1.0};
    Ball u{State(tent()), 0.5};
    Ball w{State(GridFunction::zeros(0.01, 4.0)),
           std::numeric_limits<double>::infinity()};
    ReturnSetReport rep = return_set_scan(engine, u, w, grid);
    REQUIRE(rep.first_all_pass.has_value());
    CHECK(*rep.first_all_pass == 0.0);
}

TEST_CASE("translation approximant: exactly periodic and delta-close") {
    auto engine = exp_engine();
    PeriodicApproximant q = periodic_approximant(SemigroupHandle(engine), State(tent()), 0.3);
    CHECK(q.error < 0.3);
    CHECK(q.period_return_residual == 0.0);
    const auto& qf = std::get<GridFunction>(q.point);
    auto wrapped = translate(qf, q.period);
    for (size_t j = 0; j < qf.n_samples(); ++j) CHECK(wrapped[j] == qf[j]);

    PeriodicApproximant z = periodic_approximant(SemigroupHandle(engine),
                                                 State(GridFunction::zeros(0.01, 2.0)), 0.3);
    CHECK(sup_abs(std::get<GridFunction>(z.point)) == 0.0);
    CHECK(z.error == 0.0);
}

TEST_CASE("spectral approximants return after one period") {
    // second-order engine: combination of two imaginary-eigenvalue vectors
    SecondOrderEngine so(1.0, 1.0, 3.0, 60);
    auto field_pair = [&](double theta) {
        std::complex<double> lam(0.0, theta);
        std::complex<double> mu = std::sqrt((lam * lam - so.e_coef() * lam) / so.c_coef());
        std::vector<std::complex<double>> a(61), b(61);
        std::complex<double> pw = 1.0;
        for (int j = 0; j <= 60; ++j) {
            a[j] = pw;
            b[j] = lam * pw;
            pw *= mu / so.rho;
        }
        return CoefficientPair(3.0, a, b);
    };
    CoefficientPair target = lin_comb(1.0, field_pair(0.5), 0.5, field_pair(1.0));
    ApproximantOptions lattice;
    lattice.theta = 0.5;  // both eigenvalues sit on the i k theta lattice
    PeriodicApproximant q =
        periodic_approximant(SemigroupHandle(so), State(target), 0.5, lattice);
    CHECK(q.period == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(q.error < 1e-8);                     // the dictionary contains the target
    CHECK(q.period_return_residual < 1e-4);

    // spectral engine: an eigenvector with eigenvalue i theta
    BlackScholesEngine bs(0.45, 0.03);
    double nu = bs.nu(), g = bs.gamma();
    std::complex<double> disc =
        std::sqrt(std::complex<double>(g * nu * g * nu, 0.0) +
                  4.0 * nu * nu * (bs.rate + std::complex<double>(0.0, 1.0)));
    std::complex<double> beta = (-g * nu + disc) / (2.0 * nu * nu);
    CHECK(std::abs(bs.eigenvalue(beta) - std::complex<double>(0.0, 1.0)) < 1e-12);
    PeriodicApproximant bq = periodic_approximant(
        SemigroupHandle(bs), State(MonomialCombo::monomial(beta)), 0.5);
    CHECK(bq.period_return_residual < 1e-8);
    CHECK(bq.error < 1e-8);

    // zero targets come back as zero points
    PeriodicApproximant zq = periodic_approximant(
        SemigroupHandle(so), State(CoefficientPair::zeros(3.0, 60)), 0.5);
    CHECK(x_rho_norm(std::get<CoefficientPair>(zq.point)) == 0.0);
}

TEST_CASE("no admissible eigenvalue dictionary is an explicit refusal") {
    SecondOrderEngine tiny(1.0, 1.0, 0.3, 20);  // |mu(theta)| >= rho for every theta >= 1
    CoefficientPair target = CoefficientPair::zeros(0.3, 20);
    target.a()[1] = 1.0;
    ApproximantOptions opts;
    opts.theta = 4.0;  // push the whole lattice outside the disc
    CHECK_THROWS_AS(
        periodic_approximant(SemigroupHandle(tiny), State(target), 0.5, opts), Refusal);
}

TEST_CASE("irregular vector: both densities high, nondecreasing with horizon") {
    auto v = WeightFunction::exp_decay(1.0);
    IrregularVectorResult r1 = irregular_vector(v, 0.1, 1e4);
    CHECK(sup_abs(r1.f) > 0.0);
    CHECK(r1.big.upper >= 0.9);
    CHECK(r1.small.upper >= 0.9);

    IrregularVectorResult r2 = irregular_vector(v, 0.1, 2e4);
    CHECK(r2.big.upper >= r1.big.upper - 1e-12);
    CHECK(r2.small.upper >= r1.small.upper - 1e-12);

    // sharper threshold can only lose big events
    DensityEstimate harder = big_density_for_epsilon(r1, 0.05);
    CHECK(harder.upper <= r1.big.upper + 1e-12);

    CHECK_THROWS_AS(irregular_vector(WeightFunction::constant(1.0), 0.1, 1e3), Refusal);
}

TEST_CASE("irregular vector norms cross-check against the grid quadrature") {
    auto v = WeightFunction::exp_decay(1.0);
    IrregularVectorResult r = irregular_vector(v, 0.1, 1e3);
    for (size_t pick : {size_t(4), size_t(40), size_t(400)}) {
        REQUIRE(pick < r.norm_series.size());
        auto [s, closed_form] = r.norm_series[pick];
        double quad = lp_v_norm(translate(r.f, s), v, 1.0).upper();
        CHECK(quad == doctest::Approx(closed_form).epsilon(0.05));
    }
}

TEST_CASE("hit densities: unreachable targets score zero, trivial balls one") {
    TranslationEngine flat(WeightFunction::constant(1.0), 1.0);
    GridFunction x0 = tent();
    GridFunction far = scaled(3.0, x0);
    auto reports = fh_hit_density(SemigroupHandle(flat), State(x0),
                                  {Ball{State(far), 0.1}}, 60.0, 0.5);
    CHECK(reports[0].density.lower == 0.0);
    CHECK(reports[0].density.upper == 0.0);

    auto everything = fh_hit_density(
        SemigroupHandle(flat), State(x0),
        {Ball{State(x0), std::numeric_limits<double>::infinity()}}, 30.0, 0.5);
    CHECK(everything[0].density.lower == doctest::Approx(1.0));
}

TEST_CASE("a periodic orbit revisits its own ball with positive lower density") {
    auto engine = exp_engine();
    PeriodicApproximant q = periodic_approximant(SemigroupHandle(engine), State(tent()), 0.2);
    const auto& x0 = std::get<GridFunction>(q.point);
    auto reports = fh_hit_density(SemigroupHandle(engine), State(x0),
                                  {Ball{State(x0), 0.1}}, 20.0 * q.period, 0.1);
    CHECK(reports[0].density.lower > 0.0);
}

TEST_CASE("hit densities are monotone in the ball radius") {
    auto engine = exp_engine();
    PeriodicApproximant q = periodic_approximant(SemigroupHandle(engine), State(tent()), 0.2);
    auto tight = fh_hit_density(SemigroupHandle(engine), q.point,
                                {Ball{State(tent()), 0.15}}, 200.0, 0.1);
    auto loose = fh_hit_density(SemigroupHandle(engine), q.point,
                                {Ball{State(tent()), 0.3}}, 200.0, 0.1);
    CHECK(loose[0].density.lower >= tight[0].density.lower - 1e-12);
    CHECK(loose[0].density.upper >= tight[0].density.upper - 1e-12);
}
