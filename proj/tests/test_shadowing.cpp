#include <doctest.h>

#include <cmath>
#include <random>

#include "sgsp/errors.hpp"
#include "sgsp/norms.hpp"
#include "sgsp/random_states.hpp"
#include "sgsp/shadowing.hpp"

using namespace sgsp;

namespace {

ShadowingSpec tent_spec() {
    ShadowingSpec spec;
    auto tent = tent_function(0.01, 2.0, 1.0, 1.0, 1.0);
    spec.pieces.push_back({tent, 0.0, 1.0});
    spec.pieces.push_back({tent, 6.0, 7.0});
    spec.delta = 0.4;
    spec.n = 1.0;
    spec.t0 = 1.0;
    spec.p = 1.0;
    spec.weight = WeightFunction::exp_decay(1.0);
    return spec;
}

}  // namespace

TEST_CASE("required gap: closed forms and refusals") {
    auto v = WeightFunction::exp_decay(1.0);
    RequiredGap gap = required_gap(0.4, 1.0, v, 1.0);
    CHECK(std::abs(gap.cut - std::log(10.0)) < 1e-9);
    CHECK(std::abs(gap.gap - (std::log(10.0) + 2.0)) < 1e-9);

    // weight supported in [0,1]: the cut is the support end for every delta
    auto table = WeightFunction::table({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, true);
    for (double delta : {0.1, 1.0, 10.0}) {
        RequiredGap g = required_gap(delta, 1.0, table, 1.0);
        CHECK(g.cut == 1.0);
        CHECK(g.gap == 3.0);
    }

    CHECK_THROWS_AS(required_gap(0.4, 1.0, WeightFunction::constant(1.0), 1.0), Refusal);
}

TEST_CASE("required gap is monotone in delta and the class index") {
    auto v = WeightFunction::exp_decay(1.0);
    for (int i = 0; i < 10; ++i) {
        double d1 = 0.1 + 0.09 * i, d2 = d1 + 0.09;
        for (int n = 1; n <= 10; ++n) {
            CHECK(required_gap(d1, n, v, 1.0).gap >= required_gap(d2, n, v, 1.0).gap);
            if (n < 10)
                CHECK(required_gap(d1, n + 1, v, 1.0).gap >= required_gap(d1, n, v, 1.0).gap);
        }
    }
}

TEST_CASE("class membership: tent is K_1, its double is not") {
    auto tent = tent_function(0.01, 2.0, 1.0, 1.0, 1.0);
    KnReport rep = kn_membership(tent, 1.0);
    CHECK(rep.member);
    CHECK(rep.sup_norm == doctest::Approx(1.0));
    CHECK(rep.max_slope == doctest::Approx(1.0));

    auto zero = GridFunction::zeros(0.01, 2.0);
    rep = kn_membership(zero, 1.0);
    CHECK(rep.member);
    CHECK(rep.sup_norm == 0.0);
    CHECK(rep.max_slope == 0.0);

    CHECK_FALSE(kn_membership(scaled(2.0, tent), 1.0).member);
}

TEST_CASE("the invariant classes really are translation invariant") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> time(0.0, 10.0);
    std::uniform_int_distribution<int> n_pick(1, 3);
    for (int i = 0; i < 100; ++i) {
        double n = n_pick(rng);
        auto f = random_kn_function(rng, n, 0.01, 6.0);
        REQUIRE(kn_membership(f, n).member);
        CHECK(kn_membership(translate(f, time(rng)), n).member);
    }
}

TEST_CASE("tent pair: period 12 certificate passing well under delta") {
    ShadowingSpec spec = tent_spec();
    ShadowingCertificate cert = construct_shadowing_point(spec, 0.01);
    CHECK(cert.period == doctest::Approx(12.0));  // 4.3026 rounded up to 5
    CHECK(cert.gap_used == doctest::Approx(5.0));
    CHECK(cert.period_residual == 0.0);
    CHECK(cert.class_check.member);
    for (const auto& pe : cert.per_piece_errors) CHECK(pe.max_error < 0.4);

    VerificationReport rep = verify_shadowing(cert, spec, 0.01);
    CHECK(rep.overall_pass);
    CHECK(rep.pass_delta);
    CHECK(rep.reproduces_recorded);
}

TEST_CASE("measured errors respect the analytic budget") {
    ShadowingSpec spec = tent_spec();
    ShadowingCertificate cert = construct_shadowing_point(spec, 0.01);
    double tail = spec.weight.tail_integral(cert.cut).value;
    double bound = 2.0 * spec.n * std::pow(tail, 1.0 / spec.p);
    for (const auto& pe : cert.per_piece_errors)
        CHECK(pe.max_error <= bound + 0.01 * spec.delta + 1e-9);
}

TEST_CASE("gaps below the requirement are rejected naming the piece") {
    ShadowingSpec spec = tent_spec();
    spec.pieces[1].a = 2.0;  // gap 1 < M
    spec.pieces[1].b = 3.0;
    try {
        construct_shadowing_point(spec);
        FAIL("construction should have rejected the short gap");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("piece 2") != std::string::npos);
    }

    ShadowingSpec heavy = tent_spec();
    heavy.pieces[0].y = scaled(3.0, heavy.pieces[0].y);
    CHECK_THROWS_AS(construct_shadowing_point(heavy), std::invalid_argument);
}

TEST_CASE("the zero orbit shadows itself") {
    ShadowingSpec spec;
    spec.pieces.push_back({GridFunction::zeros(0.01, 2.0), 0.0, 1.0});
    spec.delta = 0.4;
    spec.n = 1.0;
    spec.t0 = 1.0;
    spec.p = 1.0;
    spec.weight = WeightFunction::exp_decay(1.0);
    ShadowingCertificate cert = construct_shadowing_point(spec);
    CHECK(sup_abs(cert.x) == 0.0);
    CHECK(cert.per_piece_errors[0].max_error == 0.0);
    CHECK(verify_shadowing(cert, spec, 0.01).overall_pass);
}

TEST_CASE("tampering with the witness is caught with a located time") {
    ShadowingSpec spec = tent_spec();
    ShadowingCertificate cert = construct_shadowing_point(spec, 0.01);
    ShadowingCertificate bad = cert;
    size_t node = size_t(std::llround(1.5 / 0.01));  // inside [a_1, b_1 + C]
    bad.x[node] += spec.delta;
    VerificationReport rep = verify_shadowing(bad, spec, 0.01);
    CHECK_FALSE(rep.overall_pass);
    CHECK_FALSE(rep.class_check.member);  // the spike breaks the slope bound
    CHECK_FALSE(rep.reproduces_recorded);
    CHECK(rep.first_mismatch_t >= 0.0);
    CHECK(rep.max_reproduction_gap > 1e-9);
}

TEST_CASE("seeded specs always verify (soundness of the splice construction)") {
    std::mt19937_64 rng(99);
    auto v = WeightFunction::exp_decay(1.0);
    for (int i = 0; i < 10; ++i) {
        ShadowingSpec spec = random_shadowing_spec(rng, v, 1.0);
        ShadowingCertificate cert = construct_shadowing_point(spec, 0.01);
        VerificationReport rep = verify_shadowing(cert, spec, 0.01);
        CHECK(rep.overall_pass);
        CHECK(rep.period_residual == 0.0);
        CHECK(rep.class_check.member);
    }
}

TEST_CASE("discrete-time bridge: lattice times only") {
    ShadowingSpec spec = tent_spec();  // a, b already integers
    ShadowingCertificate cert = discrete_osp_check(1.0, spec);
    CHECK(cert.lattice_aligned);
    CHECK(cert.period_residual == 0.0);
    for (const auto& pe : cert.per_piece_errors) CHECK(pe.max_error < spec.delta);

    ShadowingSpec off = tent_spec();
    off.pieces[1].a = 6.25;
    CHECK_THROWS_AS(discrete_osp_check(0.5, off), std::invalid_argument);

    ShadowingSpec zero;
    zero.pieces.push_back({GridFunction::zeros(0.01, 2.0), 0.0, 2.0});
    zero.delta = 0.3;
    zero.n = 1.0;
    zero.weight = WeightFunction::exp_decay(1.0);
    CHECK(discrete_osp_check(1.0, zero).lattice_aligned);
}

TEST_CASE("certificates round-trip through the text form") {
    ShadowingSpec spec = tent_spec();
    ShadowingCertificate cert = construct_shadowing_point(spec, 0.01);
    CertificateBundle bundle = parse_certificate(cert.serialize(spec));

    REQUIRE(bundle.certificate.x.n_samples() == cert.x.n_samples());
    for (size_t j = 0; j < cert.x.n_samples(); ++j)
        CHECK(bundle.certificate.x[j] == cert.x[j]);

    VerificationReport rep = verify_shadowing(bundle.certificate, bundle.spec, 0.01);
    CHECK(rep.overall_pass);
    CHECK(rep.max_reproduction_gap <= 1e-9);
}
