#include "sgsp/probes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sgsp/errors.hpp"

namespace sgsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Least class index containing f.
double class_of(const GridFunction& f) {
    double sup = sup_abs(f), slope = max_slope(f);
    if (!std::isfinite(slope))
        throw std::invalid_argument("state has a jump; it belongs to no Lipschitz class");
    return std::max(1.0, std::ceil(std::max(sup, slope) - 1e-9));
}

NormOptions horizon_options(const WeightFunction& v, double accuracy_mass,
                            std::vector<double>* row_storage, double step) {
    NormOptions opts;
    opts.fixed_horizon = std::max(1.0, cut_for_tail_mass(v, accuracy_mass));
    if (row_storage) {
        *row_storage = weight_row(v, step, opts.fixed_horizon);
        opts.weight_cache = row_storage;
    }
    return opts;
}

double lattice_ceil(double x, double unit) {
    return std::ceil(x / unit - 1e-12) * unit;
}
double lattice_floor(double x, double unit) {
    return std::floor(x / unit + 1e-9) * unit;
}

}  // namespace

MixingWitness mixing_witness(const TranslationEngine& engine, const GridFunction& u,
                             double radius_u, double radius_w, double t,
                             const MixingOptions& opt) {
    if (!(radius_u > 0) || !(radius_w > 0))
        throw std::invalid_argument("mixing witness needs positive radii");
    if (t < 0) throw std::invalid_argument("mixing witness needs t >= 0");
    MixingWitness out;
    out.t = t;

    double h = u.step();
    double delta = 0.5 * std::min(radius_u, radius_w);

    if (sup_abs(u) == 0.0) {
        // the zero orbit shadows itself
        double period = lattice_ceil(t + opt.t0, opt.t0);
        out.x = GridFunction::zeros(h, period, Extension::Periodic, period);
        out.w = out.x;
        out.period = period;
        out.t_prime = period - t;
        out.built = true;
        out.verified = true;
        return out;
    }

    double n = class_of(u);
    RequiredGap gap = required_gap(delta, n, engine.weight, engine.p);
    double m_lat = lattice_ceil(gap.gap, opt.t0);
    out.threshold = m_lat;
    if (t < m_lat - 1e-12) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "no witness constructed at t=%.6g: below the constructive threshold %.6g",
                      t, m_lat);
        out.reason = buf;
        return out;
    }

    double b2 = lattice_floor(t, opt.t0) + opt.t0;  // window end strictly past t
    ShadowingSpec spec;
    spec.pieces.push_back({u, 0.0, 0.0});
    spec.pieces.push_back({GridFunction::zeros(h, 2.0 * h), m_lat, b2});
    spec.delta = delta;
    spec.n = n;
    spec.t0 = opt.t0;
    spec.p = engine.p;
    spec.weight = engine.weight;

    ShadowingCertificate cert = construct_shadowing_point(spec, /*verify_step=*/opt.t0);
    out.x = cert.x;
    out.period = cert.period;
    out.t_prime = cert.period - t;
    out.w = translate(out.x, out.t_prime);

    std::vector<double> row;
    NormOptions opts = horizon_options(
        engine.weight, std::pow(0.01 * delta / (2.0 * n + 1.0), engine.p), &row, h);
    out.quad_horizon = opts.fixed_horizon;
    out.dist_x_u = lp_v_distance(out.x, u, engine.weight, engine.p, opts).upper();
    out.norm_tx = lp_v_norm(translate(out.x, t), engine.weight, engine.p, opts).upper();
    out.norm_w = lp_v_norm(out.w, engine.weight, engine.p, opts).upper();
    out.dist_tw_u = lp_v_distance(translate(out.w, t), u, engine.weight, engine.p, opts).upper();
    out.built = true;
    out.verified = out.dist_x_u < radius_u && out.norm_tx < radius_w && out.norm_w < radius_w &&
                   out.dist_tw_u < radius_u;
    return out;
}

ReturnSetReport return_set_scan(const TranslationEngine& engine, const Ball& u_ball,
                                const Ball& w_ball, const std::vector<double>& t_grid,
                                const MixingOptions& opt) {
    ReturnSetReport rep;
    const auto* u = std::get_if<GridFunction>(&u_ball.center);
    if (!u) throw std::invalid_argument("return_set_scan expects a grid-function center for U");
    if (std::isinf(w_ball.radius)) {
        for (double t : t_grid) rep.outcomes.push_back({t, false, true, true, kInf, kInf});
        if (!t_grid.empty()) rep.first_all_pass = t_grid.front();
        rep.note = "W is the whole space; both return sets are trivially full";
        return rep;
    }
    if (const auto* w = std::get_if<GridFunction>(&w_ball.center); !w || sup_abs(*w) != 0.0)
        throw std::invalid_argument("return_set_scan expects W centred at 0");

    try {
        (void)required_gap(0.5 * std::min(u_ball.radius, w_ball.radius),
                           sup_abs(*u) == 0 ? 1.0 : class_of(*u), engine.weight, engine.p);
    } catch (const Refusal& r) {
        rep.witnesses_available = false;
        rep.note = std::string("mixing witnesses unavailable: ") + r.what();
        for (double t : t_grid) rep.outcomes.push_back({t, false, false, false, 0.0, 0.0});
        return rep;
    }

    for (double t : t_grid) {
        MixingWitness w = mixing_witness(engine, *u, u_ball.radius, w_ball.radius, t, opt);
        WitnessOutcome o;
        o.t = t;
        o.constructed = w.built;
        if (w.built) {
            o.in_r_uw = w.dist_x_u < u_ball.radius && w.norm_tx < w_ball.radius;
            o.in_r_wu = w.norm_w < w_ball.radius && w.dist_tw_u < u_ball.radius;
            o.margin_uw = w_ball.radius - w.norm_tx;
            o.margin_wu = u_ball.radius - w.dist_tw_u;
        }
        rep.outcomes.push_back(o);
        if (opt.keep_witnesses) rep.witnesses.push_back(std::move(w));
    }
    for (size_t j = rep.outcomes.size(); j-- > 0;) {
        if (!(rep.outcomes[j].in_r_uw && rep.outcomes[j].in_r_wu)) break;
        rep.first_all_pass = rep.outcomes[j].t;
    }
    return rep;
}

namespace {

PeriodicApproximant translation_approximant(const TranslationEngine& engine,
                                            const GridFunction& target, double delta,
                                            const ApproximantOptions& opt) {
    PeriodicApproximant out;
    double h = target.step();
    if (sup_abs(target) == 0.0) {
        out.point = GridFunction::zeros(h, opt.t0, Extension::Periodic, opt.t0);
        out.period = opt.t0;
        return out;
    }
    ShadowingSpec spec;
    spec.pieces.push_back({target, 0.0, 0.0});
    spec.delta = delta;
    spec.n = class_of(target);
    spec.t0 = opt.t0;
    spec.p = engine.p;
    spec.weight = engine.weight;
    ShadowingCertificate cert = construct_shadowing_point(spec, opt.t0);
    std::vector<double> row;
    NormOptions opts = horizon_options(
        engine.weight, std::pow(1e-3 * delta / (2.0 * spec.n), engine.p), &row, h);
    out.point = cert.x;
    out.period = cert.period;
    out.error = lp_v_distance(cert.x, target, engine.weight, engine.p, opts).upper();
    out.period_return_residual = cert.period_residual;
    return out;
}

PeriodicApproximant second_order_approximant(const SecondOrderEngine& engine,
                                             const CoefficientPair& target, double,
                                             const ApproximantOptions& opt) {
    if (std::abs(target.rho() - engine.rho) > 1e-12 * engine.rho)
        throw std::invalid_argument("target rho must match the engine");
    PeriodicApproximant out;
    out.period = 2.0 * std::numbers::pi / opt.theta;
    size_t n = size_t(engine.n_trunc);
    if (x_rho_norm(target) == 0.0) {
        out.point = CoefficientPair::zeros(engine.rho, n);
        return out;
    }

    // eigenvectors (f, i k theta f) with f = e^{mu x}, alpha-form
    // c mu^2 = (i k theta)^2 - e (i k theta); admissible while |mu| < rho
    std::vector<CoefficientPair> dictionary;
    int nonzero_admissible = 0;
    std::complex<double> i_unit(0.0, 1.0);
    for (int k = -opt.dictionary_size; k <= opt.dictionary_size; ++k) {
        std::complex<double> lam = i_unit * (double(k) * opt.theta);
        std::complex<double> mu2 = (lam * lam - engine.e_coef() * lam) / engine.c_coef();
        std::complex<double> mu = std::sqrt(mu2);
        if (std::abs(mu) >= 0.995 * engine.rho) continue;
        if (k != 0) ++nonzero_admissible;
        std::vector<std::complex<double>> a(n + 1), b(n + 1);
        std::complex<double> ratio = mu / engine.rho, pow_r = 1.0;
        for (size_t j = 0; j <= n; ++j) {
            a[j] = pow_r;
            b[j] = lam * pow_r;
            pow_r *= ratio;
        }
        dictionary.emplace_back(engine.rho, std::move(a), std::move(b));
    }
    if (nonzero_admissible == 0)
        throw Refusal("no imaginary-eigenvalue dictionary within the configured search range");

    Eigen::MatrixXcd mat(2 * (n + 1), dictionary.size());
    Eigen::VectorXcd rhs(2 * (n + 1));
    for (size_t j = 0; j <= n; ++j) {
        rhs(long(j)) = target.a()[j];
        rhs(long(n + 1 + j)) = target.b()[j];
        for (size_t col = 0; col < dictionary.size(); ++col) {
            mat(long(j), long(col)) = dictionary[col].a()[j];
            mat(long(n + 1 + j), long(col)) = dictionary[col].b()[j];
        }
    }
    Eigen::VectorXcd coefs = mat.colPivHouseholderQr().solve(rhs);
    CoefficientPair q = CoefficientPair::zeros(engine.rho, n);
    for (size_t col = 0; col < dictionary.size(); ++col)
        q = lin_comb(1.0, q, coefs(long(col)), dictionary[col]);
    out.point = q;
    out.error = x_rho_norm(lin_comb(1.0, q, -1.0, target));
    CoefficientPair round_trip = second_order_apply(out.period, q, engine).value;
    out.period_return_residual = x_rho_norm(lin_comb(1.0, round_trip, -1.0, q));
    return out;
}

PeriodicApproximant blackscholes_approximant(const BlackScholesEngine& engine,
                                             const MonomialCombo& target, double,
                                             const ApproximantOptions& opt) {
    PeriodicApproximant out;
    out.period = 2.0 * std::numbers::pi / opt.theta;
    if (target.zero()) {
        out.point = MonomialCombo{};
        return out;
    }

    double re_lo = engine.norm_params.tau_y > 0 ? -0.9 * engine.norm_params.tau_y : 0.0;
    double re_hi = 0.95 * engine.norm_params.s;
    std::vector<std::complex<double>> exponents;
    int nonzero_admissible = 0;
    std::complex<double> i_unit(0.0, 1.0);
    double nu = engine.nu(), g = engine.gamma();
    for (int k = 0; k <= opt.dictionary_size; ++k) {
        // nu^2 b^2 + g nu b - (r + i k theta) = 0
        std::complex<double> target_lam = i_unit * (double(k) * opt.theta);
        std::complex<double> disc = std::sqrt(std::complex<double>(g * nu * g * nu, 0.0) +
                                              4.0 * nu * nu * (engine.rate + target_lam));
        for (int sign : {+1, -1}) {
            std::complex<double> beta = (-g * nu + double(sign) * disc) / (2.0 * nu * nu);
            if (beta.real() >= re_lo && beta.real() <= re_hi) {
                exponents.push_back(beta);
                if (k != 0) ++nonzero_admissible;
            }
        }
    }
    if (nonzero_admissible == 0)
        throw Refusal("no imaginary-eigenvalue dictionary within the configured search range");

    // least squares against the target on a coarse log grid, weighted the way
    // the sup norm weighs
    const int rows_per_decade = 8;
    LogGridOptions lg;
    double l_lo = std::log(lg.x_lo), l_hi = std::log(lg.x_hi);
    int rows = int((l_hi - l_lo) / std::log(10.0)) * rows_per_decade + 1;
    Eigen::MatrixXcd mat(rows, exponents.size());
    Eigen::VectorXcd rhs(rows);
    const auto& pars = engine.norm_params;
    for (int i = 0; i < rows; ++i) {
        double l = l_lo + (l_hi - l_lo) * double(i) / double(rows - 1);
        double x = std::exp(l);
        double den = (1.0 + std::pow(x, pars.s)) * (1.0 + std::pow(x, -pars.tau_y));
        rhs(i) = target.eval(x) / den;
        for (size_t c = 0; c < exponents.size(); ++c)
            mat(i, long(c)) = std::exp(exponents[c] * l) / den;
    }
    Eigen::VectorXcd coefs = mat.colPivHouseholderQr().solve(rhs);
    std::vector<MonomialTerm> terms;
    for (size_t c = 0; c < exponents.size(); ++c)
        terms.push_back({exponents[c], coefs(long(c))});
    MonomialCombo q(std::move(terms));
    out.point = q;
    out.error = y_stau_norm(lin_comb(1.0, q, -1.0, target), pars).value;
    MonomialCombo round_trip = blackscholes_apply(out.period, q, engine);
    out.period_return_residual = y_stau_norm(lin_comb(1.0, round_trip, -1.0, q), pars).value;
    return out;
}

}  // namespace

PeriodicApproximant periodic_approximant(const SemigroupHandle& handle, const State& target,
                                         double delta, const ApproximantOptions& opt) {
    if (!(delta > 0)) throw std::invalid_argument("periodic_approximant needs delta > 0");
    if (auto* tr = std::get_if<TranslationEngine>(&handle))
        return translation_approximant(*tr, std::get<GridFunction>(target), delta, opt);
    if (auto* so = std::get_if<SecondOrderEngine>(&handle))
        return second_order_approximant(*so, std::get<CoefficientPair>(target), delta, opt);
    return blackscholes_approximant(std::get<BlackScholesEngine>(handle),
                                    std::get<MonomialCombo>(target), delta, opt);
}

IrregularVectorResult irregular_vector(const WeightFunction& v, double epsilon, double horizon,
                                       const IrregularOptions& opt) {
    if (!(epsilon > 0) || !(epsilon < 1))
        throw std::invalid_argument("irregular_vector needs epsilon in (0, 1)");
    if (!(horizon > 0)) throw std::invalid_argument("irregular_vector needs horizon > 0");
    TailIntegral total = v.tail_integral(0.0);
    if (!total.finite())
        throw Refusal(std::string("irregular vector unavailable: weight mass is ") +
                      to_string(total.verdict));

    IrregularVectorResult out;
    double p = opt.p;
    double m1 = std::pow(v.integral_between(0.0, 1.0), 1.0 / p);
    double height = 2.0 / (epsilon * m1);
    out.height = height;
    out.threshold_hi = 1.0 / epsilon;
    out.threshold_lo = epsilon;
    // distance at which future plateaus fade below epsilon/2
    double reach = cut_for_tail_mass(
        v, std::pow(0.5 * epsilon, p) / (2.0 * std::pow(height, p)));

    double odds = opt.growth_ratio;
    double c = opt.first_block_start;
    while (true) {
        double len = odds * c;
        out.blocks.emplace_back(c, c + len);
        double end = c + len;
        odds *= opt.growth_ratio;
        c = end + odds * end + reach;
        if (c > horizon) break;
    }

    double x_max = std::ceil(out.blocks.back().second / opt.grid_step) * opt.grid_step;
    out.f = GridFunction::sampled(opt.grid_step, x_max, [&](double x) {
        for (const auto& [lo, hi] : out.blocks)
            if (x >= lo && x <= hi) return height;
        return 0.0;
    });

    // orbit norms from the closed-form block integrals
    size_t steps = size_t(std::floor(horizon / opt.sim_step));
    out.norm_series.reserve(steps + 1);
    std::vector<char> big(steps + 1), small(steps + 1);
    for (size_t j = 0; j <= steps; ++j) {
        double s = double(j) * opt.sim_step;
        double mass = 0.0;
        for (const auto& [lo, hi] : out.blocks) {
            if (hi <= s) continue;
            mass += std::pow(height, p) *
                    (v.tail_integral(std::max(lo - s, 0.0)).value -
                     v.tail_integral(std::max(hi - s, 0.0)).value);
        }
        double norm = std::pow(mass, 1.0 / p);
        out.norm_series.emplace_back(s, norm);
        big[j] = norm >= out.threshold_hi ? 1 : 0;
        small[j] = norm < out.threshold_lo ? 1 : 0;
    }
    out.big = density_estimate(BooleanSeries(opt.sim_step, std::move(big)), horizon,
                               DensityMode::Upper);
    out.small = density_estimate(BooleanSeries(opt.sim_step, std::move(small)), horizon,
                                 DensityMode::Upper);
    return out;
}

DensityEstimate big_density_for_epsilon(const IrregularVectorResult& r, double epsilon) {
    if (!(epsilon > 0) || !(epsilon < 1))
        throw std::invalid_argument("big_density_for_epsilon needs epsilon in (0, 1)");
    std::vector<char> big(r.norm_series.size());
    for (size_t j = 0; j < r.norm_series.size(); ++j)
        big[j] = r.norm_series[j].second >= 1.0 / epsilon ? 1 : 0;
    double step = r.norm_series.size() > 1 ? r.norm_series[1].first - r.norm_series[0].first : 1.0;
    return density_estimate(BooleanSeries(step, std::move(big)),
                            r.norm_series.back().first, DensityMode::Upper);
}

std::vector<FhTargetReport> fh_hit_density(const SemigroupHandle& handle, const State& x0,
                                           const std::vector<Ball>& targets, double horizon,
                                           double step, const FhOptions& opt) {
    if (!(horizon > 0) || !(step > 0))
        throw std::invalid_argument("fh_hit_density needs horizon, step > 0");

    size_t steps = size_t(std::floor(horizon / step));
    std::vector<FhTargetReport> reports(targets.size());
    std::vector<std::vector<char>> events(targets.size(),
                                          std::vector<char>(steps + 1, 0));

    // translation distances need an explicit quadrature horizon when a
    // periodic state keeps mass moving forever
    NormOptions tr_opts;
    std::vector<double> row;
    double quad_slack = 0.0;
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        bool any_periodic = false;
        auto check = [&](const State& s) {
            if (auto* f = std::get_if<GridFunction>(&s))
                any_periodic |= f->extension() == Extension::Periodic;
        };
        check(x0);
        for (const auto& t : targets) check(t.center);
        if (any_periodic) {
            double sup_tot = 1.0;
            if (auto* f = std::get_if<GridFunction>(&x0)) sup_tot += sup_abs(*f);
            for (const auto& t : targets)
                if (auto* f = std::get_if<GridFunction>(&t.center)) sup_tot += sup_abs(*f);
            try {
                tr_opts = horizon_options(
                    tr->weight,
                    std::pow(opt.quad_tolerance, tr->p) / std::pow(sup_tot, tr->p), &row,
                    std::get<GridFunction>(x0).step());
                quad_slack = opt.quad_tolerance;
            } catch (const Refusal&) {
                // divergent weight: the adaptive path settles verdicts itself
            }
        }
    }

    size_t steps_measured = steps;
    if (opt.exact_period > 0.0) {
        double ratio = opt.exact_period / step;
        if (std::abs(ratio - std::llround(ratio)) > 1e-9)
            throw std::invalid_argument("exact_period must be a multiple of the scan step");
        steps_measured = std::min(steps, size_t(std::llround(ratio)) - 1);
    }

    State cur = x0;
    for (size_t j = 0; j <= steps_measured; ++j) {
        double t = double(j) * step;
        for (size_t k = 0; k < targets.size(); ++k) {
            double d;
            if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
                d = lp_v_distance(std::get<GridFunction>(cur),
                                  std::get<GridFunction>(targets[k].center), tr->weight, tr->p,
                                  tr_opts)
                        .upper();
            } else {
                d = state_distance(handle, cur, targets[k].center);
            }
            reports[k].distance_series.emplace_back(t, d);
            events[k][j] = (std::isinf(targets[k].radius) ||
                            d <= targets[k].radius + quad_slack)
                               ? 1
                               : 0;
        }
        if (j < steps_measured) cur = apply(handle, step, cur);
    }
    if (steps_measured < steps) {
        size_t period_steps = steps_measured + 1;
        for (size_t k = 0; k < targets.size(); ++k) {
            for (size_t j = period_steps; j <= steps; ++j) {
                size_t src = j % period_steps;
                events[k][j] = events[k][src];
                reports[k].distance_series.emplace_back(double(j) * step,
                                                        reports[k].distance_series[src].second);
            }
        }
    }
    for (size_t k = 0; k < targets.size(); ++k) {
        reports[k].radius = targets[k].radius;
        reports[k].quad_tolerance = quad_slack;
        reports[k].density = density_estimate(BooleanSeries(step, std::move(events[k])), horizon,
                                              DensityMode::Lower, opt.density);
    }
    return reports;
}

}  // namespace sgsp
