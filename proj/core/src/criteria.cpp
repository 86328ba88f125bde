#include "sgsp/criteria.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sgsp/errors.hpp"
#include "sgsp/random_states.hpp"

namespace sgsp {

namespace {

std::complex<double> imag_unit() { return {0.0, 1.0}; }

CState c_lin_comb(std::complex<double> alpha, const CState& x, std::complex<double> beta,
                  const CState& y) {
    if (auto* f = std::get_if<ComplexGridFunction>(&x))
        return lin_comb(alpha, *f, beta, std::get<ComplexGridFunction>(y));
    if (auto* u = std::get_if<CoefficientPair>(&x))
        return lin_comb(alpha, *u, beta, std::get<CoefficientPair>(y));
    return lin_comb(alpha, std::get<MonomialCombo>(x), beta, std::get<MonomialCombo>(y));
}

double c_norm(const SemigroupHandle& handle, const CState& s) {
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        LpNorm n = lp_v_norm(std::get<ComplexGridFunction>(s), tr->weight, tr->p);
        return n.finite() ? n.upper() : std::numeric_limits<double>::infinity();
    }
    if (std::holds_alternative<SecondOrderEngine>(handle))
        return x_rho_norm(std::get<CoefficientPair>(s));
    const auto& bs = std::get<BlackScholesEngine>(handle);
    return y_stau_norm(std::get<MonomialCombo>(s), bs.norm_params).value;
}

Eigen::VectorXcd feature_vector(const SemigroupHandle& handle, const CState& s) {
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        const auto& f = std::get<ComplexGridFunction>(s);
        size_t stride = std::max<size_t>(1, f.n_samples() / 4096);
        long rows = long((f.n_samples() + stride - 1) / stride);
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows);
        double h = f.step();
        for (long r = 0; r < rows; ++r) {
            size_t j = size_t(r) * stride;
            double x = double(j) * h;
            out(r) = f[j] * std::sqrt(tr->weight(x) * h * double(stride));
        }
        return out;
    }
    if (std::holds_alternative<SecondOrderEngine>(handle)) {
        const auto& u = std::get<CoefficientPair>(s);
        size_t n = u.a().size();
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(long(2 * n));
        for (size_t j = 0; j < n; ++j) {
            out(long(j)) = u.a()[j];
            out(long(n + j)) = u.b()[j];
        }
        return out;
    }
    const auto& bs = std::get<BlackScholesEngine>(handle);
    const auto& combo = std::get<MonomialCombo>(s);
    const int rows_per_decade = 8;
    LogGridOptions lg;
    double l_lo = std::log(lg.x_lo), l_hi = std::log(lg.x_hi);
    int rows = int((l_hi - l_lo) / std::log(10.0)) * rows_per_decade + 1;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows);
    for (int i = 0; i < rows; ++i) {
        double l = l_lo + (l_hi - l_lo) * double(i) / double(rows - 1);
        double x = std::exp(l);
        double den =
            (1.0 + std::pow(x, bs.norm_params.s)) * (1.0 + std::pow(x, -bs.norm_params.tau_y));
        out(i) = combo.zero() ? 0.0 : combo.eval(x) / den;
    }
    return out;
}

}  // namespace

EigenfieldReport eigenfield_check(const SemigroupHandle& handle, const FieldSampler& field,
                                  const GeneratorApplier& generator,
                                  std::span<const double> t_samples,
                                  std::span<const CState> dictionary,
                                  const EigenfieldOptions& opt) {
    EigenfieldReport rep;
    rep.smoothness_c2 = opt.smoothness_c2;
    rep.avoids_c0 = opt.avoids_c0;

    std::vector<CState> accepted;
    for (size_t i = 0; i < t_samples.size(); ++i) {
        double t = t_samples[i];
        std::optional<CState> state = field(t);
        if (!state) {
            rep.rejected_samples.push_back(i);
            continue;
        }
        CState af = generator(*state);
        CState residual = c_lin_comb(1.0, af, -imag_unit() * t, *state);
        double r = c_norm(handle, residual);
        rep.residuals.emplace_back(t, r);
        rep.residual_sup = std::max(rep.residual_sup, r);
        rep.boundedness_sup = std::max(rep.boundedness_sup, c_norm(handle, *state));
        accepted.push_back(std::move(*state));
    }
    rep.degenerate_field = accepted.empty() || rep.boundedness_sup == 0.0;

    if (!accepted.empty() && !dictionary.empty()) {
        Eigen::Index rows = feature_vector(handle, accepted.front()).size();
        Eigen::MatrixXcd mat(rows, long(accepted.size()));
        for (size_t c = 0; c < accepted.size(); ++c)
            mat.col(long(c)) = feature_vector(handle, accepted[c]);
        for (size_t k = 1; k <= accepted.size(); k = (k < 8 ? k + 1 : 2 * k))
            rep.span_sample_counts.push_back(std::min(k, accepted.size()));
        if (rep.span_sample_counts.back() != accepted.size())
            rep.span_sample_counts.push_back(accepted.size());
        for (const CState& target : dictionary) {
            Eigen::VectorXcd b = feature_vector(handle, target);
            double scale = b.norm();
            std::vector<double> residuals;
            for (size_t k : rep.span_sample_counts) {
                auto block = mat.leftCols(long(k));
                Eigen::VectorXcd sol = block.colPivHouseholderQr().solve(b);
                double res = (block * sol - b).norm();
                residuals.push_back(scale > 0 ? res / scale : 0.0);
            }
            rep.span_residuals.push_back(std::move(residuals));
        }
    }

    bool span_ok = !rep.span_residuals.empty();
    for (const auto& r : rep.span_residuals)
        span_ok = span_ok && !r.empty() && r.back() < opt.span_tol;
    rep.criterion_satisfied =
        !rep.degenerate_field && rep.residual_sup < opt.residual_tol && span_ok;
    return rep;
}

FieldSampler translation_wave_field(const TranslationFieldOptions& opt) {
    double step = opt.grid_step, x_max = opt.x_max;
    return [step, x_max](double t) -> std::optional<CState> {
        // e^{itx}, tapered to 0 on the last unit so the forward difference
        // stays bounded at the cutoff
        auto f = ComplexGridFunction::sampled(step, x_max, [&](double x) {
            std::complex<double> wave = std::exp(std::complex<double>(0.0, t * x));
            if (x > x_max - 1.0) wave *= (x_max - x);
            return wave;
        });
        return CState(std::move(f));
    };
}

GeneratorApplier translation_difference_generator() {
    return [](const CState& s) -> CState {
        const auto& f = std::get<ComplexGridFunction>(s);
        double h = f.step();
        return lin_comb<std::complex<double>>(1.0 / h, translate(f, h), -1.0 / h, f);
    };
}

FieldSampler second_order_exponential_field(const SecondOrderEngine& engine) {
    return [engine](double t) -> std::optional<CState> {
        std::complex<double> lam = imag_unit() * t;
        std::complex<double> mu2 = (lam * lam - engine.e_coef() * lam) / engine.c_coef();
        std::complex<double> mu = std::sqrt(mu2);
        if (std::abs(mu) >= engine.rho * (1.0 - 1e-9)) return std::nullopt;
        size_t n = size_t(engine.n_trunc);
        std::vector<std::complex<double>> a(n + 1), b(n + 1);
        std::complex<double> ratio = mu / engine.rho, pw = 1.0;
        for (size_t j = 0; j <= n; ++j) {
            a[j] = pw;
            b[j] = lam * pw;
            pw *= ratio;
        }
        return CState(CoefficientPair(engine.rho, std::move(a), std::move(b)));
    };
}

GeneratorApplier second_order_generator_applier(const SecondOrderEngine& engine) {
    return [engine](const CState& s) -> CState {
        return second_order_generator(std::get<CoefficientPair>(s), engine);
    };
}

FieldSampler blackscholes_spectral_field(const BlackScholesEngine& engine) {
    return [engine](double t) -> std::optional<CState> {
        double nu = engine.nu(), g = engine.gamma();
        std::complex<double> disc = std::sqrt(std::complex<double>(g * nu * g * nu, 0.0) +
                                              4.0 * nu * nu * (engine.rate + imag_unit() * t));
        double re_lo = engine.norm_params.tau_y > 0 ? -0.9 * engine.norm_params.tau_y : 0.0;
        double re_hi = 0.95 * engine.norm_params.s;
        for (int sign : {+1, -1}) {
            std::complex<double> beta = (-g * nu + double(sign) * disc) / (2.0 * nu * nu);
            if (beta.real() >= re_lo && beta.real() <= re_hi)
                return CState(MonomialCombo::monomial(beta));
        }
        return std::nullopt;
    };
}

GeneratorApplier blackscholes_generator_applier(const BlackScholesEngine& engine) {
    return [engine](const CState& s) -> CState {
        const auto& combo = std::get<MonomialCombo>(s);
        std::vector<MonomialTerm> terms = combo.terms();
        for (auto& term : terms) term.coefficient *= engine.eigenvalue(term.exponent);
        return CState(MonomialCombo(std::move(terms)));
    };
}

bool hhte_parameter_gate(double alpha, double tau, double rho) {
    if (!(alpha > 0) || !(tau > 0) || !(rho > 0))
        throw std::invalid_argument("hhte gate needs positive parameters");
    return alpha * tau * rho > 2.0;
}

bool blackscholes_parameter_gate(double s, double tau_y, double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("blackscholes gate needs sigma > 0");
    return s > 1.0 && tau_y >= 0.0 && s * (sigma / std::sqrt(2.0)) > 1.0;
}

const char* to_string(EquivalenceReport::Overall o) {
    return o == EquivalenceReport::Overall::Consistent ? "consistent" : "inconsistent";
}

std::vector<GridFunction> default_dictionary(double grid_step) {
    std::vector<GridFunction> dict;
    dict.push_back(tent_function(grid_step, 4.0, 1.0, 1.0, 1.0));
    dict.push_back(GridFunction::sampled(grid_step, 5.0, [](double x) {
        if (x < 1.0) return x;
        if (x < 3.0) return 1.0;
        if (x < 4.0) return 4.0 - x;
        return 0.0;
    }));
    dict.push_back(tent_function(grid_step, 5.0, 2.0, 0.9, 1.6));  // a K_2 member
    return dict;
}

namespace {

/// g moved to start at `offset`: zero before, a unit ramp up to g(0), then g.
GridFunction shifted_with_ramp(const GridFunction& g, double offset) {
    double head = g.eval(0.0);
    return GridFunction::sampled(g.step(), offset + g.x_max(), [&](double x) {
        if (x <= offset - 1.0) return 0.0;
        if (x < offset) return head * (x - (offset - 1.0));
        return g.eval(x - offset);
    });
}

}  // namespace

EquivalenceReport translation_equivalences(const WeightFunction& v, double p,
                                           std::span<const GridFunction> dictionary,
                                           const EquivalenceConfig& config) {
    if (dictionary.empty()) throw std::invalid_argument("equivalences need a test dictionary");
    EquivalenceReport rep;
    rep.integral = v.tail_integral(0.0);

    if (rep.integral.verdict == TailIntegral::Verdict::Inconclusive) {
        rep.note = "weight mass inconclusive; probes skipped";
        rep.overall = EquivalenceReport::Overall::Consistent;
        return rep;
    }

    if (rep.integral.divergent()) {
        try {
            (void)required_gap(config.delta, 1.0, v, p);
            rep.note = "divergent mass but a finite gap was produced";
            rep.overall = EquivalenceReport::Overall::Inconsistent;
            return rep;
        } catch (const Refusal& r) {
            rep.refusals.push_back(r.what());
        }
        if (std::holds_alternative<ConstantLevel>(v.kind())) {
            // norms never grow under a constant weight: a ball around a
            // larger state is unreachable, the scan must report density zero
            TranslationEngine engine(v, p);
            GridFunction x0 = tent_function(config.grid_step, 6.0, 1.0, 1.0, 1.0);
            GridFunction far = scaled(3.0, x0);
            auto reports = fh_hit_density(SemigroupHandle(engine), State(x0),
                                          {Ball{State(far), 0.1}}, 60.0, 0.5);
            rep.fh_lower_densities.push_back(reports[0].density.lower);
            rep.fh_zero_demonstrated = reports[0].density.lower == 0.0;
            rep.fh_series = reports[0].density.ratios;
            if (!rep.fh_zero_demonstrated) {
                rep.note = "contraction scan unexpectedly positive";
                rep.overall = EquivalenceReport::Overall::Inconsistent;
                return rep;
            }
        }
        rep.overall = EquivalenceReport::Overall::Consistent;
        rep.note = "divergent mass; constructive refusals observed";
        return rep;
    }

    // finite mass: the positive side must come through on every probe
    rep.probes_run = true;
    std::mt19937_64 rng(config.seed);
    SpecRandomOptions spec_opts;
    spec_opts.step = config.grid_step;
    spec_opts.t0 = config.t0;
    spec_opts.delta_lo = 0.3;
    spec_opts.delta_hi = 0.8;
    spec_opts.s_hi = 3;
    spec_opts.window_max = 1.0;
    rep.shadow_total = config.shadow_suite;
    for (int i = 0; i < config.shadow_suite; ++i) {
        ShadowingSpec spec = random_shadowing_spec(rng, v, p, spec_opts);
        ShadowingCertificate cert = construct_shadowing_point(spec, config.verify_step);
        VerificationReport ver = verify_shadowing(cert, spec, config.verify_step);
        if (ver.overall_pass) ++rep.shadow_pass;
        if (i == 0) {
            rep.sample_certificate = cert;
            rep.certificate_text = cert.serialize(spec);
        }
    }
    rep.shadowing_ok = rep.shadow_pass == rep.shadow_total;

    TranslationEngine engine(v, p);
    SemigroupHandle handle(engine);
    ApproximantOptions approx_opts;
    approx_opts.t0 = config.t0;
    rep.periodic_density_ok = true;
    for (const GridFunction& g : dictionary) {
        PeriodicApproximant q = periodic_approximant(handle, State(g), config.delta, approx_opts);
        rep.approximant_errors.push_back(q.error);
        rep.periodic_density_ok = rep.periodic_density_ok && q.error < config.delta &&
                                  q.period_return_residual == 0.0;
    }

    // one periodic orbit tracing the entire dictionary: the visit times to
    // each target ball then have positive lower density
    double n_class = 1.0;
    for (const GridFunction& g : dictionary) {
        KnReport kn = kn_membership(g, 1e9);
        n_class = std::max(n_class, std::ceil(std::max(kn.sup_norm, kn.max_slope) - 1e-9));
    }
    std::vector<double> radii;
    double orbit_delta = config.delta;
    for (const GridFunction& g : dictionary) {
        double norm = lp_v_norm(g, v, p).upper();
        double radius = std::max(config.fh_ball_radius_min, config.fh_ball_radius_rel * norm);
        radii.push_back(radius);
        orbit_delta = std::min(orbit_delta, 0.4 * radius);
    }
    RequiredGap gap = required_gap(orbit_delta, n_class, v, p);
    double stride = std::ceil((gap.gap + config.t0) / config.t0) * config.t0;
    ShadowingSpec orbit_spec;
    orbit_spec.delta = orbit_delta;
    orbit_spec.n = n_class;
    orbit_spec.t0 = config.t0;
    orbit_spec.p = p;
    orbit_spec.weight = v;
    std::vector<Ball> targets;
    for (size_t r = 0; r < dictionary.size(); ++r) {
        double a = double(r) * stride;
        GridFunction y = r == 0 ? dictionary[r] : shifted_with_ramp(dictionary[r], a);
        orbit_spec.pieces.push_back({std::move(y), a, a});
        targets.push_back(Ball{State(dictionary[r]), radii[r]});
    }
    ShadowingCertificate orbit = construct_shadowing_point(orbit_spec, config.t0);
    double horizon = config.fh_periods * orbit.period;
    FhOptions fh_opts;
    fh_opts.density.t_start = orbit.period;  // ratios read from the first full period on
    fh_opts.exact_period = orbit.period;     // the orbit wraps bit-exactly
    fh_opts.quad_tolerance = 0.25 * *std::min_element(radii.begin(), radii.end());
    auto fh = fh_hit_density(handle, State(orbit.x), targets, horizon, config.fh_step, fh_opts);
    rep.fh_positive = true;
    for (size_t r = 0; r < fh.size(); ++r) {
        rep.fh_lower_densities.push_back(fh[r].density.lower);
        rep.fh_positive = rep.fh_positive && fh[r].density.lower > 0.0;
        if (r == 0) rep.fh_series = fh[r].density.ratios;
    }

    bool all_positive = rep.shadowing_ok && rep.periodic_density_ok && rep.fh_positive;
    rep.overall = all_positive ? EquivalenceReport::Overall::Consistent
                               : EquivalenceReport::Overall::Inconsistent;
    rep.note = all_positive ? "finite mass; all probes positive"
                            : "finite mass but a probe failed";
    return rep;
}

}  // namespace sgsp
