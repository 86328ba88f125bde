#include "sgsp/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sgsp/criteria.hpp"
#include "sgsp/csv.hpp"
#include "sgsp/errors.hpp"
#include "sgsp/probes.hpp"
#include "sgsp/random_states.hpp"

namespace sgsp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

double num_param(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ConfigError("parameter '" + key + "' is not a number: " + it->second);
    }
}

std::string str_param(const std::map<std::string, std::string>& kv, const std::string& key,
                      const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

WeightFunction weight_from(const std::map<std::string, std::string>& kv) {
    std::string kind = str_param(kv, "weight", "expdecay");
    if (kind == "expdecay") return WeightFunction::exp_decay(num_param(kv, "rate", 1.0));
    if (kind == "constant") return WeightFunction::constant(num_param(kv, "level", 1.0));
    if (kind == "rationaldecay")
        return WeightFunction::rational_decay(num_param(kv, "exponent", 2.0));
    throw ConfigError("unknown weight kind: " + kind);
}

std::optional<SemigroupHandle> engine_from(const std::map<std::string, std::string>& kv) {
    std::string kind = str_param(kv, "kind", "none");
    if (kind == "none") return std::nullopt;
    if (kind == "translation")
        return SemigroupHandle(TranslationEngine(weight_from(kv), num_param(kv, "p", 1.0)));
    if (kind == "secondorder") {
        std::optional<double> tau;
        std::string tau_text = str_param(kv, "tau", "1.0");
        if (tau_text != "none") tau = std::stod(tau_text);
        return SemigroupHandle(SecondOrderEngine(num_param(kv, "alpha", 1.0), tau,
                                                 num_param(kv, "rho", 3.0),
                                                 int(num_param(kv, "n_trunc", 60))));
    }
    if (kind == "blackscholes") {
        SpaceParams pars{num_param(kv, "p", 2.0), num_param(kv, "s", 4.0),
                         num_param(kv, "tau_y", 0.0)};
        return SemigroupHandle(BlackScholesEngine(num_param(kv, "sigma", 0.4),
                                                  num_param(kv, "rate", 0.02), pars));
    }
    throw ConfigError("unknown engine kind: " + kind);
}

struct ProbeContext {
    std::filesystem::path dir;
    std::string prefix;
    unsigned long long seed = 0;
    std::optional<double> tolerance;
    SummaryWriter* summary = nullptr;
    double grid_step = 0.01;
};

struct ProbeOutcome {
    std::string verdict;
};

using ProbeRunner = std::function<ProbeOutcome(
    const ProbeSpec&, const std::optional<SemigroupHandle>&, const ProbeContext&)>;

struct ProbeEntry {
    const char* required_engine;  // nullptr: any
    bool needs_seed;
    ProbeRunner run;
};

const TranslationEngine& translation_of(const std::optional<SemigroupHandle>& handle) {
    return std::get<TranslationEngine>(*handle);
}

double composition_bound(const SemigroupHandle& handle) {
    if (std::holds_alternative<SecondOrderEngine>(handle)) return 1e-8;
    return 1e-12;
}

ProbeOutcome run_laws(const ProbeSpec& probe, const std::optional<SemigroupHandle>& handle,
                      const ProbeContext& ctx) {
    int states = int(num_param(probe.params, "states", 20));
    double t1 = num_param(probe.params, "t1", 0.5);
    double t2 = num_param(probe.params, "t2", 0.75);
    double bound = ctx.tolerance.value_or(
        num_param(probe.params, "composition_tol", composition_bound(*handle)));

    std::mt19937_64 rng(ctx.seed);
    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"),
                  {"state", "identity", "composition", "continuity", "interpolation_bound"});
    bool ok = true;
    double worst_identity = 0.0, worst_composition = 0.0;
    for (int i = 0; i < states; ++i) {
        State f = random_state(rng, *handle, ctx.grid_step);
        LawReport rep = check_semigroup_laws(*handle, f, t1, t2);
        csv.row({double(i), rep.identity_residual, rep.composition_residual,
                 rep.continuity_residual, rep.interpolation_bound});
        worst_identity = std::max(worst_identity, rep.identity_residual);
        worst_composition = std::max(worst_composition, rep.composition_residual);
        ok = ok && rep.identity_residual == 0.0 && rep.composition_residual <= bound;
    }
    char note[160];
    std::snprintf(note, sizeof(note), "verdict=%s composition_tol=%.3g", ok ? "pass" : "fail",
                  bound);
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".identity_max", worst_identity);
    ctx.summary->kv(ctx.prefix + ".composition_max", worst_composition);
    ctx.summary->line(ctx.prefix + ": identity_max=" + format_double(worst_identity) +
                      " composition_max=" + format_double(worst_composition) + " (" +
                      (ok ? "pass" : "fail") + ")");
    return {ok ? "pass" : "fail"};
}

ProbeOutcome run_shadow(const ProbeSpec& probe, const std::optional<SemigroupHandle>& handle,
                        const ProbeContext& ctx) {
    const auto& engine = translation_of(handle);
    int count = int(num_param(probe.params, "count", 5));
    SpecRandomOptions opts;
    opts.delta_lo = num_param(probe.params, "delta_lo", 0.2);
    opts.delta_hi = num_param(probe.params, "delta_hi", 0.8);
    opts.n_hi = int(num_param(probe.params, "n_hi", 3));
    opts.s_hi = int(num_param(probe.params, "s_hi", 4));
    opts.step = ctx.grid_step;
    double t_step = num_param(probe.params, "t_step", 0.05);

    std::mt19937_64 rng(ctx.seed);
    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"),
                  {"index", "n", "pieces", "delta", "period", "max_error", "pass"});
    bool all_pass = true;
    for (int i = 0; i < count; ++i) {
        ShadowingSpec spec = random_shadowing_spec(rng, engine.weight, engine.p, opts);
        ShadowingCertificate cert = construct_shadowing_point(spec, t_step);
        VerificationReport ver = verify_shadowing(cert, spec, t_step);
        double max_err = 0.0;
        for (const auto& pe : ver.measured) max_err = std::max(max_err, pe.max_error);
        csv.row({double(i), spec.n, double(spec.pieces.size()), spec.delta, cert.period,
                 max_err, ver.overall_pass ? 1.0 : 0.0});
        all_pass = all_pass && ver.overall_pass;
        if (i == 0) {
            std::ofstream cert_out(ctx.dir / (ctx.prefix + "_certificate.txt"),
                                   std::ios::binary | std::ios::trunc);
            cert_out << cert.serialize(spec);
        }
    }
    char note[120];
    std::snprintf(note, sizeof(note), "verdict=%s t_step=%.3g", all_pass ? "pass" : "fail",
                  t_step);
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".count", double(count));
    ctx.summary->kv(ctx.prefix + ".passed", all_pass ? 1.0 : 0.0);
    ctx.summary->line(ctx.prefix + ": " + std::to_string(count) + " seeded specs (" +
                      (all_pass ? "pass" : "fail") + ")");
    return {all_pass ? "pass" : "fail"};
}

ProbeOutcome run_mixing(const ProbeSpec& probe, const std::optional<SemigroupHandle>& handle,
                        const ProbeContext& ctx) {
    const auto& engine = translation_of(handle);
    double radius_u = num_param(probe.params, "radius_u", 0.5);
    double radius_w = num_param(probe.params, "radius_w", 0.5);
    double t_lo = num_param(probe.params, "t_lo", 0.0);
    double t_hi = num_param(probe.params, "t_hi", 30.0);
    double t_step = num_param(probe.params, "t_step", 0.5);

    GridFunction u = tent_function(ctx.grid_step, 4.0, 1.0, 1.0, 1.0);
    GridFunction zero = GridFunction::zeros(ctx.grid_step, 4.0);
    std::vector<double> grid;
    for (double t = t_lo; t <= t_hi + 1e-12; t += t_step) grid.push_back(t);

    ReturnSetReport rep;
    std::string verdict;
    try {
        rep = return_set_scan(engine, Ball{State(u), radius_u}, Ball{State(zero), radius_w},
                              grid);
        verdict = rep.first_all_pass ? "pass" : "fail";
    } catch (const Refusal& r) {
        rep.witnesses_available = false;
        rep.note = r.what();
        verdict = "unavailable";
    }
    if (!rep.witnesses_available) verdict = "unavailable";

    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"),
                  {"t", "in_r_uw", "in_r_wu", "margin_uw", "margin_wu"});
    for (const auto& o : rep.outcomes)
        csv.row({o.t, o.in_r_uw ? 1.0 : 0.0, o.in_r_wu ? 1.0 : 0.0, o.margin_uw, o.margin_wu});
    csv.comment("verdict=" + verdict + (rep.note.empty() ? "" : " note=" + rep.note));
    csv.write();
    double fap = rep.first_all_pass.value_or(-1.0);
    ctx.summary->kv(ctx.prefix + ".first_all_pass", fap);
    ctx.summary->line(ctx.prefix + ": first_all_pass=" + format_double(fap) + " (" + verdict +
                      ")");
    return {verdict};
}

ProbeOutcome run_densities(const ProbeSpec& probe, const std::optional<SemigroupHandle>&,
                           const ProbeContext& ctx) {
    std::string set = str_param(probe.params, "set", "dyadic");
    double horizon = num_param(probe.params, "horizon", std::pow(4.0, 10));
    double step = num_param(probe.params, "step", 1.0);

    IntervalUnion make;
    if (set == "dyadic") {
        std::vector<std::pair<double, double>> blocks;
        for (double lo = 1.0; lo < horizon; lo *= 4.0) blocks.emplace_back(lo, 2.0 * lo);
        make = IntervalUnion(std::move(blocks));
    } else if (set == "all") {
        make = IntervalUnion(std::vector<std::pair<double, double>>{{0.0, horizon}});
    } else if (set == "empty") {
        make = IntervalUnion(std::vector<std::pair<double, double>>{});
    } else {
        throw ConfigError("unknown density set: " + set);
    }
    DensityEstimate est = density_estimate(make, horizon, step, DensityMode::Upper);

    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"), {"t", "ratio"});
    for (const auto& [t, r] : est.ratios) csv.row({t, r});
    char note[160];
    std::snprintf(note, sizeof(note), "upper=%.6g lower=%.6g tail_fraction=%.2g", est.upper,
                  est.lower, est.tail_fraction);
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".upper", est.upper);
    ctx.summary->kv(ctx.prefix + ".lower", est.lower);
    ctx.summary->line(ctx.prefix + ": upper=" + format_double(est.upper) +
                      " lower=" + format_double(est.lower));

    bool gated = probe.params.count("upper_lo") || probe.params.count("lower_lo");
    if (!gated) return {"done"};
    bool ok = est.upper >= num_param(probe.params, "upper_lo", 0.0) &&
              est.upper <= num_param(probe.params, "upper_hi", 1.0) &&
              est.lower >= num_param(probe.params, "lower_lo", 0.0) &&
              est.lower <= num_param(probe.params, "lower_hi", 1.0);
    return {ok ? "pass" : "fail"};
}

ProbeOutcome run_irregular(const ProbeSpec& probe, const std::optional<SemigroupHandle>& handle,
                           const ProbeContext& ctx) {
    const auto& engine = translation_of(handle);
    double epsilon = num_param(probe.params, "epsilon", 0.1);
    double horizon = num_param(probe.params, "horizon", 1e4);
    double threshold = num_param(probe.params, "threshold", 0.9);
    IrregularOptions opts;
    opts.p = engine.p;

    IrregularVectorResult r = irregular_vector(engine.weight, epsilon, horizon, opts);
    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"), {"t", "value", "event"});
    for (const auto& [s, norm] : r.norm_series)
        csv.row({s, norm, norm >= r.threshold_hi ? 1.0 : (norm < r.threshold_lo ? -1.0 : 0.0)});
    char note[200];
    std::snprintf(note, sizeof(note),
                  "big_upper=%.6g small_upper=%.6g epsilon=%.3g threshold=%.3g", r.big.upper,
                  r.small.upper, epsilon, threshold);
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".big_upper", r.big.upper);
    ctx.summary->kv(ctx.prefix + ".small_upper", r.small.upper);
    ctx.summary->line(ctx.prefix + ": big_upper=" + format_double(r.big.upper) +
                      " small_upper=" + format_double(r.small.upper));
    bool ok = r.big.upper >= threshold && r.small.upper >= threshold;
    return {ok ? "pass" : "fail"};
}

ProbeOutcome run_fh_hits(const ProbeSpec& probe, const std::optional<SemigroupHandle>& handle,
                         const ProbeContext& ctx) {
    const auto& engine = translation_of(handle);
    double step = num_param(probe.params, "step", 0.1);

    GridFunction target = tent_function(ctx.grid_step, 4.0, 1.0, 1.0, 1.0);
    // the ball must be tighter than the target's own norm or membership is vacuous
    double target_norm = lp_v_norm(target, engine.weight, engine.p).upper();
    double radius = num_param(probe.params, "radius",
                              std::max(0.1, num_param(probe.params, "radius_rel", 0.3) *
                                                target_norm));
    double delta = num_param(probe.params, "delta", 0.4 * radius);
    PeriodicApproximant q = periodic_approximant(*handle, State(target), delta);
    double horizon = num_param(probe.params, "horizon", 12.0 * q.period);

    auto reports =
        fh_hit_density(*handle, q.point, {Ball{State(target), radius}}, horizon, step);
    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"), {"t", "value", "event"});
    for (size_t j = 0; j < reports[0].distance_series.size(); ++j) {
        auto [t, d] = reports[0].distance_series[j];
        csv.row({t, d, d <= radius + reports[0].quad_tolerance ? 1.0 : 0.0});
    }
    char note[160];
    std::snprintf(note, sizeof(note), "lower=%.6g radius=%.3g quad_tol=%.3g",
                  reports[0].density.lower, radius, reports[0].quad_tolerance);
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".lower", reports[0].density.lower);
    ctx.summary->line(ctx.prefix + ": lower=" + format_double(reports[0].density.lower));
    return {reports[0].density.lower > 0.0 ? "positive" : "zero"};
}

ProbeOutcome run_equivalences(const ProbeSpec& probe,
                              const std::optional<SemigroupHandle>& handle,
                              const ProbeContext& ctx) {
    const auto& engine = translation_of(handle);
    EquivalenceConfig config;
    config.seed = ctx.seed;
    config.delta = num_param(probe.params, "delta", 0.4);
    config.shadow_suite = int(num_param(probe.params, "suite", 5));
    config.grid_step = ctx.grid_step;

    auto dict = default_dictionary(ctx.grid_step);
    EquivalenceReport rep = translation_equivalences(engine.weight, engine.p, dict, config);

    if (!rep.certificate_text.empty()) {
        std::ofstream cert_out(ctx.dir / (ctx.prefix + "_certificate.txt"),
                               std::ios::binary | std::ios::trunc);
        cert_out << rep.certificate_text;
        ctx.summary->kv_text(ctx.prefix + ".certificate", ctx.prefix + "_certificate.txt");
    }

    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"), {"t", "ratio"});
    for (const auto& [t, r] : rep.fh_series) csv.row({t, r});
    std::string verdict = to_string(rep.overall);
    if (rep.integral.verdict == TailIntegral::Verdict::Inconclusive) verdict = "inconclusive";
    csv.comment("verdict=" + verdict + " integral=" + std::string(to_string(rep.integral.verdict)));
    csv.write();

    ctx.summary->kv(ctx.prefix + ".integral", rep.integral.value);
    ctx.summary->kv_text(ctx.prefix + ".integral_verdict", to_string(rep.integral.verdict));
    ctx.summary->kv(ctx.prefix + ".shadow_pass", double(rep.shadow_pass));
    ctx.summary->kv(ctx.prefix + ".shadow_total", double(rep.shadow_total));
    ctx.summary->kv(ctx.prefix + ".periodic_ok", rep.periodic_density_ok ? 1.0 : 0.0);
    for (size_t j = 0; j < rep.fh_lower_densities.size(); ++j)
        ctx.summary->kv(ctx.prefix + ".fh_lower_" + std::to_string(j),
                        rep.fh_lower_densities[j]);
    ctx.summary->kv_text(ctx.prefix + ".overall", verdict);
    ctx.summary->line(ctx.prefix + ": integral=" + format_double(rep.integral.value) + " (" +
                      to_string(rep.integral.verdict) + "), overall " + verdict + " — " +
                      rep.note);
    return {verdict};
}

ProbeOutcome run_approximant(const ProbeSpec& probe,
                             const std::optional<SemigroupHandle>& handle,
                             const ProbeContext& ctx) {
    double delta = num_param(probe.params, "delta", 0.3);
    double spectral_tol = ctx.tolerance.value_or(num_param(probe.params, "return_tol", 1e-6));

    double theta = num_param(probe.params, "theta", 1.0);
    State target;
    if (std::holds_alternative<TranslationEngine>(*handle)) {
        target = State(tent_function(ctx.grid_step, 4.0, 1.0, 1.0, 1.0));
    } else if (auto* so = std::get_if<SecondOrderEngine>(&*handle)) {
        // a two-eigenvector state on the i k theta lattice
        auto field = second_order_exponential_field(*so);
        auto one = field(theta), two = field(2.0 * theta);
        if (!one || !two) throw Refusal("approximant target outside the coefficient disc");
        target = State(lin_comb(1.0, std::get<CoefficientPair>(*one), 0.5,
                                std::get<CoefficientPair>(*two)));
    } else {
        // the fixed point x plus the first imaginary-eigenvalue monomial
        const auto& bs = std::get<BlackScholesEngine>(*handle);
        auto field = blackscholes_spectral_field(bs);
        auto spin = field(theta);
        if (!spin) throw Refusal("approximant target outside the exponent band");
        target = State(lin_comb(1.0, std::get<MonomialCombo>(*spin), 0.5,
                                MonomialCombo::monomial(1.0)));
    }
    ApproximantOptions approx_opts;
    approx_opts.theta = theta;
    PeriodicApproximant q = periodic_approximant(*handle, target, delta, approx_opts);

    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"),
                  {"period", "error", "period_return_residual"});
    csv.row({q.period, q.error, q.period_return_residual});
    csv.write();
    ctx.summary->kv(ctx.prefix + ".error", q.error);
    ctx.summary->kv(ctx.prefix + ".period_return_residual", q.period_return_residual);
    ctx.summary->line(ctx.prefix + ": error=" + format_double(q.error) +
                      " return_residual=" + format_double(q.period_return_residual));

    bool ok;
    if (std::holds_alternative<TranslationEngine>(*handle))
        ok = q.error < delta && q.period_return_residual == 0.0;
    else
        ok = q.period_return_residual < spectral_tol;
    return {ok ? "pass" : "fail"};
}

ProbeOutcome run_eigenfield(const ProbeSpec& probe,
                            const std::optional<SemigroupHandle>& handle,
                            const ProbeContext& ctx) {
    EigenfieldOptions opts;
    opts.residual_tol = ctx.tolerance.value_or(num_param(probe.params, "residual_tol", 1e-3));
    opts.span_tol = num_param(probe.params, "span_tol", 0.2);
    double t_lo = num_param(probe.params, "t_lo", -1.0);
    double t_hi = num_param(probe.params, "t_hi", 1.0);
    int samples = int(num_param(probe.params, "samples", 21));

    FieldSampler field;
    GeneratorApplier gen;
    std::vector<CState> dictionary;
    if (auto* tr = std::get_if<TranslationEngine>(&*handle)) {
        (void)tr;
        field = translation_wave_field();
        gen = translation_difference_generator();
        t_lo = num_param(probe.params, "t_lo", 0.2);
        t_hi = num_param(probe.params, "t_hi", 2.0);
        dictionary.push_back(*field(0.5 * (t_lo + t_hi)));
    } else if (auto* so = std::get_if<SecondOrderEngine>(&*handle)) {
        field = second_order_exponential_field(*so);
        gen = second_order_generator_applier(*so);
        opts.residual_tol = ctx.tolerance.value_or(num_param(probe.params, "residual_tol", 1e-8));
        dictionary.push_back(*field(0.37));
    } else {
        const auto& bs = std::get<BlackScholesEngine>(*handle);
        field = blackscholes_spectral_field(bs);
        gen = blackscholes_generator_applier(bs);
        opts.residual_tol = ctx.tolerance.value_or(num_param(probe.params, "residual_tol", 1e-8));
        dictionary.push_back(CState(MonomialCombo::monomial(1.0)));
    }
    std::vector<double> ts(samples);
    for (int i = 0; i < samples; ++i)
        ts[i] = t_lo + (t_hi - t_lo) * double(i) / double(samples - 1);

    EigenfieldReport rep = eigenfield_check(*handle, field, gen, ts, dictionary, opts);
    CsvWriter csv(ctx.dir / (ctx.prefix + ".csv"), {"t", "value"});
    for (const auto& [t, r] : rep.residuals) csv.row({t, r});
    char note[160];
    std::snprintf(note, sizeof(note), "residual_sup=%.6g tol=%.3g criterion=%s",
                  rep.residual_sup, opts.residual_tol,
                  rep.criterion_satisfied ? "satisfied" : "not-satisfied");
    csv.comment(note);
    csv.write();
    ctx.summary->kv(ctx.prefix + ".residual_sup", rep.residual_sup);
    ctx.summary->kv(ctx.prefix + ".boundedness_sup", rep.boundedness_sup);
    if (!rep.span_residuals.empty())
        ctx.summary->kv(ctx.prefix + ".span_residual_last", rep.span_residuals[0].back());
    ctx.summary->line(ctx.prefix + ": residual_sup=" + format_double(rep.residual_sup) + " (" +
                      (rep.criterion_satisfied ? "pass" : "fail") + ")");
    return {rep.criterion_satisfied ? "pass" : "fail"};
}

const std::map<std::string, ProbeEntry>& probe_registry() {
    static const std::map<std::string, ProbeEntry> registry = {
        {"laws", {nullptr, true, run_laws}},
        {"shadow", {"translation", true, run_shadow}},
        {"mixing", {"translation", false, run_mixing}},
        {"densities", {nullptr, false, run_densities}},
        {"irregular", {"translation", false, run_irregular}},
        {"fh_hits", {"translation", false, run_fh_hits}},
        {"equivalences", {"translation", true, run_equivalences}},
        {"approximant", {nullptr, false, run_approximant}},
        {"translation_eigenfield", {"translation", false, run_eigenfield}},
        {"hhte_eigenfield", {"secondorder", false, run_eigenfield}},
        {"bs_eigenfield", {"blackscholes", false, run_eigenfield}},
    };
    return registry;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line, section;
    ProbeSpec* probe = nullptr;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            std::string inner = trim(line.substr(1, line.size() - 2));
            if (inner == "scenario" || inner == "engine") {
                section = inner;
                probe = nullptr;
            } else if (inner.rfind("probe", 0) == 0) {
                std::string kind = trim(inner.substr(5));
                if (kind.empty())
                    throw ConfigError("line " + std::to_string(lineno) +
                                      ": probe section needs a kind");
                config.probes.push_back(ProbeSpec{kind, {}});
                probe = &config.probes.back();
                section = "probe";
            } else {
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  inner + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section == "scenario") {
            config.scenario_kv[key] = value;
            if (key == "name") config.name = value;
        } else if (section == "engine") {
            config.engine_kv[key] = value;
        } else if (probe) {
            probe->params[key] = value;
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
    }
    return config;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ScenarioConfig::dump() const {
    std::string out = "[scenario]\n";
    for (const auto& [k, v] : scenario_kv) out += k + " = " + v + "\n";
    if (!scenario_kv.count("name")) out += "name = " + name + "\n";
    out += "\n[engine]\n";
    for (const auto& [k, v] : engine_kv) out += k + " = " + v + "\n";
    for (const auto& probe : probes) {
        out += "\n[probe " + probe.kind + "]\n";
        for (const auto& [k, v] : probe.params) out += k + " = " + v + "\n";
    }
    return out;
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const RunOverrides& overrides) {
    std::string root;
    if (overrides.out_dir) {
        root = *overrides.out_dir;
    } else if (auto it = config.scenario_kv.find("output"); it != config.scenario_kv.end()) {
        root = it->second;
    } else if (const char* env = std::getenv("SGSP_OUT_ROOT"); env && *env) {
        root = env;
    } else {
        root = "out";
    }
    return std::filesystem::path(root) / config.name;
}

int run_scenario(const ScenarioConfig& config, const RunOverrides& overrides) {
    try {
        std::optional<SemigroupHandle> handle = engine_from(config.engine_kv);
        std::string engine_kind = str_param(config.engine_kv, "kind", "none");

        // validate the probe list before producing any output
        for (const auto& probe : config.probes) {
            auto it = probe_registry().find(probe.kind);
            if (it == probe_registry().end())
                throw ConfigError("unknown probe kind: " + probe.kind);
            if (it->second.required_engine && engine_kind != it->second.required_engine)
                throw ConfigError("probe '" + probe.kind + "' needs engine '" +
                                  it->second.required_engine + "', scenario has '" +
                                  engine_kind + "'");
            bool has_seed = probe.params.count("seed") || config.scenario_kv.count("seed") ||
                            overrides.seed.has_value();
            if (it->second.needs_seed && !has_seed)
                throw ConfigError("probe '" + probe.kind + "' needs a seed");
        }

        std::filesystem::path dir = resolve_output_dir(config, overrides);
        std::filesystem::create_directories(dir);
        SummaryWriter summary;
        summary.line("scenario " + config.name);

        bool expectation_failed = false;
        for (size_t i = 0; i < config.probes.size(); ++i) {
            const ProbeSpec& probe = config.probes[i];
            const ProbeEntry& entry = probe_registry().at(probe.kind);
            ProbeContext ctx;
            ctx.dir = dir;
            char prefix[64];
            std::snprintf(prefix, sizeof(prefix), "%03zu_%s", i, probe.kind.c_str());
            ctx.prefix = prefix;
            ctx.seed = overrides.seed.value_or((unsigned long long)num_param(
                probe.params, "seed", num_param(config.scenario_kv, "seed", 1)));
            ctx.tolerance = overrides.tolerance;
            ctx.grid_step = num_param(config.scenario_kv, "grid_step", 0.01);
            ctx.summary = &summary;

            ProbeOutcome outcome;
            try {
                outcome = entry.run(probe, handle, ctx);
            } catch (const Refusal& r) {
                outcome.verdict = "refusal";
                summary.kv_text(ctx.prefix + std::string(".refusal"), r.what());
                summary.line(ctx.prefix + std::string(": refusal — ") + r.what());
            }
            summary.kv_text(ctx.prefix + std::string(".verdict"), outcome.verdict);

            auto expect = probe.params.find("expect");
            if (expect != probe.params.end() && expect->second != outcome.verdict) {
                expectation_failed = true;
                summary.line(ctx.prefix + std::string(": EXPECTED ") + expect->second +
                             ", got " + outcome.verdict);
            }
        }
        summary.write(dir);
        if (!overrides.quiet)
            std::cout << "scenario '" << config.name << "' -> " << dir.string()
                      << (expectation_failed ? " (expectation failed)" : "") << "\n";
        return expectation_failed ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_scenario(const std::filesystem::path& config_path, const RunOverrides& overrides) {
    try {
        ScenarioConfig config = ScenarioConfig::load(config_path);
        return run_scenario(config, overrides);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sgsp
