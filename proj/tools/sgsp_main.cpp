// Command line front end: every subcommand assembles a one-probe scenario and
// hands it to the same runner the `run` subcommand uses, so outputs and
// determinism guarantees are identical either way.

#include <CLI11.hpp>

#include <map>
#include <string>

#include "sgsp/csv.hpp"
#include "sgsp/scenario.hpp"

namespace {

using KvMap = std::map<std::string, std::string>;

struct Cmd {
    CLI::App* app = nullptr;
    std::string kind;      // probe kind (may be rewritten by --engine / --set)
    KvMap params;          // probe params
    KvMap engine;          // engine overrides
    std::string engine_kind = "translation";
};

void number_option(CLI::App* app, const std::string& flag, KvMap& kv, const std::string& key,
                   const std::string& help) {
    app->add_option_function<double>(
        flag, [&kv, key](double v) { kv[key] = sgsp::format_double(v); }, help);
}

void text_option(CLI::App* app, const std::string& flag, KvMap& kv, const std::string& key,
                 const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&kv, key](const std::string& v) { kv[key] = v; }, help);
}

void add_weight_flags(Cmd& cmd) {
    text_option(cmd.app, "--weight", cmd.engine, "weight",
                "weight kind: expdecay | constant | rationaldecay");
    number_option(cmd.app, "--rate", cmd.engine, "rate", "exp-decay rate");
    number_option(cmd.app, "--level", cmd.engine, "level", "constant weight level");
    number_option(cmd.app, "--exponent", cmd.engine, "exponent", "rational-decay exponent");
    number_option(cmd.app, "--p", cmd.engine, "p", "integrability exponent");
}

void add_engine_choice(Cmd& cmd) {
    cmd.app->add_option("--engine", cmd.engine_kind,
                        "translation | secondorder | blackscholes");
    number_option(cmd.app, "--alpha", cmd.engine, "alpha", "diffusivity");
    text_option(cmd.app, "--tau", cmd.engine, "tau", "relaxation time, 'none' = wave form");
    number_option(cmd.app, "--rho", cmd.engine, "rho", "coefficient growth radius");
    number_option(cmd.app, "--n-trunc", cmd.engine, "n_trunc", "truncation order");
    number_option(cmd.app, "--sigma", cmd.engine, "sigma", "volatility");
    number_option(cmd.app, "--r", cmd.engine, "rate", "interest rate");
    number_option(cmd.app, "--s", cmd.engine, "s", "growth exponent of the sup norm");
    number_option(cmd.app, "--tau-y", cmd.engine, "tau_y", "decay exponent of the sup norm");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the specification property of C0-semigroups"};
    app.require_subcommand(1);

    std::string out_dir;
    unsigned long long seed = 0;
    double tolerance = 0.0;
    app.add_option("-o,--out", out_dir, "output root (default: $SGSP_OUT_ROOT or ./out)");
    auto* seed_opt = app.add_option("--seed", seed, "override every probe seed");
    auto* tol_opt = app.add_option("--tol", tolerance, "override probe tolerances");

    std::vector<std::unique_ptr<Cmd>> cmds;
    auto make = [&](const std::string& name, const std::string& kind,
                    const std::string& help) -> Cmd& {
        cmds.push_back(std::make_unique<Cmd>());
        Cmd& c = *cmds.back();
        c.app = app.add_subcommand(name, help);
        c.app->fallthrough();
        c.kind = kind;
        return c;
    };

    {
        Cmd& c = make("shadow", "shadow", "seeded shadowing constructions + verification");
        add_weight_flags(c);
        number_option(c.app, "--count", c.params, "count", "number of seeded specs");
        number_option(c.app, "--delta-lo", c.params, "delta_lo", "smallest delta drawn");
        number_option(c.app, "--delta-hi", c.params, "delta_hi", "largest delta drawn");
        number_option(c.app, "--t-step", c.params, "t_step", "verification time step");
    }
    {
        Cmd& c = make("mixing", "mixing", "return-set scan with constructed witnesses");
        add_weight_flags(c);
        number_option(c.app, "--radius-u", c.params, "radius_u", "ball radius around the tent");
        number_option(c.app, "--radius-w", c.params, "radius_w", "ball radius around 0");
        number_option(c.app, "--t-hi", c.params, "t_hi", "scan end");
        number_option(c.app, "--t-step", c.params, "t_step", "scan step");
    }
    {
        Cmd& c = make("densities", "densities",
                      "density estimators, irregular vectors, hit densities");
        add_weight_flags(c);
        c.app->add_option_function<std::string>(
            "--set",
            [&c](const std::string& v) {
                if (v == "irregular") c.kind = "irregular";
                else if (v == "fh") c.kind = "fh_hits";
                else c.params["set"] = v;
            },
            "dyadic | all | empty | irregular | fh");
        number_option(c.app, "--horizon", c.params, "horizon", "scan horizon");
        number_option(c.app, "--step", c.params, "step", "scan step");
        number_option(c.app, "--epsilon", c.params, "epsilon", "irregular-vector epsilon");
    }
    {
        Cmd& c = make("equivalences", "equivalences",
                      "weight-mass dichotomy with constructive probes");
        add_weight_flags(c);
        number_option(c.app, "--delta", c.params, "delta", "shadowing accuracy");
        number_option(c.app, "--suite", c.params, "suite", "seeded suite size");
    }
    {
        Cmd& c = make("eigenfield", "translation_eigenfield",
                      "eigenvector-field residual check");
        add_weight_flags(c);
        add_engine_choice(c);
        number_option(c.app, "--samples", c.params, "samples", "t sample count");
    }
    {
        Cmd& c = make("laws", "laws", "semigroup law residuals on seeded states");
        add_weight_flags(c);
        add_engine_choice(c);
        number_option(c.app, "--states", c.params, "states", "number of seeded states");
        number_option(c.app, "--t1", c.params, "t1", "first time");
        number_option(c.app, "--t2", c.params, "t2", "second time");
    }

    std::string run_path;
    auto* run = app.add_subcommand("run", "execute a scenario configuration file");
    run->fallthrough();
    run->add_option("config", run_path, "path to the scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    sgsp::RunOverrides overrides;
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (tol_opt->count() > 0) overrides.tolerance = tolerance;

    if (run->parsed())
        return sgsp::run_scenario(std::filesystem::path(run_path), overrides);

    for (const auto& cmd : cmds) {
        if (!cmd->app->parsed()) continue;
        sgsp::ScenarioConfig config;
        config.engine_kv["kind"] = cmd->engine_kind;
        for (const auto& [k, v] : cmd->engine) config.engine_kv[k] = v;
        if (cmd->kind == "translation_eigenfield" && cmd->engine_kind == "secondorder")
            cmd->kind = "hhte_eigenfield";
        if (cmd->kind == "translation_eigenfield" && cmd->engine_kind == "blackscholes")
            cmd->kind = "bs_eigenfield";
        config.name = cmd->app->get_name();
        config.scenario_kv["name"] = config.name;
        config.scenario_kv["seed"] = "1";
        config.probes.push_back(sgsp::ProbeSpec{cmd->kind, cmd->params});
        return sgsp::run_scenario(config, overrides);
    }
    return 2;
}
