#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sgsp/probes.hpp"
#include "sgsp/semigroup.hpp"

namespace sgsp {

/// Complex-valued states for eigenvector fields.
using CState = std::variant<ComplexGridFunction, CoefficientPair, MonomialCombo>;

using FieldSampler = std::function<std::optional<CState>(double t)>;
using GeneratorApplier = std::function<CState(const CState&)>;

struct EigenfieldOptions {
    double residual_tol = 1e-6;
    double span_tol = 1e-3;
    // smoothness metadata supplied by the scenario author, recorded unverified
    bool smoothness_c2 = false;
    bool avoids_c0 = false;
};

struct EigenfieldReport {
    std::vector<std::pair<double, double>> residuals;  // (t, ||A f(t) - i t f(t)||)
    double residual_sup = 0.0;
    double boundedness_sup = 0.0;                 // sup ||f(t)|| over accepted samples
    std::vector<size_t> rejected_samples;         // t-sample indices outside the space
    std::vector<size_t> span_sample_counts;       // nested prefix sizes used below
    std::vector<std::vector<double>> span_residuals;  // per target, per prefix size
    bool degenerate_field = false;
    bool criterion_satisfied = false;
    bool smoothness_c2 = false;
    bool avoids_c0 = false;
};

/// Residuals of the eigenvector-field relation A f(t) = i t f(t), the local
/// boundedness sup, and a finite-dictionary span surrogate: least-squares
/// projection residuals of each dictionary target onto span{f(t_1..t_k)},
/// nonincreasing in k.
EigenfieldReport eigenfield_check(const SemigroupHandle& handle, const FieldSampler& field,
                                  const GeneratorApplier& generator,
                                  std::span<const double> t_samples,
                                  std::span<const CState> dictionary,
                                  const EigenfieldOptions& opt = {});

struct TranslationFieldOptions {
    double grid_step = 1e-4;
    double x_max = 20.0;
};

/// t -> e^{itx} sampled; the matching generator is the grid-step forward
/// difference (T_h f - f)/h, exact on aligned shifts.
FieldSampler translation_wave_field(const TranslationFieldOptions& opt = {});
GeneratorApplier translation_difference_generator();

/// t -> (e^{mu x}, i t e^{mu x}) in coefficient form with
/// c mu^2 = (it)^2 - e (it); samples with |mu| >= rho are rejected.
FieldSampler second_order_exponential_field(const SecondOrderEngine& engine);
GeneratorApplier second_order_generator_applier(const SecondOrderEngine& engine);

/// t -> x^{beta(t)} with the engine symbol solving to the eigenvalue i t;
/// roots outside the norm's exponent band are rejected.
FieldSampler blackscholes_spectral_field(const BlackScholesEngine& engine);
GeneratorApplier blackscholes_generator_applier(const BlackScholesEngine& engine);

bool hhte_parameter_gate(double alpha, double tau, double rho);
bool blackscholes_parameter_gate(double s, double tau_y, double sigma);

struct EquivalenceConfig {
    uint64_t seed = 1;
    double delta = 0.4;
    int shadow_suite = 5;
    double t0 = 1.0;
    double grid_step = 0.01;
    double verify_step = 0.05;
    double fh_ball_radius_rel = 0.3;  // radius as a share of the target norm
    double fh_ball_radius_min = 0.1;
    double fh_step = 0.05;
    double fh_periods = 8.0;
};

struct EquivalenceReport {
    enum class Overall { Consistent, Inconsistent };

    TailIntegral integral;  // item (i): total weight mass
    bool probes_run = false;

    bool shadowing_ok = false;  // item (ii) witnesses
    int shadow_pass = 0, shadow_total = 0;
    std::optional<ShadowingCertificate> sample_certificate;
    std::string certificate_text;  // serialized form of the sample, spec included

    bool periodic_density_ok = false;  // item (iii) surrogate
    std::vector<double> approximant_errors;

    std::vector<double> fh_lower_densities;  // items (iv)/(v) evidence
    bool fh_positive = false;
    std::vector<std::pair<double, double>> fh_series;  // (t, ratio) of the first target

    std::vector<std::string> refusals;  // negative-side demonstrations
    bool fh_zero_demonstrated = false;  // contraction case: unreachable ball

    Overall overall = Overall::Consistent;
    std::string note;
};

const char* to_string(EquivalenceReport::Overall o);

/// One report tying the weight-mass dichotomy to the constructive probes:
/// finite mass must come with passing shadowing, periodic approximants and
/// positive hit densities; divergent mass must come with constructive
/// refusals.
EquivalenceReport translation_equivalences(const WeightFunction& v, double p,
                                           std::span<const GridFunction> dictionary,
                                           const EquivalenceConfig& config = {});

/// Default probe dictionary: a few K_1/K_2 polylines.
std::vector<GridFunction> default_dictionary(double grid_step);

}  // namespace sgsp
