#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>

#include "sgsp/coefficient_pair.hpp"
#include "sgsp/errors.hpp"
#include "sgsp/grid_function.hpp"
#include "sgsp/monomial_combo.hpp"
#include "sgsp/norms.hpp"
#include "sgsp/space_params.hpp"
#include "sgsp/weight.hpp"

namespace sgsp {

/// Translation T_t f = f(. + t) on the weighted L^p space of the given
/// admissible weight. Construction verifies the stored admissibility
/// constants on a spot-check grid.
struct TranslationEngine {
    WeightFunction weight;
    double p = 1.0;

    TranslationEngine(WeightFunction w, double p_exponent);
};

/// First-order system engine on the coefficient-space product: states are
/// CoefficientPairs (u, u_t), the generator maps (a, b) to
/// (b, c D^2 a + e b) with D^2 acting as a rho^2-scaled double backward
/// shift. relaxation set: c = alpha/tau, e = -1/tau; relaxation absent is
/// the undamped wave form c = alpha, e = 0.
struct SecondOrderEngine {
    double alpha = 1.0;
    std::optional<double> relaxation;  // tau; nullopt = wave equation
    double rho = 3.0;
    int n_trunc = 60;

    SecondOrderEngine(double alpha_, std::optional<double> tau_, double rho_, int n_trunc_);

    double c_coef() const { return relaxation ? alpha / *relaxation : alpha; }
    double e_coef() const { return relaxation ? -1.0 / *relaxation : 0.0; }
};

/// Spectral engine: states are monomial combinations, each term c x^beta is
/// an eigenvector and flows by exp(t lambda(beta)) with
/// lambda(beta) = nu^2 beta^2 + gamma nu beta - r. nu and gamma are derived
/// from (sigma, r) on every call, never stored.
struct BlackScholesEngine {
    double sigma = 0.4;
    double rate = 0.02;
    SpaceParams norm_params{2.0, 4.0, 0.0};  // the sup norm used for this engine's states

    BlackScholesEngine(double sigma_, double rate_, SpaceParams params = {2.0, 4.0, 0.0});

    double nu() const { return sigma / std::sqrt(2.0); }
    double gamma() const { return rate / nu() - nu(); }
    std::complex<double> eigenvalue(std::complex<double> beta) const {
        double n = nu(), g = gamma();
        return n * n * beta * beta + g * n * beta - rate;
    }
};

using SemigroupHandle = std::variant<TranslationEngine, SecondOrderEngine, BlackScholesEngine>;
using State = std::variant<GridFunction, CoefficientPair, MonomialCombo>;

const char* engine_name(const SemigroupHandle& handle);

/// Generator of the second-order system applied exactly on coefficients.
CoefficientPair second_order_generator(const CoefficientPair& u, const SecondOrderEngine& engine);

struct SecondOrderResult {
    CoefficientPair value;
    double error_estimate = 0.0;  // sup-norm gap between orders N and N+10
    bool truncation_limited = false;
};

/// exp(tA) u on the truncated coefficient space via scaling-and-squaring of
/// the finite section, with the N vs N+10 comparison as the error gate.
SecondOrderResult second_order_apply(double t, const CoefficientPair& u,
                                     const SecondOrderEngine& engine, double tol = 1e-10);

MonomialCombo blackscholes_apply(double t, const MonomialCombo& u,
                                 const BlackScholesEngine& engine);

/// Dispatching apply; the state type must match the engine.
State apply(const SemigroupHandle& handle, double t, const State& state);

/// Native norm of a state under the handle's space.
double state_norm(const SemigroupHandle& handle, const State& state);
double state_distance(const SemigroupHandle& handle, const State& x, const State& y);

struct LawReport {
    double identity_residual = 0.0;
    double composition_residual = 0.0;
    double continuity_residual = 0.0;
    double continuity_epsilon = 1e-3;
    // translation only: sup-norm bound on the resampling error of the
    // non-aligned continuity step
    double interpolation_bound = 0.0;
};

/// Residuals of T_0 f = f, T_{t1+t2} f = T_{t1} T_{t2} f and small-time
/// continuity at t1, measured in the engine's native norm.
LawReport check_semigroup_laws(const SemigroupHandle& handle, const State& f, double t1,
                               double t2, double continuity_epsilon = 1e-3);

}  // namespace sgsp
