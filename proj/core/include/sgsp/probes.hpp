#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgsp/density.hpp"
#include "sgsp/semigroup.hpp"
#include "sgsp/shadowing.hpp"

namespace sgsp {

struct Ball {
    State center;
    double radius = 0.0;  // may be infinity
};

struct MixingOptions {
    double t0 = 1.0;
    bool keep_witnesses = false;  // retain the per-t witness states in scans
};

/// Two-piece shadowing witness for the return sets through a neighbourhood
/// of 0: x starts delta-close to u, its orbit sits near 0 on a whole window
/// containing t, and w = T_{t'} x flows back onto x at time t.
struct MixingWitness {
    bool built = false;
    std::string reason;
    GridFunction x;  // periodic point in U
    GridFunction w;  // T_{t'} x, a W member flowing back into U
    double t = 0.0, t_prime = 0.0, period = 0.0;
    double threshold = 0.0;  // lattice-rounded gap below which nothing is built
    double dist_x_u = 0.0, norm_tx = 0.0, norm_w = 0.0, dist_tw_u = 0.0;
    double quad_horizon = 0.0;  // fixed horizon behind the recorded margins
    bool verified = false;
};

MixingWitness mixing_witness(const TranslationEngine& engine, const GridFunction& u,
                             double radius_u, double radius_w, double t,
                             const MixingOptions& opt = {});

struct WitnessOutcome {
    double t = 0.0;
    bool constructed = false;
    bool in_r_uw = false;
    bool in_r_wu = false;
    double margin_uw = 0.0;  // radius_w - ||T_t x||
    double margin_wu = 0.0;  // radius_u - ||T_t w - u||
};

struct ReturnSetReport {
    std::vector<WitnessOutcome> outcomes;
    std::vector<MixingWitness> witnesses;  // populated when keep_witnesses is set
    std::optional<double> first_all_pass;
    bool witnesses_available = true;
    std::string note;
};

/// Scans the grid, constructing a witness per time; first_all_pass is the
/// least scanned time after which every scanned time lies in both return
/// sets, the empirical bound on the complement.
ReturnSetReport return_set_scan(const TranslationEngine& engine, const Ball& u_ball,
                                const Ball& w_ball, const std::vector<double>& t_grid,
                                const MixingOptions& opt = {});

struct ApproximantOptions {
    double t0 = 1.0;
    double theta = 1.0;       // spectral eigenvalue lattice i k theta
    int dictionary_size = 3;  // k runs through 1..size (plus the fixed point)
};

struct PeriodicApproximant {
    State point;
    double period = 0.0;
    double error = 0.0;                   // || q - target || in the native norm
    double period_return_residual = 0.0;  // || T_P q - q ||
};

/// Periodic point near the target: the translation engine uses the one-piece
/// shadowing construction (exactly periodic); the spectral engines combine
/// eigenvectors with numerically imaginary, commensurable eigenvalues, so the
/// approximation quality is reported rather than guaranteed.
PeriodicApproximant periodic_approximant(const SemigroupHandle& handle, const State& target,
                                         double delta, const ApproximantOptions& opt = {});

struct IrregularOptions {
    double growth_ratio = 4.0;      // odds multiplier between phases
    double first_block_start = 2.0;
    double sim_step = 0.5;
    double p = 1.0;
    double grid_step = 0.05;
};

struct IrregularVectorResult {
    GridFunction f;
    DensityEstimate big;    // ||T_s f|| >= 1/epsilon
    DensityEstimate small;  // ||T_s f|| < epsilon
    std::vector<std::pair<double, double>> norm_series;  // (s, ||T_s f||)
    std::vector<std::pair<double, double>> blocks;       // plateau intervals
    double height = 0.0;
    double threshold_hi = 0.0, threshold_lo = 0.0;
};

/// Block construction of a distributionally irregular vector: plateaus whose
/// lengths dwarf everything before them, separated by zero stretches that in
/// turn dwarf the plateaus, with the odds growing geometrically. Norms along
/// the orbit follow from the weight's closed-form block integrals.
IrregularVectorResult irregular_vector(const WeightFunction& v, double epsilon, double horizon,
                                       const IrregularOptions& opt = {});

/// Re-threshold the recorded norm series at another epsilon (big side).
DensityEstimate big_density_for_epsilon(const IrregularVectorResult& r, double epsilon);

struct FhOptions {
    double quad_tolerance = 0.02;  // quadrature slack added to the radius test
    DensityOptions density;        // e.g. t_start past the transient
    // when > 0 and the state is exactly periodic with this period, one period
    // is measured and the series is extended by periodicity
    double exact_period = 0.0;
};

struct FhTargetReport {
    DensityEstimate density;  // lower mode
    std::vector<std::pair<double, double>> distance_series;
    double radius = 0.0;
    double quad_tolerance = 0.0;
};

/// Lower densities of the visit times of the orbit of x0 to each target
/// ball; positive values on a finite dictionary are evidence, not proof.
std::vector<FhTargetReport> fh_hit_density(const SemigroupHandle& handle, const State& x0,
                                           const std::vector<Ball>& targets, double horizon,
                                           double step, const FhOptions& opt = {});

}  // namespace sgsp
