#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgsp/grid_function.hpp"
#include "sgsp/invariant_class.hpp"
#include "sgsp/weight.hpp"

namespace sgsp {

/// Gap needed between shadowed orbit pieces: the weight tail past `cut` is
/// below (delta / 4n)^p, and one unit-length ramp on each side keeps the
/// periodic point inside K_n, so gap = cut + 2. Throws Refusal when no
/// finite cut exists (divergent weight tail).
struct RequiredGap {
    double gap = 0.0;  // M
    double cut = 0.0;  // C, with gap = C + 2
};

RequiredGap required_gap(double delta, double n, const WeightFunction& v, double p);

struct OrbitPiece {
    GridFunction y;  // a K_n member with Zero extension
    double a = 0.0;
    double b = 0.0;
};

/// A shadowing request: trace each orbit piece on [a_r, b_r] within delta by
/// a single periodic point of the translation semigroup.
struct ShadowingSpec {
    std::vector<OrbitPiece> pieces;
    double delta = 0.5;
    double n = 1.0;       // invariant class index
    double t0 = 1.0;      // period lattice unit
    double p = 1.0;
    WeightFunction weight = WeightFunction::exp_decay(1.0);

    /// Throws std::invalid_argument naming the offending piece, or Refusal
    /// when the weight admits no finite gap.
    void validate() const;
};

struct PieceError {
    double max_error = 0.0;
    double argmax_t = 0.0;
};

struct ShadowingCertificate {
    GridFunction x;  // periodic witness, one period of samples
    double period = 0.0;     // P = b_s + gap_used, a multiple of t0
    double gap_used = 0.0;   // M after rounding the period onto the lattice
    double cut = 0.0;        // C backing the gap
    std::vector<PieceError> per_piece_errors;
    double period_residual = 0.0;  // sup |T_P x - x|, structurally 0
    KnReport class_check;
    bool lattice_aligned = false;  // set by the discrete-time bridge
    double verify_step = 0.0;      // t sampling used to record the errors

    std::string serialize(const ShadowingSpec& spec) const;
};

struct CertificateBundle {
    ShadowingSpec spec;
    ShadowingCertificate certificate;
};
CertificateBundle parse_certificate(const std::string& text);

/// Splice construction of the periodic shadowing point: x copies y_r on
/// [a_r, b_r + cut], ramps of slope <= n connect the pieces through 0 and
/// return to y_1(0) before the wrap. The returned certificate carries errors
/// measured by verify_shadowing at verify_step.
ShadowingCertificate construct_shadowing_point(const ShadowingSpec& spec,
                                               double verify_step = 0.01);

struct VerificationReport {
    std::vector<PieceError> measured;
    bool pass_delta = false;
    double period_residual = 0.0;
    KnReport class_check;
    bool reproduces_recorded = true;   // recorded errors match within 1e-9
    double max_reproduction_gap = 0.0;
    double first_mismatch_t = -1.0;    // argmax time of the first failing piece
    bool overall_pass = false;
    std::string note;
};

/// Re-measures sup_t || T_t x - T_t y_r || over each piece at t_step and
/// checks exact periodicity, class membership and reproduction of the
/// recorded errors.
VerificationReport verify_shadowing(const ShadowingCertificate& cert, const ShadowingSpec& spec,
                                    double t_step);

/// Discrete-time bridge: all a_r, b_r must sit on the t0 lattice; the
/// verification grid is the lattice itself and the certificate records the
/// alignment.
ShadowingCertificate discrete_osp_check(double t0, const ShadowingSpec& spec);

}  // namespace sgsp
