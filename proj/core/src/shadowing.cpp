#include "sgsp/shadowing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "sgsp/errors.hpp"
#include "sgsp/norms.hpp"

namespace sgsp {

namespace {

void fmt_kv(std::string& out, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s %.17g\n", key, v);
    out += buf;
}

double piece_step(const ShadowingSpec& spec) { return spec.pieces.front().y.step(); }

struct SpliceRange {
    size_t lo = 0, hi = 0;  // inclusive node range copied from the piece
};

size_t snapped_floor(double x, double h) {
    return size_t(std::max(0.0, std::floor(x / h + 1e-9)));
}
size_t snapped_ceil(double x, double h) {
    return size_t(std::max(0.0, std::ceil(x / h - 1e-9)));
}

/// Fill (from, to) exclusive with a slope-bounded path from A at node `from`
/// to B at node `to`: down to zero, flat, back up when room permits, a direct
/// ramp otherwise.
void connect(std::vector<double>& x, size_t from, size_t to, double n, double h,
             const char* where) {
    double a = x[from], b = x[to];
    if (to <= from + 1) {
        if (std::abs(a - b) > n * h * double(to - from) * (1.0 + 1e-9))
            throw Refusal(std::string("no slope-feasible connector ") + where);
        return;
    }
    size_t span = to - from;
    auto ramp_len = [&](double val) -> size_t {
        if (val == 0.0) return 0;
        return size_t(std::ceil(std::abs(val) / (n * h) - 1e-12));
    };
    size_t len_down = ramp_len(a), len_up = ramp_len(b);
    if (len_down + len_up <= span) {
        for (size_t i = 1; i <= len_down; ++i)
            x[from + i] = a * (1.0 - double(i) / double(len_down));
        for (size_t i = 1; i < len_up; ++i)
            x[to - len_up + i] = b * (double(i) / double(len_up));
        return;
    }
    if (std::abs(a - b) <= n * h * double(span) * (1.0 + 1e-9)) {
        for (size_t i = 1; i < span; ++i)
            x[from + i] = a + (b - a) * double(i) / double(span);
        return;
    }
    throw Refusal(std::string("grid too coarse for the gap ") + where);
}

std::vector<PieceError> measure_piece_errors(const GridFunction& x, const ShadowingSpec& spec,
                                             double t_step) {
    // horizon past which the structural 2n bound leaves < 1e-2 * delta of error;
    // the residual tail mass is folded into the reported errors
    double target = std::pow(1e-2 * spec.delta, spec.p) / std::pow(2.0 * spec.n, spec.p);
    double horizon = cut_for_tail_mass(spec.weight, target);
    horizon = std::max(horizon, 1.0);
    double h = x.step();
    std::vector<double> row = weight_row(spec.weight, h, horizon);
    NormOptions opts;
    opts.fixed_horizon = horizon;
    opts.weight_cache = &row;

    std::vector<PieceError> out;
    out.reserve(spec.pieces.size());
    for (const auto& piece : spec.pieces) {
        PieceError pe;
        double t = piece.a;
        bool last = false;
        while (!last) {
            if (t >= piece.b - 1e-12) {
                t = piece.b;
                last = true;
            }
            GridFunction xa = translate(x, t);
            GridFunction ya = translate(piece.y, t);
            double err = lp_v_distance(xa, ya, spec.weight, spec.p, opts).upper();
            if (err > pe.max_error) {
                pe.max_error = err;
                pe.argmax_t = t;
            }
            t += t_step;
        }
        out.push_back(pe);
    }
    return out;
}

double exact_period_residual(const GridFunction& x, double period) {
    GridFunction shifted = translate(x, period);
    double m = 0;
    for (size_t j = 0; j < x.n_samples(); ++j)
        m = std::max(m, std::abs(shifted[j] - x[j]));
    return m;
}

}  // namespace

RequiredGap required_gap(double delta, double n, const WeightFunction& v, double p) {
    if (!(delta > 0)) throw std::invalid_argument("required_gap needs delta > 0");
    if (!(n >= 1)) throw std::invalid_argument("required_gap needs n >= 1");
    if (!(p >= 1)) throw std::invalid_argument("required_gap needs p >= 1");
    double mass = std::pow(delta / (4.0 * n), p);
    double cut = cut_for_tail_mass(v, mass);
    return {cut + 2.0, cut};
}

void ShadowingSpec::validate() const {
    if (pieces.empty()) throw std::invalid_argument("shadowing spec needs at least one piece");
    if (!(delta > 0)) throw std::invalid_argument("shadowing spec needs delta > 0");
    if (!(n >= 1)) throw std::invalid_argument("shadowing spec needs n >= 1");
    if (!(t0 > 0)) throw std::invalid_argument("shadowing spec needs t0 > 0");
    if (!(p >= 1)) throw std::invalid_argument("shadowing spec needs p >= 1");
    double h = piece_step(*this);
    double lattice = t0 / h;
    if (std::abs(lattice - std::llround(lattice)) > 1e-9)
        throw std::invalid_argument("t0 must be a multiple of the grid step");
    if (std::abs(pieces.front().a) > 1e-12)
        throw std::invalid_argument("piece 1 must start at a_1 = 0");
    RequiredGap gap = required_gap(delta, n, weight, p);
    for (size_t r = 0; r < pieces.size(); ++r) {
        const auto& piece = pieces[r];
        char buf[160];
        if (std::abs(piece.y.step() - h) > 1e-12 * h)
            throw std::invalid_argument("all pieces must share one grid step");
        if (piece.y.extension() != Extension::Zero)
            throw std::invalid_argument("orbit pieces use the zero extension");
        if (piece.b < piece.a - 1e-12) {
            std::snprintf(buf, sizeof(buf), "piece %zu has b < a", r + 1);
            throw std::invalid_argument(buf);
        }
        KnReport kn = kn_membership(piece.y, n);
        if (!kn.member) {
            std::snprintf(buf, sizeof(buf),
                          "piece %zu is not in K_%g (sup %.3g, slope %.3g)", r + 1, n,
                          kn.sup_norm, kn.max_slope);
            throw std::invalid_argument(buf);
        }
        if (r > 0) {
            double g = piece.a - pieces[r - 1].b;
            if (g <= 0) {
                std::snprintf(buf, sizeof(buf), "piece %zu overlaps piece %zu", r + 1, r);
                throw std::invalid_argument(buf);
            }
            if (g < gap.gap - 1e-12) {
                std::snprintf(buf, sizeof(buf),
                              "gap before piece %zu is %.6g < required %.6g", r + 1, g, gap.gap);
                throw std::invalid_argument(buf);
            }
        }
    }
}

ShadowingCertificate construct_shadowing_point(const ShadowingSpec& spec, double verify_step) {
    spec.validate();
    RequiredGap gap = required_gap(spec.delta, spec.n, spec.weight, spec.p);
    double h = piece_step(spec);
    double b_s = spec.pieces.back().b;

    // round the period up onto the t0 lattice
    long k = std::llround(std::ceil((b_s + gap.gap) / spec.t0 - 1e-12));
    double period = double(k) * spec.t0;
    double gap_used = period - b_s;
    size_t p_idx = size_t(std::llround(period / h));

    std::vector<double> samples(p_idx + 1, 0.0);
    std::vector<SpliceRange> splices;
    splices.reserve(spec.pieces.size());
    for (const auto& piece : spec.pieces) {
        SpliceRange sr;
        sr.lo = snapped_floor(piece.a, h);
        sr.hi = std::min(snapped_ceil(piece.b + gap.cut, h), p_idx);
        for (size_t j = sr.lo; j <= sr.hi; ++j)
            samples[j] = piece.y.eval(double(j) * h);
        splices.push_back(sr);
    }
    for (size_t r = 0; r < splices.size(); ++r) {
        char where[64];
        std::snprintf(where, sizeof(where), "after piece %zu", r + 1);
        if (r + 1 < splices.size()) {
            connect(samples, splices[r].hi, splices[r + 1].lo, spec.n, h, where);
        } else {
            samples[p_idx] = samples[0];  // wrap back to y_1(0)
            connect(samples, splices[r].hi, p_idx, spec.n, h, where);
        }
    }

    ShadowingCertificate cert;
    cert.x = GridFunction(h, std::move(samples), Extension::Periodic, period);
    cert.period = period;
    cert.gap_used = gap_used;
    cert.cut = gap.cut;
    cert.verify_step = verify_step;
    cert.per_piece_errors = measure_piece_errors(cert.x, spec, verify_step);
    cert.period_residual = exact_period_residual(cert.x, period);
    cert.class_check = kn_membership(cert.x, spec.n);
    return cert;
}

VerificationReport verify_shadowing(const ShadowingCertificate& cert, const ShadowingSpec& spec,
                                    double t_step) {
    if (!(t_step > 0)) throw std::invalid_argument("verify_shadowing needs t_step > 0");
    VerificationReport rep;
    rep.measured = measure_piece_errors(cert.x, spec, t_step);
    rep.period_residual = exact_period_residual(cert.x, cert.period);
    rep.class_check = kn_membership(cert.x, spec.n);

    rep.pass_delta = true;
    for (size_t r = 0; r < rep.measured.size(); ++r) {
        if (!(rep.measured[r].max_error < spec.delta)) {
            rep.pass_delta = false;
            if (rep.first_mismatch_t < 0) rep.first_mismatch_t = rep.measured[r].argmax_t;
        }
    }
    bool same_sampling = std::abs(cert.verify_step - t_step) <= 1e-12;
    if (same_sampling && cert.per_piece_errors.size() == rep.measured.size()) {
        for (size_t r = 0; r < rep.measured.size(); ++r) {
            double gap = std::abs(rep.measured[r].max_error - cert.per_piece_errors[r].max_error);
            rep.max_reproduction_gap = std::max(rep.max_reproduction_gap, gap);
            if (gap > 1e-9) {
                rep.reproduces_recorded = false;
                if (rep.first_mismatch_t < 0) rep.first_mismatch_t = rep.measured[r].argmax_t;
            }
        }
    }
    rep.overall_pass = rep.pass_delta && rep.period_residual == 0.0 && rep.class_check.member &&
                       rep.reproduces_recorded;
    if (!rep.pass_delta) rep.note = "a piece error reached delta";
    else if (rep.period_residual != 0.0) rep.note = "periodicity broken";
    else if (!rep.class_check.member) rep.note = "witness left the invariant class";
    else if (!rep.reproduces_recorded) rep.note = "recorded errors not reproduced";
    return rep;
}

ShadowingCertificate discrete_osp_check(double t0, const ShadowingSpec& spec) {
    ShadowingSpec lattice_spec = spec;
    lattice_spec.t0 = t0;
    for (size_t r = 0; r < spec.pieces.size(); ++r) {
        double qa = spec.pieces[r].a / t0, qb = spec.pieces[r].b / t0;
        char buf[128];
        if (std::abs(qa - std::llround(qa)) > 1e-9 || std::abs(qb - std::llround(qb)) > 1e-9) {
            std::snprintf(buf, sizeof(buf), "piece %zu times are not multiples of t0", r + 1);
            throw std::invalid_argument(buf);
        }
    }
    ShadowingCertificate cert = construct_shadowing_point(lattice_spec, t0);
    cert.lattice_aligned = true;
    return cert;
}

std::string ShadowingCertificate::serialize(const ShadowingSpec& spec) const {
    std::string out = "# shadowing-certificate v1\n";
    fmt_kv(out, "delta", spec.delta);
    fmt_kv(out, "n", spec.n);
    fmt_kv(out, "t0", spec.t0);
    fmt_kv(out, "p", spec.p);
    fmt_kv(out, "period", period);
    fmt_kv(out, "gap", gap_used);
    fmt_kv(out, "cut", cut);
    fmt_kv(out, "verify_step", verify_step);
    fmt_kv(out, "lattice", lattice_aligned ? 1 : 0);
    fmt_kv(out, "period_residual", period_residual);
    fmt_kv(out, "class_member", class_check.member ? 1 : 0);
    fmt_kv(out, "class_sup", class_check.sup_norm);
    fmt_kv(out, "class_slope", class_check.max_slope);
    fmt_kv(out, "pieces", double(spec.pieces.size()));
    char buf[200];
    for (size_t r = 0; r < spec.pieces.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "piece %zu a %.17g b %.17g\n", r, spec.pieces[r].a,
                      spec.pieces[r].b);
        out += buf;
        if (r < per_piece_errors.size()) {
            std::snprintf(buf, sizeof(buf), "error %zu max %.17g argmax %.17g\n", r,
                          per_piece_errors[r].max_error, per_piece_errors[r].argmax_t);
            out += buf;
        }
    }
    out += "begin weight\n" + spec.weight.serialize() + "end weight\n";
    for (size_t r = 0; r < spec.pieces.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "begin piece_function %zu\n", r);
        out += buf;
        out += sgsp::serialize(spec.pieces[r].y);
        std::snprintf(buf, sizeof(buf), "end piece_function %zu\n", r);
        out += buf;
    }
    out += "begin x\n" + sgsp::serialize(x) + "end x\n";
    return out;
}

CertificateBundle parse_certificate(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# shadowing-certificate", 0) != 0)
        throw std::invalid_argument("not a shadowing certificate");

    std::map<std::string, double> kv;
    std::vector<std::array<double, 2>> piece_times;
    std::vector<PieceError> errors;
    std::optional<std::string> weight_text;
    std::vector<std::string> piece_texts;
    std::optional<std::string> x_text;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string key;
        row >> key;
        if (key == "begin") {
            std::string what;
            row >> what;
            std::string block;
            while (std::getline(in, line) && line.rfind("end ", 0) != 0) block += line + "\n";
            if (what == "weight") weight_text = block;
            else if (what == "piece_function") piece_texts.push_back(block);
            else if (what == "x") x_text = block;
        } else if (key == "piece") {
            size_t idx; std::string ka, kb; double a, b;
            row >> idx >> ka >> a >> kb >> b;
            piece_times.push_back({a, b});
        } else if (key == "error") {
            size_t idx; std::string km, kg; double m, g;
            row >> idx >> km >> m >> kg >> g;
            errors.push_back({m, g});
        } else {
            double v;
            if (row >> v) kv[key] = v;
        }
    }
    if (!weight_text || !x_text || piece_texts.size() != piece_times.size())
        throw std::invalid_argument("incomplete certificate");

    CertificateBundle bundle{ShadowingSpec{}, ShadowingCertificate{}};
    bundle.spec.delta = kv.at("delta");
    bundle.spec.n = kv.at("n");
    bundle.spec.t0 = kv.at("t0");
    bundle.spec.p = kv.at("p");
    bundle.spec.weight = WeightFunction::parse(*weight_text);
    for (size_t r = 0; r < piece_texts.size(); ++r)
        bundle.spec.pieces.push_back(
            {parse_grid_function(piece_texts[r]), piece_times[r][0], piece_times[r][1]});

    bundle.certificate.x = parse_grid_function(*x_text);
    bundle.certificate.period = kv.at("period");
    bundle.certificate.gap_used = kv.at("gap");
    bundle.certificate.cut = kv.at("cut");
    bundle.certificate.verify_step = kv.at("verify_step");
    bundle.certificate.lattice_aligned = kv.at("lattice") != 0;
    bundle.certificate.period_residual = kv.at("period_residual");
    bundle.certificate.class_check.member = kv.at("class_member") != 0;
    bundle.certificate.class_check.sup_norm = kv.at("class_sup");
    bundle.certificate.class_check.max_slope = kv.at("class_slope");
    bundle.certificate.per_piece_errors = std::move(errors);
    return bundle;
}

}  // namespace sgsp
