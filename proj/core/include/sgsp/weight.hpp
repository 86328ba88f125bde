#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sgsp {

/// Constants of the admissibility inequality  v(x) <= M e^{w t} v(x+t).
struct AdmissibleParams {
    double big_m = 1.0;   // M >= 1
    double growth = 0.0;  // w
};

struct ExpDecay {
    double rate;  // v(x) = exp(-rate * x), rate > 0
};
struct ConstantLevel {
    double level;  // v(x) = level > 0
};
struct RationalDecay {
    double exponent;  // v(x) = (1 + x)^{-q}, q > 0
};

/// Tabulated weight on [x.front(), x.back()], linear interpolation between
/// samples. With zero_beyond the weight vanishes past x.back(); otherwise the
/// tail is unknown and tail integrals can at best be partial.
struct TableWeight {
    std::vector<double> x;
    std::vector<double> value;
    bool zero_beyond = false;
};

struct TailIntegral {
    enum class Verdict { Finite, Divergent, Inconclusive };
    Verdict verdict = Verdict::Finite;
    double value = 0.0;  // the integral when Finite, a partial sum otherwise

    bool finite() const { return verdict == Verdict::Finite; }
    bool divergent() const { return verdict == Verdict::Divergent; }
};

const char* to_string(TailIntegral::Verdict v);

/// Strictly positive weight v on the half line. The three analytic families
/// carry closed-form integrals; tables are handled by trapezoid sums plus a
/// divergence heuristic.
class WeightFunction {
  public:
    using Kind = std::variant<ExpDecay, ConstantLevel, RationalDecay, TableWeight>;

    explicit WeightFunction(Kind kind, std::optional<AdmissibleParams> admissible = {});

    static WeightFunction exp_decay(double rate);
    static WeightFunction constant(double level);
    static WeightFunction rational_decay(double exponent);
    static WeightFunction table(std::vector<double> x, std::vector<double> value,
                                bool zero_beyond = false);

    /// Point evaluation. Tables evaluate to 0 beyond their range when
    /// zero_beyond is set and to NaN when the tail is unknown.
    double operator()(double x) const;

    /// integral of v over [cut, infinity): closed form for the analytic
    /// families, exact polyline sum for zero_beyond tables, heuristic verdict
    /// otherwise.
    TailIntegral tail_integral(double cut) const;

    /// integral of v over [a, b] (finite part only).
    double integral_between(double a, double b) const;

    const Kind& kind() const { return kind_; }
    bool is_table() const { return std::holds_alternative<TableWeight>(kind_); }
    const std::optional<AdmissibleParams>& admissible_params() const { return admissible_; }
    void set_admissible_params(AdmissibleParams p) { admissible_ = p; }

    std::string describe() const;

    /// Tabular text form: a '#'-header with kind/step metadata followed by
    /// one "x,value" line per sample.
    std::string serialize() const;
    static WeightFunction parse(const std::string& text);

  private:
    Kind kind_;
    std::optional<AdmissibleParams> admissible_;
};

struct AdmissibilityReport {
    enum class Verdict { Admissible, NotAdmissible, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> m_min;     // sup of v(x) e^{-w t} / v(x+t), finest pass
    std::vector<double> pass_sups;   // sup per refinement pass
    std::string note;
};

const char* to_string(AdmissibilityReport::Verdict v);

/// Empirical probe of v(x) <= M e^{w t} v(x+t): the supremum of the ratio is
/// tracked over three passes that double the grid density and push the x
/// range outward. A stable sup reads "admissible (empirical)", sustained
/// growth reads "not admissible".
AdmissibilityReport admissibility_check(const WeightFunction& v,
                                        std::vector<double> x_grid,
                                        std::vector<double> t_grid,
                                        double w_candidate);

/// Smallest cut whose weight tail is below `mass`: closed forms for the
/// analytic families, the support end for zero-beyond tables (their tail past
/// the support is exactly zero). Throws Refusal when no finite cut exists.
double cut_for_tail_mass(const WeightFunction& v, double mass);

/// (M, w) pairs that hold exactly for the analytic families:
/// exp decay -> (1, rate), constant -> (1, 0), (1+x)^{-q} -> (1, q).
std::optional<AdmissibleParams> canonical_admissible_params(const WeightFunction& v);

/// Spot check of the admissibility inequality for stored params on a default
/// grid; used when engines are constructed.
bool admissible_params_hold(const WeightFunction& v, const AdmissibleParams& params,
                            double x_hi = 20.0, double t_hi = 5.0, int samples = 64);

}  // namespace sgsp
