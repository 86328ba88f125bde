#pragma once

#include <utility>
#include <vector>

namespace sgsp {

/// Finite union of intervals on the half line, normalised to disjoint sorted
/// form; the measure of any prefix [0, t] is exact.
class IntervalUnion {
  public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    double measure_up_to(double t) const;

  private:
    std::vector<std::pair<double, double>> intervals_;
};

/// Per-step indicator series: value[j] covers [j*step, (j+1)*step).
class BooleanSeries {
  public:
    BooleanSeries(double step, std::vector<char> values);

    double step() const { return step_; }
    const std::vector<char>& values() const { return values_; }
    double measure_up_to(double t) const;

  private:
    double step_;
    std::vector<char> values_;
    std::vector<double> prefix_;  // cumulative measure at step boundaries
};

enum class DensityMode { Upper, Lower };

struct DensityOptions {
    double grid_ratio = 1.05;    // geometric spacing of the ratio series
    double tail_fraction = 0.5;  // trailing share of the series read as the limit
    double t_start = 0.0;        // 0: derived from step and horizon
};

/// Tail-windowed surrogate for the upper/lower asymptotic density of a set:
/// the ratio mu(B intersect [0,t]) / t is sampled on a geometric t-grid and
/// the limsup/liminf are read as max/min over the trailing window.
struct DensityEstimate {
    double horizon = 0.0;
    double step = 0.0;
    std::vector<std::pair<double, double>> ratios;  // (t, mu([0,t])/t)
    double upper = 0.0;
    double lower = 0.0;
    double tail_fraction = 0.5;
    DensityMode mode = DensityMode::Upper;
    bool low_confidence = false;

    double primary() const { return mode == DensityMode::Upper ? upper : lower; }
};

DensityEstimate density_estimate(const IntervalUnion& set, double horizon, double step,
                                 DensityMode mode, const DensityOptions& opt = {});
DensityEstimate density_estimate(const BooleanSeries& series, double horizon, DensityMode mode,
                                 const DensityOptions& opt = {});

}  // namespace sgsp
