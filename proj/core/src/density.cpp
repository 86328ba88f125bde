#include "sgsp/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgsp {

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals)
    : intervals_(std::move(intervals)) {
    for (auto& [a, b] : intervals_) {
        if (!(a <= b)) throw std::invalid_argument("interval endpoints out of order");
        a = std::max(a, 0.0);
        b = std::max(b, 0.0);
    }
    std::erase_if(intervals_, [](const auto& iv) { return iv.second <= iv.first; });
    std::sort(intervals_.begin(), intervals_.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : intervals_) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    intervals_ = std::move(merged);
}

double IntervalUnion::measure_up_to(double t) const {
    double acc = 0.0;
    for (const auto& [a, b] : intervals_) {
        if (a >= t) break;
        acc += std::min(b, t) - a;
    }
    return acc;
}

BooleanSeries::BooleanSeries(double step, std::vector<char> values)
    : step_(step), values_(std::move(values)) {
    if (!(step_ > 0)) throw std::invalid_argument("boolean series needs step > 0");
    prefix_.resize(values_.size() + 1, 0.0);
    for (size_t j = 0; j < values_.size(); ++j)
        prefix_[j + 1] = prefix_[j] + (values_[j] ? step_ : 0.0);
}

double BooleanSeries::measure_up_to(double t) const {
    if (t <= 0) return 0.0;
    double u = t / step_;
    size_t full = std::min(values_.size(), size_t(u));
    double acc = prefix_[full];
    if (full < values_.size() && values_[full]) acc += (t - double(full) * step_);
    return acc;
}

namespace {

template <class MeasureFn>
DensityEstimate estimate_impl(MeasureFn&& mu, double horizon, double step, DensityMode mode,
                              const DensityOptions& opt) {
    if (!(horizon > 0) || !(step > 0))
        throw std::invalid_argument("density estimates need horizon, step > 0");
    DensityEstimate out;
    out.horizon = horizon;
    out.step = step;
    out.mode = mode;
    out.tail_fraction = opt.tail_fraction;

    double t0 = opt.t_start > 0 ? opt.t_start : std::max(step, horizon * 1e-6);
    t0 = std::min(t0, horizon);
    for (double t = t0; t < horizon * (1.0 - 1e-12); t *= opt.grid_ratio)
        out.ratios.emplace_back(t, 0.0);
    out.ratios.emplace_back(horizon, 0.0);
    for (auto& [t, r] : out.ratios) r = std::clamp(mu(t) / t, 0.0, 1.0);

    size_t tail_begin = size_t(double(out.ratios.size()) * (1.0 - opt.tail_fraction));
    tail_begin = std::min(tail_begin, out.ratios.size() - 1);
    out.upper = 0.0;
    out.lower = 1.0;
    for (size_t j = tail_begin; j < out.ratios.size(); ++j) {
        out.upper = std::max(out.upper, out.ratios[j].second);
        out.lower = std::min(out.lower, out.ratios[j].second);
    }
    out.low_confidence = (out.ratios.size() - tail_begin) < 8 || horizon < 16.0 * step;
    return out;
}

}  // namespace

DensityEstimate density_estimate(const IntervalUnion& set, double horizon, double step,
                                 DensityMode mode, const DensityOptions& opt) {
    return estimate_impl([&](double t) { return set.measure_up_to(t); }, horizon, step, mode,
                         opt);
}

DensityEstimate density_estimate(const BooleanSeries& series, double horizon, DensityMode mode,
                                 const DensityOptions& opt) {
    return estimate_impl([&](double t) { return series.measure_up_to(t); }, horizon,
                         series.step(), mode, opt);
}

}  // namespace sgsp
