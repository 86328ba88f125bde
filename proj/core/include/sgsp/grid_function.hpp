#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgsp {

enum class Extension { Zero, Periodic };

namespace detail {
inline bool finite_sample(double v) { return std::isfinite(v); }
inline bool finite_sample(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}
inline double abs_sample(double v) { return std::abs(v); }
inline double abs_sample(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

/// Uniformly sampled function on [0, x_max] with a fixed evaluation contract:
/// linear interpolation between nodes, zero beyond x_max (Zero extension) or
/// wrap-around modulo the period (Periodic extension, period a grid multiple).
/// Periodic functions are canonicalised to exactly one period of samples.
template <class T>
class BasicGridFunction {
  public:
    /// Trivial zero function; placeholder for default-constructed reports.
    BasicGridFunction() : BasicGridFunction(1.0, std::vector<T>(2)) {}

    BasicGridFunction(double step, std::vector<T> samples, Extension ext = Extension::Zero,
                      double period = 0.0)
        : step_(step), samples_(std::move(samples)), ext_(ext), period_(period) {
        if (!(step_ > 0)) throw std::invalid_argument("grid step must be positive");
        if (samples_.size() < 2) throw std::invalid_argument("grid function needs two samples");
        for (const T& s : samples_)
            if (!detail::finite_sample(s)) throw std::invalid_argument("grid samples must be finite");
        if (ext_ == Extension::Periodic) {
            double ratio = period_ / step_;
            long k = std::llround(ratio);
            if (!(period_ > 0) || k < 1 || std::abs(ratio - double(k)) > 1e-9)
                throw std::invalid_argument("period must be a positive multiple of the grid step");
            period_index_ = size_t(k);
            if (period_index_ + 1 > samples_.size())
                throw std::invalid_argument("period exceeds the sampled range");
            samples_.resize(period_index_ + 1);
        } else {
            period_ = 0.0;
            period_index_ = 0;
        }
    }

    template <class F>
    static BasicGridFunction sampled(double step, double x_max, F&& fn,
                                     Extension ext = Extension::Zero, double period = 0.0) {
        size_t count = size_t(std::llround(x_max / step)) + 1;
        std::vector<T> s(count);
        for (size_t j = 0; j < count; ++j) s[j] = fn(double(j) * step);
        return BasicGridFunction(step, std::move(s), ext, period);
    }

    static BasicGridFunction zeros(double step, double x_max, Extension ext = Extension::Zero,
                                   double period = 0.0) {
        return sampled(step, x_max, [](double) { return T{}; }, ext, period);
    }

    double step() const { return step_; }
    double x_max() const { return step_ * double(samples_.size() - 1); }
    size_t n_samples() const { return samples_.size(); }
    Extension extension() const { return ext_; }
    double period() const { return period_; }
    size_t period_index() const { return period_index_; }

    std::span<const T> samples() const { return samples_; }
    const T& operator[](size_t j) const { return samples_[j]; }
    T& operator[](size_t j) { return samples_[j]; }

    /// Value at node index j of the extended function (valid for any j).
    T at_index(size_t j) const {
        if (j < samples_.size()) return samples_[j];
        if (ext_ == Extension::Periodic) return samples_[j % period_index_];
        return T{};
    }

    T eval(double x) const {
        if (x < 0) x = 0;  // the domain is the half line
        if (ext_ == Extension::Periodic) {
            x = std::fmod(x, period_);
            if (x < 0) x += period_;
        } else if (x >= x_max()) {
            return (x <= x_max() + 1e-9 * step_) ? samples_.back() : T{};
        }
        double u = x / step_;
        size_t j = size_t(u);
        if (j + 1 >= samples_.size()) return samples_.back();
        double th = u - double(j);
        if (th < 1e-7) return samples_[j];
        if (th > 1.0 - 1e-7) return samples_[j + 1];
        return samples_[j] * (1.0 - th) + samples_[j + 1] * th;
    }

  private:
    double step_;
    std::vector<T> samples_;
    Extension ext_;
    double period_;
    size_t period_index_ = 0;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

/// T_t f = f(. + t). Grid-aligned shifts are exact index moves; other shifts
/// resample through the interpolation contract (periodic wrap stays exact).
template <class T>
BasicGridFunction<T> translate(const BasicGridFunction<T>& f, double t) {
    if (t < 0) throw std::invalid_argument("translation needs t >= 0");
    double ratio = t / f.step();
    long k = std::llround(ratio);
    bool aligned = std::abs(ratio - double(k)) <= 1e-9 * std::max(1.0, std::abs(ratio));
    std::vector<T> out(f.n_samples());
    if (aligned) {
        for (size_t j = 0; j < out.size(); ++j) out[j] = f.at_index(j + size_t(k));
    } else if (f.extension() == Extension::Periodic) {
        size_t pi = f.period_index();
        for (size_t j = 0; j < pi; ++j) out[j] = f.eval(double(j) * f.step() + t);
        out[pi] = out[0];
    } else {
        for (size_t j = 0; j < out.size(); ++j) out[j] = f.eval(double(j) * f.step() + t);
    }
    return BasicGridFunction<T>(f.step(), std::move(out), f.extension(), f.period());
}

/// Sup-norm bound on the resampling error of translate() at this t.
template <class T>
double translate_error_bound(const BasicGridFunction<T>& f, double t);

double max_slope(const GridFunction& f);

template <class T>
double sup_abs(const BasicGridFunction<T>& f) {
    double m = 0;
    for (const T& s : f.samples()) m = std::max(m, detail::abs_sample(s));
    return m;
}

/// alpha*f + beta*g on a common grid (steps and extensions must agree; Zero
/// extensions of different lengths are padded).
template <class T>
BasicGridFunction<T> lin_comb(T alpha, const BasicGridFunction<T>& f, T beta,
                              const BasicGridFunction<T>& g) {
    if (std::abs(f.step() - g.step()) > 1e-12 * f.step())
        throw std::invalid_argument("lin_comb needs equal grid steps");
    if (f.extension() != g.extension())
        throw std::invalid_argument("lin_comb needs equal extensions");
    if (f.extension() == Extension::Periodic &&
        std::abs(f.period() - g.period()) > 1e-12 * f.period())
        throw std::invalid_argument("lin_comb needs equal periods");
    size_t count = std::max(f.n_samples(), g.n_samples());
    std::vector<T> out(count);
    for (size_t j = 0; j < count; ++j) out[j] = alpha * f.at_index(j) + beta * g.at_index(j);
    return BasicGridFunction<T>(f.step(), std::move(out), f.extension(), f.period());
}

template <class T>
BasicGridFunction<T> scaled(T alpha, const BasicGridFunction<T>& f) {
    std::vector<T> out(f.samples().begin(), f.samples().end());
    for (T& s : out) s = alpha * s;
    return BasicGridFunction<T>(f.step(), std::move(out), f.extension(), f.period());
}

std::string serialize(const GridFunction& f);
GridFunction parse_grid_function(const std::string& text);

/// Tent of the given peak on [center-width, center+width], zero elsewhere.
GridFunction tent_function(double step, double x_max, double center, double width, double peak);

// ---- implementation ----

template <class T>
double translate_error_bound(const BasicGridFunction<T>& f, double t) {
    double ratio = t / f.step();
    long k = std::llround(ratio);
    if (std::abs(ratio - double(k)) <= 1e-9 * std::max(1.0, std::abs(ratio))) return 0.0;
    double slope = 0;
    auto s = f.samples();
    for (size_t j = 0; j + 1 < s.size(); ++j)
        slope = std::max(slope, detail::abs_sample(s[j + 1] - s[j]) / f.step());
    return 0.5 * slope * f.step();
}

inline double max_slope_impl(std::span<const double> s, double h, Extension ext, size_t pi) {
    double m = 0;
    for (size_t j = 0; j + 1 < s.size(); ++j) m = std::max(m, std::abs(s[j + 1] - s[j]) / h);
    if (ext == Extension::Zero && std::abs(s.back()) > 0)
        return std::numeric_limits<double>::infinity();  // jump to 0 past x_max
    if (ext == Extension::Periodic && std::abs(s[pi] - s[0]) > 1e-12)
        return std::numeric_limits<double>::infinity();  // jump at the wrap point
    return m;
}

inline double max_slope(const GridFunction& f) {
    return max_slope_impl(f.samples(), f.step(), f.extension(), f.period_index());
}

inline GridFunction tent_function(double step, double x_max, double center, double width,
                                  double peak) {
    return GridFunction::sampled(step, x_max, [&](double x) {
        double d = std::abs(x - center);
        return d >= width ? 0.0 : peak * (1.0 - d / width);
    });
}

inline std::string serialize(const GridFunction& f) {
    char head[160];
    if (f.extension() == Extension::Periodic)
        std::snprintf(head, sizeof(head), "# gridfunction step=%.17g x_max=%.17g extension=periodic period=%.17g\n",
                      f.step(), f.x_max(), f.period());
    else
        std::snprintf(head, sizeof(head), "# gridfunction step=%.17g x_max=%.17g extension=zero\n",
                      f.step(), f.x_max());
    std::string out = head;
    char row[80];
    for (size_t j = 0; j < f.n_samples(); ++j) {
        std::snprintf(row, sizeof(row), "%.17g,%.17g\n", double(j) * f.step(), f[j]);
        out += row;
    }
    return out;
}

inline GridFunction parse_grid_function(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# gridfunction", 0) != 0)
        throw std::invalid_argument("grid function text must start with '# gridfunction'");
    std::istringstream head(line.substr(14));
    std::string tok;
    double step = 0, period = 0;
    Extension ext = Extension::Zero;
    while (head >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "step") step = std::stod(val);
        else if (key == "period") period = std::stod(val);
        else if (key == "extension") ext = (val == "periodic") ? Extension::Periodic : Extension::Zero;
    }
    std::vector<double> samples;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        samples.push_back(std::stod(line.substr(comma + 1)));
    }
    return GridFunction(step, std::move(samples), ext, period);
}

}  // namespace sgsp
