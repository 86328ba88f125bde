#pragma once

#include <stdexcept>

namespace sgsp {

/// Exponents of the function spaces in play: p for the weighted L^p norm,
/// (s, tau_y) for the growth/decay control of the sup norm
/// sup_x |u(x)| / ((1 + x^s)(1 + x^{-tau_y})).
struct SpaceParams {
    double p = 2.0;
    double s = 4.0;
    double tau_y = 0.0;

    void validate() const {
        if (!(p >= 1.0)) throw std::invalid_argument("space params need p >= 1");
        if (!(s > 0.0)) throw std::invalid_argument("space params need s > 0");
        if (!(tau_y >= 0.0)) throw std::invalid_argument("space params need tau_y >= 0");
    }
};

}  // namespace sgsp
