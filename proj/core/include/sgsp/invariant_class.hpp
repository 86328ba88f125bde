#pragma once

#include "sgsp/grid_function.hpp"

namespace sgsp {

/// Membership report for the invariant class K_n = { f : sup|f| <= n,
/// Lipschitz constant <= n }. Translation never increases either bound, the
/// classes increase in n, contain 0, and their union is dense when the
/// weight has finite mass.
struct KnReport {
    bool member = false;
    double sup_norm = 0.0;
    double max_slope = 0.0;
};

KnReport kn_membership(const GridFunction& f, double n, double slack = 1e-9);

}  // namespace sgsp
