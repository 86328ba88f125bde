#include "sgsp/invariant_class.hpp"

namespace sgsp {

KnReport kn_membership(const GridFunction& f, double n, double slack) {
    KnReport rep;
    rep.sup_norm = sup_abs(f);
    rep.max_slope = max_slope(f);
    rep.member = rep.sup_norm <= n + slack && rep.max_slope <= n + slack;
    return rep;
}

}  // namespace sgsp
