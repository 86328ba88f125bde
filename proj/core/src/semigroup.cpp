#include "sgsp/semigroup.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace sgsp {

TranslationEngine::TranslationEngine(WeightFunction w, double p_exponent)
    : weight(std::move(w)), p(p_exponent) {
    if (!(p >= 1.0)) throw std::invalid_argument("translation engine needs p >= 1");
    if (!weight.admissible_params()) {
        auto canon = canonical_admissible_params(weight);
        if (!canon)
            throw std::invalid_argument(
                "translation engine needs a weight with admissibility constants");
        weight.set_admissible_params(*canon);
    }
    if (!admissible_params_hold(weight, *weight.admissible_params()))
        throw std::invalid_argument("stored admissibility constants fail the spot check");
}

SecondOrderEngine::SecondOrderEngine(double alpha_, std::optional<double> tau_, double rho_,
                                     int n_trunc_)
    : alpha(alpha_), relaxation(tau_), rho(rho_), n_trunc(n_trunc_) {
    if (!(alpha > 0)) throw std::invalid_argument("second-order engine needs alpha > 0");
    if (relaxation && !(*relaxation > 0))
        throw std::invalid_argument("second-order engine needs tau > 0 when damped");
    if (!(rho > 0)) throw std::invalid_argument("second-order engine needs rho > 0");
    if (n_trunc < 2) throw std::invalid_argument("second-order engine needs n_trunc >= 2");
}

BlackScholesEngine::BlackScholesEngine(double sigma_, double rate_, SpaceParams params)
    : sigma(sigma_), rate(rate_), norm_params(params) {
    if (!(sigma > 0)) throw std::invalid_argument("Black-Scholes engine needs sigma > 0");
    if (!(rate > 0)) throw std::invalid_argument("Black-Scholes engine needs r > 0");
    norm_params.validate();
}

const char* engine_name(const SemigroupHandle& handle) {
    if (std::holds_alternative<TranslationEngine>(handle)) return "translation";
    if (std::holds_alternative<SecondOrderEngine>(handle)) return "secondorder";
    return "blackscholes";
}

CoefficientPair second_order_generator(const CoefficientPair& u, const SecondOrderEngine& eng) {
    size_t n = u.n_trunc();
    double rho2 = eng.rho * eng.rho;
    double c = eng.c_coef(), e = eng.e_coef();
    std::vector<std::complex<double>> a(n + 1), b(n + 1);
    for (size_t j = 0; j <= n; ++j) {
        a[j] = u.b()[j];
        std::complex<double> d2 = (j + 2 <= n) ? rho2 * u.a()[j + 2] : 0.0;
        b[j] = c * d2 + e * u.b()[j];
    }
    return CoefficientPair(u.rho(), std::move(a), std::move(b));
}

namespace {

Eigen::MatrixXcd section_matrix(const SecondOrderEngine& eng, int n) {
    int dim = n + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
    double rho2 = eng.rho * eng.rho;
    double c = eng.c_coef(), e = eng.e_coef();
    for (int j = 0; j < dim; ++j) {
        m(j, dim + j) = 1.0;                              // top-right identity
        if (j + 2 < dim) m(dim + j, j + 2) = c * rho2;    // c D^2, shift by two
        m(dim + j, dim + j) = e;                          // e I
    }
    return m;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
    // scaling-and-squaring with a plain Taylor sum; accuracy is gated outside
    // by the N vs N+10 truncation comparison
    double norm = 0.0;
    for (int i = 0; i < a.rows(); ++i) norm = std::max(norm, a.row(i).cwiseAbs().sum());
    int squarings = 0;
    if (norm > 0.5) squarings = int(std::ceil(std::log2(norm / 0.5)));
    Eigen::MatrixXcd small = a / std::pow(2.0, squarings);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd term = x;
    for (int k = 1; k <= 40; ++k) {
        term = (term * small) / double(k);
        x += term;
        double tn = term.cwiseAbs().maxCoeff();
        if (tn < 1e-19) break;
    }
    for (int s = 0; s < squarings; ++s) x = x * x;
    return x;
}

struct FlowKey {
    double alpha, tau, rho, t;
    int n;
    bool operator<(const FlowKey& o) const {
        return std::tie(alpha, tau, rho, t, n) < std::tie(o.alpha, o.tau, o.rho, o.t, o.n);
    }
};

std::shared_ptr<const Eigen::MatrixXcd> flow_matrix(const SecondOrderEngine& eng, double t,
                                                    int n) {
    static std::map<FlowKey, std::shared_ptr<const Eigen::MatrixXcd>> cache;
    static std::mutex mutex;
    FlowKey key{eng.alpha, eng.relaxation.value_or(-1.0), eng.rho, t, n};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto mat = std::make_shared<Eigen::MatrixXcd>(matrix_exponential(t * section_matrix(eng, n)));
    if (cache.size() > 256) cache.clear();
    cache.emplace(key, mat);
    return mat;
}

CoefficientPair flow_apply(const SecondOrderEngine& eng, double t, const CoefficientPair& u,
                           int n) {
    int dim = n + 1;
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(2 * dim);
    for (size_t j = 0; j < u.a().size() && int(j) < dim; ++j) {
        vec(long(j)) = u.a()[j];
        vec(long(dim + j)) = u.b()[j];
    }
    Eigen::VectorXcd out = (*flow_matrix(eng, t, n)) * vec;
    std::vector<std::complex<double>> a(dim), b(dim);
    for (int j = 0; j < dim; ++j) {
        a[j] = out(j);
        b[j] = out(dim + j);
    }
    return CoefficientPair(u.rho(), std::move(a), std::move(b));
}

}  // namespace

SecondOrderResult second_order_apply(double t, const CoefficientPair& u,
                                     const SecondOrderEngine& eng, double tol) {
    if (t < 0) throw std::invalid_argument("second_order_apply needs t >= 0");
    if (t == 0.0) return {u, 0.0, false};
    int n = eng.n_trunc;
    CoefficientPair main = flow_apply(eng, t, u, n);
    CoefficientPair ref = flow_apply(eng, t, u, n + 10).truncated(size_t(n));
    double est = x_rho_norm(lin_comb(1.0, main, -1.0, ref));
    return {std::move(main), est, est > tol};
}

MonomialCombo blackscholes_apply(double t, const MonomialCombo& u,
                                 const BlackScholesEngine& eng) {
    if (t < 0) throw std::invalid_argument("blackscholes_apply needs t >= 0");
    if (t == 0.0) return u;
    std::vector<MonomialTerm> terms = u.terms();
    for (auto& term : terms) term.coefficient *= std::exp(t * eng.eigenvalue(term.exponent));
    return MonomialCombo(std::move(terms));
}

State apply(const SemigroupHandle& handle, double t, const State& state) {
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        (void)tr;
        if (auto* f = std::get_if<GridFunction>(&state)) return translate(*f, t);
        throw std::invalid_argument("translation engine acts on grid functions");
    }
    if (auto* so = std::get_if<SecondOrderEngine>(&handle)) {
        if (auto* u = std::get_if<CoefficientPair>(&state))
            return second_order_apply(t, *u, *so).value;
        throw std::invalid_argument("second-order engine acts on coefficient pairs");
    }
    const auto& bs = std::get<BlackScholesEngine>(handle);
    if (auto* u = std::get_if<MonomialCombo>(&state)) return blackscholes_apply(t, *u, bs);
    throw std::invalid_argument("Black-Scholes engine acts on monomial combinations");
}

double state_norm(const SemigroupHandle& handle, const State& state) {
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        const auto& f = std::get<GridFunction>(state);
        LpNorm n = lp_v_norm(f, tr->weight, tr->p);
        return n.finite() ? n.value : std::numeric_limits<double>::infinity();
    }
    if (std::holds_alternative<SecondOrderEngine>(handle))
        return x_rho_norm(std::get<CoefficientPair>(state));
    const auto& bs = std::get<BlackScholesEngine>(handle);
    return y_stau_norm(std::get<MonomialCombo>(state), bs.norm_params).value;
}

double state_distance(const SemigroupHandle& handle, const State& x, const State& y) {
    if (auto* tr = std::get_if<TranslationEngine>(&handle)) {
        LpNorm n = lp_v_distance(std::get<GridFunction>(x), std::get<GridFunction>(y),
                                 tr->weight, tr->p);
        return n.finite() ? n.value : std::numeric_limits<double>::infinity();
    }
    if (std::holds_alternative<SecondOrderEngine>(handle))
        return x_rho_norm(lin_comb(1.0, std::get<CoefficientPair>(x), -1.0,
                                   std::get<CoefficientPair>(y)));
    const auto& bs = std::get<BlackScholesEngine>(handle);
    return y_stau_norm(lin_comb(1.0, std::get<MonomialCombo>(x), -1.0,
                                std::get<MonomialCombo>(y)),
                       bs.norm_params)
        .value;
}

LawReport check_semigroup_laws(const SemigroupHandle& handle, const State& f, double t1,
                               double t2, double continuity_epsilon) {
    if (t1 < 0 || t2 < 0) throw std::invalid_argument("law checks need t1, t2 >= 0");
    LawReport rep;
    rep.continuity_epsilon = continuity_epsilon;
    rep.identity_residual = state_distance(handle, apply(handle, 0.0, f), f);
    State both = apply(handle, t1 + t2, f);
    State chained = apply(handle, t2, apply(handle, t1, f));
    rep.composition_residual = state_distance(handle, both, chained);
    State ahead = apply(handle, t1 + continuity_epsilon, f);
    rep.continuity_residual = state_distance(handle, ahead, apply(handle, t1, f));
    if (std::holds_alternative<TranslationEngine>(handle))
        rep.interpolation_bound =
            translate_error_bound(std::get<GridFunction>(f), t1 + continuity_epsilon);
    return rep;
}

}  // namespace sgsp
