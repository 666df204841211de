// infotheory.hpp
#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace streambandit::info {

// All logarithms are natural; 0·ln 0 = 0.

inline double kl_bernoulli(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) throw std::domain_error("kl_bernoulli: mean outside [0,1]");
    if ((q == 0.0 || q == 1.0) && p != q) throw std::domain_error("kl_bernoulli: divergence is infinite");
    auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
    return std::max(0.0, term(p, q) + term(1.0 - p, 1.0 - q));
}

inline double kl_discrete(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("kl_discrete: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] == 0.0) continue;
        if (nu[i] == 0.0) throw std::domain_error("kl_discrete: divergence is infinite");
        s += mu[i] * std::log(mu[i] / nu[i]);
    }
    return std::max(0.0, s);
}

inline void check_probability_vector(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        if (!(x >= 0.0)) throw std::domain_error("negative probability");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::domain_error("probabilities do not sum to 1");
}

inline double tvd_discrete(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("tvd_discrete: dimension mismatch");
    check_probability_vector(mu);
    check_probability_vector(nu);
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::abs(mu[i] - nu[i]);
    return std::min(1.0, 0.5 * s);
}

inline double tvd_bernoulli(double p, double q) {
    const double mu[2] = {1.0 - p, p};
    const double nu[2] = {1.0 - q, q};
    return tvd_discrete(mu, nu);
}

// Success probability of the maximum-likelihood guess of which of mu (prior
// rho) or nu produced a single sample, by summing over outcomes.
inline double mle_success_probability(std::span<const double> mu, std::span<const double> nu, double rho) {
    if (mu.size() != nu.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::max(rho * mu[i], (1.0 - rho) * nu[i]);
    return s;
}

inline double distinguishing_success_formula(double rho, double tvd) {
    return std::max(rho, 1.0 - rho) + std::min(rho, 1.0 - rho) * tvd;
}

// Bernoulli(1/2 + alpha) vs Bernoulli(1/2 + beta).
struct BernoulliMeanPair {
    double alpha{0.0};
    double beta{0.0};
};

struct KlBoundReport {
    BernoulliMeanPair pair;
    double kl12{0.0};          // KL(Bern(1/2+α) || Bern(1/2+β))
    double kl21{0.0};
    double bound8{0.0};        // 8(β-α)²
    double chi2_bound12{0.0};  // (p-q)²/(q(1-q))
    double chi2_bound21{0.0};  // (q-p)²/(p(1-p))
    bool bound8_holds{false};
    bool chi2_bound_holds{false};

    bool passed() const { return bound8_holds && chi2_bound_holds; }
};

inline KlBoundReport check_bernoulli_kl_bounds(BernoulliMeanPair pair) {
    if (std::max(pair.alpha, pair.beta) > 1.0 / 6.0 + 1e-15) throw std::domain_error("pair outside the max <= 1/6 regime");
    const double p = 0.5 + pair.alpha;
    const double q = 0.5 + pair.beta;
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) throw std::domain_error("means must lie in (0,1)");
    KlBoundReport r;
    r.pair = pair;
    r.kl12 = kl_bernoulli(p, q);
    r.kl21 = kl_bernoulli(q, p);
    const double d = pair.beta - pair.alpha;
    r.bound8 = 8.0 * d * d;
    r.chi2_bound12 = (p - q) * (p - q) / (q * (1.0 - q));
    r.chi2_bound21 = (q - p) * (q - p) / (p * (1.0 - p));
    r.bound8_holds = r.kl12 <= r.bound8 && r.kl21 <= r.bound8;
    r.chi2_bound_holds = r.kl12 <= r.chi2_bound12 && r.kl21 <= r.chi2_bound21;
    return r;
}

// {0, 0.01, ..., 0.16, 1/6}
inline std::vector<double> claim_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 16; ++k) g.push_back(k / 100.0);
    g.push_back(1.0 / 6.0);
    return g;
}

} // namespace streambandit::info
