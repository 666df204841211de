// schedule.hpp
#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace streambandit {

// ε_p = n^{1-p/P} · Δ / 4 for p = 0..P, evaluated in long double.
inline std::vector<double> epsilon_schedule(std::size_t n, std::size_t passes, double delta2) {
    if (n < 1) throw std::domain_error("epsilon_schedule: n must be >= 1");
    if (passes < 1) throw std::domain_error("epsilon_schedule: P must be >= 1");
    if (!(delta2 > 0.0)) throw std::domain_error("epsilon_schedule: gap must be positive");
    std::vector<double> eps(passes + 1);
    const long double ln_n = std::log(static_cast<long double>(n));
    for (std::size_t p = 0; p <= passes; ++p) {
        const long double expo = 1.0L - static_cast<long double>(p) / static_cast<long double>(passes);
        eps[p] = static_cast<double>(std::exp(expo * ln_n) * static_cast<long double>(delta2) / 4.0L);
    }
    eps[passes] = delta2 / 4.0;
    return eps;
}

// ceil(8 · log_term / ε²); log_term is the natural log of the union-bound
// denominator, e.g. ln(2n(P+1)/δ).
inline std::uint64_t budget_from_log(double epsilon, long double log_term) {
    if (!(epsilon > 0.0)) throw std::domain_error("pull budget: epsilon must be positive");
    const long double e = epsilon;
    const long double t = std::ceil(8.0L * log_term / (e * e));
    if (!(t < 18446744073709551616.0L)) // 2^64
        throw BudgetOverflow("pull budget exceeds 64-bit counter (epsilon=" + std::to_string(epsilon) + ")");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

inline long double log_term_single(std::size_t n, std::size_t passes, double delta) {
    return std::log(2.0L * n * (passes + 1.0L) / static_cast<long double>(delta));
}

inline long double log_term_rerun(std::size_t n, std::size_t passes, double delta) {
    const long double pp = passes + 1.0L;
    return std::log(2.0L * n * pp * pp / static_cast<long double>(delta));
}

// T = ceil(8 ln(2n(P+1)/δ) / ε²).
inline std::uint64_t pull_budget(double epsilon, std::size_t n, std::size_t passes, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("pull budget: delta must be positive");
    return budget_from_log(epsilon, log_term_single(n, passes, delta));
}

struct EliminationSchedule {
    std::size_t passes{1}; // P
    double delta{0.05};
    double delta2{0.0};
    std::vector<double> epsilons;       // ε_0..ε_P
    std::vector<std::uint64_t> budgets; // T_0..T_P
};

enum class BudgetRule { single_pass_union, rerun_union };

inline EliminationSchedule make_schedule(std::size_t n, std::size_t passes, double delta, double delta2,
                                         BudgetRule rule = BudgetRule::single_pass_union) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
    EliminationSchedule s;
    s.passes = passes;
    s.delta = delta;
    s.delta2 = delta2;
    s.epsilons = epsilon_schedule(n, passes, delta2);
    const long double lt = rule == BudgetRule::single_pass_union ? log_term_single(n, passes, delta)
                                                                 : log_term_rerun(n, passes, delta);
    s.budgets.reserve(passes + 1);
    for (double e : s.epsilons) s.budgets.push_back(budget_from_log(e, lt));
    return s;
}

// Smallest p with gap > 1.5 ε_p; P for the best arm or when no level qualifies.
inline std::size_t elimination_level(double gap, const std::vector<double>& epsilons) {
    if (gap < 0.0) throw std::domain_error("elimination_level: negative gap");
    const std::size_t last = epsilons.size() - 1;
    if (gap == 0.0) return last;
    for (std::size_t p = 0; p < epsilons.size(); ++p)
        if (gap > 1.5 * epsilons[p]) return p;
    return last;
}

} // namespace streambandit
