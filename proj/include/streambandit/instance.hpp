// instance.hpp
#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace streambandit {

// Bernoulli arm. The success probability is mean + residual, where mean is
// the nearest double and residual carries what a double cannot hold (the
// lower-bound family plants offsets around 1e-30 on top of 1/2). Sampling
// only ever sees `mean`; ordering and gaps use both parts.
struct RewardDistribution {
    double mean{0.0};
    double residual{0.0};

    // Exact sum base + offset for |offset| <= |base| (Fast2Sum).
    static RewardDistribution from_sum(double base, double offset) {
        const double s = base + offset;
        const double r = (base - s) + offset;
        return {s, r};
    }
};

inline bool operator==(const RewardDistribution& a, const RewardDistribution& b) {
    return a.mean == b.mean && a.residual == b.residual;
}

// Lexicographic on (mean, residual); exact because |residual| < ulp(mean)/2.
inline bool mean_less(const RewardDistribution& a, const RewardDistribution& b) {
    return a.mean < b.mean || (a.mean == b.mean && a.residual < b.residual);
}

// a - b rounded once: TwoDiff on the leading parts, then the residuals.
inline double mean_difference(const RewardDistribution& a, const RewardDistribution& b) {
    const double d = a.mean - b.mean;
    const double bv = d - a.mean;
    const double err = (a.mean - (d - bv)) + (-b.mean - bv);
    return d + (err + (a.residual - b.residual));
}

enum class Delta2Mode { exact, lower_bound };

struct BanditInstance {
    std::vector<RewardDistribution> arms; // stream arrival order
    std::optional<double> known_delta2;
    Delta2Mode delta2_mode{Delta2Mode::exact};
    std::string label;

    std::size_t size() const noexcept { return arms.size(); }
    double mean(std::size_t i) const { return arms.at(i).mean; }

    static BanditInstance from_means(const std::vector<double>& means, std::string label = {}) {
        BanditInstance inst;
        inst.label = std::move(label);
        inst.arms.reserve(means.size());
        for (double m : means) inst.arms.push_back({m, 0.0});
        return inst;
    }
};

struct GapProfile {
    std::size_t best_index{0};
    std::vector<double> gaps;        // per arm, gaps[best_index] == 0
    std::vector<double> sorted_gaps; // Δ[2] <= Δ[3] <= ..., best excluded

    double delta2() const {
        if (sorted_gaps.empty()) throw std::domain_error("single-arm instance has no second gap");
        return sorted_gaps.front();
    }
};

inline GapProfile gap_profile(const BanditInstance& inst) {
    if (inst.arms.empty()) throw std::invalid_argument("instance has no arms");
    GapProfile g;
    const auto& arms = inst.arms;
    std::size_t best = 0;
    for (std::size_t i = 1; i < arms.size(); ++i)
        if (mean_less(arms[best], arms[i])) best = i;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i != best && arms[i] == arms[best])
            throw AmbiguousBest("arms " + std::to_string(best) + " and " + std::to_string(i));
    }
    g.best_index = best;
    g.gaps.resize(arms.size());
    g.sorted_gaps.reserve(arms.size() - 1);
    for (std::size_t i = 0; i < arms.size(); ++i) {
        g.gaps[i] = i == best ? 0.0 : mean_difference(arms[best], arms[i]);
        if (i != best) g.sorted_gaps.push_back(g.gaps[i]);
    }
    std::sort(g.sorted_gaps.begin(), g.sorted_gaps.end());
    return g;
}

// Σ_{i>=2} 1/Δ[i]^2, accumulated in extended precision.
inline double hardness_budget(const GapProfile& g) {
    long double sum = 0.0L;
    for (double d : g.sorted_gaps) sum += 1.0L / (static_cast<long double>(d) * d);
    return static_cast<double>(sum);
}

inline double hardness_budget(const BanditInstance& inst) { return hardness_budget(gap_profile(inst)); }

// Throws std::invalid_argument describing the first violated invariant.
inline void validate(const BanditInstance& inst) {
    if (inst.arms.empty()) throw std::invalid_argument("instance has no arms");
    for (std::size_t i = 0; i < inst.arms.size(); ++i) {
        const auto& a = inst.arms[i];
        if (!(a.mean >= 0.0 && a.mean <= 1.0) || !std::isfinite(a.residual) ||
            (a.mean == 0.0 && a.residual < 0.0) || (a.mean == 1.0 && a.residual > 0.0))
            throw std::invalid_argument("arm " + std::to_string(i) + " mean outside [0,1]");
    }
    if (!inst.known_delta2 || inst.arms.size() < 2) return;
    const double d2 = gap_profile(inst).delta2();
    const double k = *inst.known_delta2;
    if (inst.delta2_mode == Delta2Mode::exact && k != d2)
        throw std::invalid_argument("known_delta2 differs from the realized gap");
    if (inst.delta2_mode == Delta2Mode::lower_bound && !(k > 0.0 && k <= d2))
        throw std::invalid_argument("lower bound not in (0, delta2]");
}

} // namespace streambandit
