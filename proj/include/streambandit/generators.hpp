// generators.hpp
#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

namespace streambandit {

namespace detail {

inline void set_exact_delta2(BanditInstance& inst) {
    inst.delta2_mode = Delta2Mode::exact;
    inst.known_delta2 = inst.size() >= 2 ? std::optional<double>(gap_profile(inst).delta2()) : std::nullopt;
}

} // namespace detail

// n i.i.d. Uniform[0,1] means; a draw that ties the current maximum is redrawn.
inline BanditInstance gen_uniform(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_uniform: n must be >= 2");
    Engine eng = make_engine(seed, hash_label("uniform"));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> means(n);
    for (auto& m : means) m = unif(eng);
    for (;;) {
        const double top = *std::max_element(means.begin(), means.end());
        const auto ties = std::count(means.begin(), means.end(), top);
        if (ties == 1) break;
        // keep the first maximizer, redraw the rest
        bool first = true;
        for (auto& m : means) {
            if (m != top) continue;
            if (first) {
                first = false;
                continue;
            }
            m = unif(eng);
        }
    }
    auto inst = BanditInstance::from_means(means, "uniform n=" + std::to_string(n));
    detail::set_exact_delta2(inst);
    return inst;
}

// Means lo + k(hi-lo)/(n-1), k = 0..n-1, shuffled into arrival order.
inline BanditInstance gen_arithmetic(std::size_t n, double lo, double hi, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_arithmetic: n must be >= 2");
    if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw std::invalid_argument("gen_arithmetic: need 0 <= lo < hi <= 1");
    std::vector<double> means(n);
    for (std::size_t k = 0; k < n; ++k)
        means[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    means.back() = hi;
    Engine eng = make_engine(seed, hash_label("arithmetic"));
    std::shuffle(means.begin(), means.end(), eng);
    auto inst = BanditInstance::from_means(means, "arithmetic n=" + std::to_string(n));
    detail::set_exact_delta2(inst);
    return inst;
}

struct ClusterParams {
    double best{0.9};
    double c1{0.899};
    double c2{0.898};
};

// One arm at `best`, the rest split between c1 (gets the odd arm) and c2.
inline BanditInstance gen_cluster(std::size_t n, ClusterParams p, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("gen_cluster: n must be >= 3");
    if (!(1.0 > p.best && p.best > p.c1 && p.c1 > p.c2 && p.c2 >= 0.0))
        throw std::invalid_argument("gen_cluster: need 1 > best > c1 > c2 >= 0");
    const std::size_t rest = n - 1;
    const std::size_t n1 = rest - rest / 2;
    std::vector<double> means;
    means.reserve(n);
    means.push_back(p.best);
    means.insert(means.end(), n1, p.c1);
    means.insert(means.end(), rest - n1, p.c2);
    Engine eng = make_engine(seed, hash_label("cluster"));
    std::shuffle(means.begin(), means.end(), eng);
    auto inst = BanditInstance::from_means(means, "cluster n=" + std::to_string(n));
    detail::set_exact_delta2(inst);
    return inst;
}

// ---------------------------------------------------------------------------
// Batched lower-bound family with two planted arms per batch.

struct HardInstanceParams {
    std::size_t n{0};
    std::size_t batches{2}; // B; there are B+1 batches
    std::size_t c{1};       // C
    double gamma{0.0};
    static constexpr int log_base = 2;

    // Midpoint of the admissible gamma bracket.
    static double default_gamma(std::size_t n) { return 3.0 / (40.0 * std::cbrt(static_cast<double>(n))); }
};

struct HardInstanceMeta {
    HardInstanceParams params;
    double gamma{0.0};                     // as realized (on the 2^-53 grid)
    std::vector<double> chi;               // χ_1..χ_{B+1}
    std::vector<int> theta;                // Θ_1..Θ_{B+1}
    std::vector<std::pair<std::size_t, std::size_t>> special_positions; // per batch, lower then higher
    std::vector<std::pair<std::size_t, std::size_t>> batch_bounds;      // per batch, [begin, end)
};

namespace detail {

inline double snap_to_half_ulp_grid(double x) { return std::ldexp(std::nearbyint(std::ldexp(x, 53)), -53); }

} // namespace detail

// χ_1 = n^{1/3}γ, χ_{b+1} = (12 C log2 n)^{-15} χ_b. γ and χ_1 are rounded to
// multiples of 2^-53 so that 1/2 + χ_1 + γ is exact in double; deeper χ_b fall
// below that grid and live in RewardDistribution::residual.
inline std::vector<double> hard_chi_sequence(const HardInstanceParams& p, double gamma) {
    const long double factor =
        std::pow(1.0L / (12.0L * p.c * std::log2(static_cast<long double>(p.n))), 15.0L);
    std::vector<double> chi;
    chi.reserve(p.batches + 1);
    chi.push_back(detail::snap_to_half_ulp_grid(std::cbrt(static_cast<double>(p.n)) * gamma));
    for (std::size_t b = 1; b <= p.batches; ++b) {
        const double next = static_cast<double>(factor * chi.back());
        if (!(next >= 1e-300))
            throw std::domain_error("chi_" + std::to_string(b + 1) + " underflows the double range");
        chi.push_back(next);
    }
    return chi;
}

inline void validate(const HardInstanceParams& p) {
    if (p.batches < 1) throw std::domain_error("hard instance: B must be >= 1");
    if (p.c < 1) throw std::domain_error("hard instance: C must be >= 1");
    if (p.n < 2 * (p.batches + 1) || p.n % (p.batches + 1) != 0)
        throw std::domain_error("hard instance: n must be a multiple of B+1 with at least two arms per batch");
    const double root = std::cbrt(static_cast<double>(p.n));
    if (!(p.gamma >= 1.0 / (20.0 * root) && p.gamma <= 1.0 / (10.0 * root)))
        throw std::domain_error("hard instance: gamma outside [1/(20 n^{1/3}), 1/(10 n^{1/3})]");
}

inline std::pair<BanditInstance, HardInstanceMeta> gen_hard_batched(const HardInstanceParams& params,
                                                                    std::uint64_t seed) {
    validate(params);
    HardInstanceMeta meta;
    meta.params = params;
    meta.gamma = detail::snap_to_half_ulp_grid(params.gamma);
    meta.chi = hard_chi_sequence(params, meta.gamma);

    const std::size_t nb = params.batches + 1;
    const std::size_t k = params.n / nb;
    Engine eng = make_engine(seed, hash_label("hard-batched"));
    std::bernoulli_distribution coin(1.0 / (2.0 * static_cast<double>(params.batches)));

    BanditInstance inst;
    inst.arms.assign(params.n, RewardDistribution{0.5, 0.0});
    meta.theta.resize(nb);
    meta.special_positions.resize(nb);
    meta.batch_bounds.resize(nb);
    for (std::size_t b = 1; b <= nb; ++b) {
        // batch B+1 arrives first, batch 1 last
        const std::size_t begin = (nb - b) * k;
        meta.batch_bounds[b - 1] = {begin, begin + k};
        std::vector<std::size_t> offsets(k);
        std::iota(offsets.begin(), offsets.end(), std::size_t{0});
        // partial Fisher-Yates for two distinct positions
        for (std::size_t t = 0; t < 2; ++t) {
            std::uniform_int_distribution<std::size_t> pick(t, k - 1);
            std::swap(offsets[t], offsets[pick(eng)]);
        }
        const std::size_t lo = begin + std::min(offsets[0], offsets[1]);
        const std::size_t hi = begin + std::max(offsets[0], offsets[1]);
        meta.special_positions[b - 1] = {lo, hi};
        const int fired = b == nb ? 1 : (coin(eng) ? 1 : 0);
        meta.theta[b - 1] = fired;
        if (fired) {
            const double x = meta.chi[b - 1];
            inst.arms[lo] = RewardDistribution::from_sum(0.5, x);
            inst.arms[hi] = RewardDistribution::from_sum(0.5 + meta.gamma, x);
        }
    }
    inst.known_delta2 = meta.gamma;
    inst.delta2_mode = Delta2Mode::exact;
    inst.label = "hard n=" + std::to_string(params.n) + " B=" + std::to_string(params.batches) +
                 " C=" + std::to_string(params.c);
    return {std::move(inst), std::move(meta)};
}

} // namespace streambandit
