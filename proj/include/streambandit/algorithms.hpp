// algorithms.hpp
#pragma once
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "schedule.hpp"
#include "session.hpp"

namespace streambandit {

// What an algorithm may do to a stream. StreamSession models it; tests wrap
// it to log events independently of the session's own counters.
template <class S>
concept BanditStream = requires(S s, ArmHandle h, std::uint64_t k) {
    { s.arm_count() } -> std::convertible_to<std::size_t>;
    s.begin_pass();
    { s.advance() } -> std::same_as<std::optional<ArmHandle>>;
    s.retain(h);
    s.evict(h);
    { s.pull(h, k) } -> std::convertible_to<std::uint64_t>;
    s.declare_stats(k);
};

template <class S>
concept TranscriptStream = BanditStream<S> && requires(const S s, ArmHandle h) {
    { s.transcript(h) } -> std::convertible_to<ArmRecord>;
};

namespace detail {

// Single-arm instances need no gap knowledge: one pass, return the only arm.
template <BanditStream S>
std::size_t trivial_single_arm(S& s) {
    s.begin_pass();
    while (auto h = s.advance()) {
        s.retain(*h);
        s.evict(*h);
    }
    return 0;
}

} // namespace detail

// Per-pass record of the multi-pass elimination, for verification.
struct EliminationPass {
    std::vector<std::size_t> active;  // I_p in arrival order
    std::vector<double> estimates;    // μ̂^p_i aligned with `active`
    double max_estimate{0.0};
    std::size_t max_index{0};
    std::vector<std::size_t> survivors; // I_{p+1}
};

struct EliminationTrace {
    EliminationSchedule schedule;
    std::vector<EliminationPass> passes;
};

// Multi-pass elimination with known gap (or a lower bound on it).
// Runs exactly P+1 passes over the stream, holds one arm at a time, and tops
// each active arm's cumulative pulls up to T_p so that the level-p estimate
// is taken over a prefix of that arm's reward sequence.
template <TranscriptStream S>
std::size_t stream_elimination(S& s, std::size_t passes, double delta, double delta2,
                               EliminationTrace* trace = nullptr) {
    const std::size_t n = s.arm_count();
    if (n == 1) return detail::trivial_single_arm(s);
    const EliminationSchedule sched = make_schedule(n, passes, delta, delta2);
    if (trace) trace->schedule = sched;

    std::vector<bool> active(n, true);
    std::vector<double> estimate(n, 0.0);
    for (std::size_t p = 0; p <= passes; ++p) {
        const std::uint64_t target = sched.budgets[p];
        EliminationPass rec;
        s.begin_pass();
        while (auto h = s.advance()) {
            if (!active[h->index]) continue;
            s.retain(*h);
            const ArmRecord before = s.transcript(*h);
            if (before.pulls < target) s.pull(*h, target - before.pulls);
            const ArmRecord after = s.transcript(*h);
            estimate[h->index] = static_cast<double>(after.successes) / static_cast<double>(after.pulls);
            s.evict(*h);
            if (trace) {
                rec.active.push_back(h->index);
                rec.estimates.push_back(estimate[h->index]);
            }
        }
        // First maximum in arrival order.
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i] && estimate[i] > best) {
                best = estimate[i];
                best_idx = i;
            }
        }
        const double eps = sched.epsilons[p];
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && estimate[i] < best - eps) active[i] = false;
        if (trace) {
            rec.max_estimate = best;
            rec.max_index = best_idx;
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) rec.survivors.push_back(i);
            trace->passes.push_back(std::move(rec));
        }
    }
    std::optional<std::size_t> winner;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
            ++count;
            winner = i;
        }
    }
    if (count != 1) throw Inconclusive(std::to_string(count) + " arms survived the final pass");
    return *winner;
}

// Statistics-frugal variant: no per-arm state survives a pass. In pass p each
// arriving arm is re-sampled up through levels j = 0..p and compared with the
// stored per-level maxima; the pass that eliminates n-1 arms returns the
// surviving maximizer. Retained words: level maxima 0..p, the candidate index
// and the elimination counter.
template <BanditStream S>
std::size_t stream_elimination_re(S& s, std::size_t passes, double delta, double delta2) {
    const std::size_t n = s.arm_count();
    if (n == 1) return detail::trivial_single_arm(s);
    const EliminationSchedule sched = make_schedule(n, passes, delta, delta2, BudgetRule::rerun_union);

    std::vector<double> level_max;
    level_max.reserve(passes + 1);
    for (std::size_t p = 0; p <= passes; ++p) {
        level_max.push_back(-std::numeric_limits<double>::infinity());
        std::size_t eliminated = 0;
        std::optional<std::size_t> candidate;
        s.declare_stats(level_max.size() + 2);
        s.begin_pass();
        while (auto h = s.advance()) {
            s.retain(*h);
            std::uint64_t pulls = 0;
            std::uint64_t wins = 0;
            double est = 0.0;
            bool dropped = false;
            for (std::size_t j = 0; j <= p; ++j) {
                const std::uint64_t target = sched.budgets[j];
                if (pulls < target) {
                    wins += s.pull(*h, target - pulls);
                    pulls = target;
                }
                est = static_cast<double>(wins) / static_cast<double>(pulls);
                if (est < level_max[j] - sched.epsilons[j]) {
                    ++eliminated;
                    dropped = true;
                    break;
                }
            }
            if (!dropped && level_max[p] < est) {
                level_max[p] = est;
                candidate = h->index;
            }
            s.evict(*h);
        }
        if (eliminated == n - 1 && candidate) return *candidate;
    }
    throw Inconclusive("no pass eliminated n-1 arms");
}

// Single pass keeping a champion: every arm gets t = ceil(8 ln(2n/δ)/Δ²)
// pulls; the champion's estimate is frozen from its own t pulls.
template <BanditStream S>
std::size_t single_pass_keepbest(S& s, double delta, double delta2) {
    const std::size_t n = s.arm_count();
    if (n == 1) return detail::trivial_single_arm(s);
    if (!(delta2 > 0.0)) throw std::domain_error("keepbest: gap must be positive");
    const std::uint64_t t = budget_from_log(delta2, std::log(2.0L * n / static_cast<long double>(delta)));

    std::optional<ArmHandle> champion;
    double champion_mean = -1.0;
    s.begin_pass();
    while (auto h = s.advance()) {
        s.retain(*h);
        const double m = static_cast<double>(s.pull(*h, t)) / static_cast<double>(t);
        if (!champion || m > champion_mean) {
            if (champion) s.evict(*champion);
            champion = *h;
            champion_mean = m;
        } else {
            s.evict(*h);
        }
    }
    const std::size_t out = champion->index;
    s.evict(*champion);
    return out;
}

// Gap-doubling elimination that needs no gap knowledge: pass r uses
// ε_r = 2^{-r}/4 and δ_r = δ/(2r(r+1)), stopping once one arm remains.
template <TranscriptStream S>
std::size_t jhtx_doubling_elimination(S& s, double delta, std::size_t pass_cap) {
    const std::size_t n = s.arm_count();
    if (n == 1) return detail::trivial_single_arm(s);
    if (pass_cap < 1) throw std::invalid_argument("pass cap must be >= 1");

    std::vector<bool> active(n, true);
    std::vector<double> estimate(n, 0.0);
    std::size_t remaining = n;
    for (std::size_t r = 1; r <= pass_cap; ++r) {
        const double eps = std::ldexp(1.0, -static_cast<int>(r)) / 4.0;
        const long double rr = static_cast<long double>(r);
        const std::uint64_t target =
            budget_from_log(eps, std::log(4.0L * n * rr * (rr + 1.0L) / static_cast<long double>(delta)));
        s.begin_pass();
        while (auto h = s.advance()) {
            if (!active[h->index]) continue;
            s.retain(*h);
            const ArmRecord before = s.transcript(*h);
            if (before.pulls < target) s.pull(*h, target - before.pulls);
            const ArmRecord after = s.transcript(*h);
            estimate[h->index] = static_cast<double>(after.successes) / static_cast<double>(after.pulls);
            s.evict(*h);
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && estimate[i] > best) best = estimate[i];
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i] && estimate[i] < best - eps) {
                active[i] = false;
                --remaining;
            }
        }
        if (remaining == 1) {
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) return i;
        }
    }
    throw PassCapExceeded(std::to_string(remaining) + " arms active after " + std::to_string(pass_cap) + " passes");
}

} // namespace streambandit
