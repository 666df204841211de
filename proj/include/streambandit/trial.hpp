// trial.hpp
#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "algorithms.hpp"
#include "instance.hpp"
#include "rng.hpp"
#include "session.hpp"

namespace streambandit {

enum class AlgorithmKind { alg1, alg2, keepbest, jhtx };
enum class Delta2Source { exact, lower_bound, none };

inline std::string to_string(AlgorithmKind k) {
    switch (k) {
    case AlgorithmKind::alg1: return "alg1";
    case AlgorithmKind::alg2: return "alg2";
    case AlgorithmKind::keepbest: return "keepbest";
    case AlgorithmKind::jhtx: return "jhtx";
    }
    return "?";
}

inline AlgorithmKind parse_algorithm(const std::string& s) {
    if (s == "alg1") return AlgorithmKind::alg1;
    if (s == "alg2") return AlgorithmKind::alg2;
    if (s == "keepbest") return AlgorithmKind::keepbest;
    if (s == "jhtx") return AlgorithmKind::jhtx;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

inline std::string to_string(Delta2Source d) {
    switch (d) {
    case Delta2Source::exact: return "exact";
    case Delta2Source::lower_bound: return "lower_bound";
    case Delta2Source::none: return "none";
    }
    return "?";
}

inline Delta2Source parse_delta2_source(const std::string& s) {
    if (s == "exact") return Delta2Source::exact;
    if (s == "lower_bound") return Delta2Source::lower_bound;
    if (s == "none") return Delta2Source::none;
    throw std::invalid_argument("unknown delta2 source '" + s + "'");
}

struct AlgorithmConfig {
    AlgorithmKind algorithm{AlgorithmKind::alg1};
    std::optional<std::size_t> passes; // P; defaults to ceil(log2 n)
    double delta{0.05};
    Delta2Source delta2_source{Delta2Source::exact};
    std::optional<std::size_t> pass_cap; // jhtx only; defaults to 64

    static AlgorithmConfig of(AlgorithmKind k, std::optional<std::size_t> passes = std::nullopt, double delta = 0.05) {
        AlgorithmConfig c;
        c.algorithm = k;
        c.passes = passes;
        c.delta = delta;
        c.delta2_source = k == AlgorithmKind::jhtx ? Delta2Source::none : Delta2Source::exact;
        return c;
    }

    bool needs_delta2() const { return algorithm != AlgorithmKind::jhtx; }

    std::size_t resolved_passes(std::size_t n) const {
        if (passes) return *passes;
        std::size_t p = 0;
        while ((std::size_t{1} << p) < n) ++p;
        return p < 1 ? 1 : p;
    }

    // Stable identifier; also keys the session's random stream.
    std::string label() const {
        std::string s = to_string(algorithm);
        if (passes && (algorithm == AlgorithmKind::alg1 || algorithm == AlgorithmKind::alg2))
            s += "/P=" + std::to_string(*passes);
        if (delta2_source == Delta2Source::lower_bound) s += "/lb";
        return s;
    }

    friend bool operator==(const AlgorithmConfig&, const AlgorithmConfig&) = default;
};

struct TrialResult {
    std::optional<std::size_t> returned_arm;
    bool correct{false};
    std::uint64_t total_pulls{0};
    std::uint64_t passes_used{0};
    std::uint64_t peak_arm_memory{0};
    std::optional<std::uint64_t> peak_stats_words; // nullopt: statistics not charged
    std::uint64_t seed{0};
    std::string algorithm;
    std::optional<std::string> failure_reason;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

// Everything the harness saw that TrialResult does not carry.
struct TrialDetail {
    std::vector<std::uint64_t> per_arm_pulls;
    EliminationTrace trace; // filled for alg1 only
    std::size_t passes{0};  // resolved P
};

inline void check_config(const BanditInstance& inst, const AlgorithmConfig& cfg) {
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (cfg.passes && *cfg.passes < 1) throw std::invalid_argument("P must be >= 1");
    if (!cfg.needs_delta2() || inst.size() == 1) return;
    if (cfg.delta2_source == Delta2Source::none)
        throw std::invalid_argument(to_string(cfg.algorithm) + " needs a gap value");
    if (!inst.known_delta2) throw std::invalid_argument("instance carries no known_delta2");
    if (cfg.delta2_source == Delta2Source::exact && inst.delta2_mode != Delta2Mode::exact)
        throw std::invalid_argument("exact gap requested but the instance only has a lower bound");
}

// Runs one algorithm on one instance. Same (instance, config, seed) gives the
// same result; streaming-model violations and inconclusive runs come back as
// failed trials rather than exceptions.
inline TrialResult run_trial(const BanditInstance& inst, const AlgorithmConfig& cfg, std::uint64_t seed,
                             TrialDetail* detail = nullptr) {
    check_config(inst, cfg);
    const GapProfile truth = gap_profile(inst);
    const std::size_t n = inst.size();
    const std::size_t passes = cfg.resolved_passes(n);
    const double d2 = inst.known_delta2.value_or(0.0);
    const StatsMode mode = cfg.algorithm == AlgorithmKind::alg2 ? StatsMode::bounded : StatsMode::free_transcript;

    StreamSession session(inst, derive_seed(seed, hash_label(cfg.label())), mode);
    TrialResult r;
    r.seed = seed;
    r.algorithm = cfg.label();
    try {
        std::size_t out = 0;
        switch (cfg.algorithm) {
        case AlgorithmKind::alg1:
            out = stream_elimination(session, passes, cfg.delta, d2, detail ? &detail->trace : nullptr);
            break;
        case AlgorithmKind::alg2:
            out = stream_elimination_re(session, passes, cfg.delta, d2);
            break;
        case AlgorithmKind::keepbest:
            out = single_pass_keepbest(session, cfg.delta, d2);
            break;
        case AlgorithmKind::jhtx:
            out = jhtx_doubling_elimination(session, cfg.delta, cfg.pass_cap.value_or(64));
            break;
        }
        r.returned_arm = out;
        r.correct = out == truth.best_index;
    } catch (const Inconclusive& e) {
        r.failure_reason = e.what();
    } catch (const PassCapExceeded& e) {
        r.failure_reason = e.what();
    } catch (const IllegalAccess& e) {
        r.failure_reason = e.what();
    } catch (const BudgetOverflow& e) {
        r.failure_reason = e.what();
    }
    session.close();

    r.total_pulls = session.pull_count();
    r.passes_used = session.passes_used();
    r.peak_arm_memory = session.peak_memory();
    r.peak_stats_words = session.peak_stats_words();

    const std::uint64_t memory_cap = cfg.algorithm == AlgorithmKind::keepbest ? 2 : 1;
    if (r.peak_arm_memory > memory_cap) {
        r.failure_reason = "arm memory " + std::to_string(r.peak_arm_memory) + " exceeds " + std::to_string(memory_cap);
        r.correct = false;
    }
    if (r.peak_stats_words && *r.peak_stats_words > passes + 3) {
        r.failure_reason = "statistics words exceed P+3";
        r.correct = false;
    }
    if (detail) {
        detail->per_arm_pulls = session.per_arm_pulls();
        detail->passes = passes;
    }
    return r;
}

} // namespace streambandit
