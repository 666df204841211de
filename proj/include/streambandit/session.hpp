// session.hpp
#pragma once
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "instance.hpp"
#include "rng.hpp"

namespace streambandit {

// Storing an arm means holding its index plus the right to pull it.
struct ArmHandle {
    std::size_t index;
    friend bool operator==(ArmHandle, ArmHandle) = default;
};

// free_transcript: every pull outcome is kept (as per-arm sufficient
// statistics) and may be queried at no charge.
// bounded: no transcript; the algorithm declares the words it retains.
enum class StatsMode { free_transcript, bounded };

// batched draws Binomial(count, mean) once per pull call; per_draw sums
// `count` Bernoulli draws and exists as a reference for the batched path.
enum class SamplingPath { batched, per_draw };

struct ArmRecord {
    std::uint64_t pulls{0};
    std::uint64_t successes{0};
};

// The streaming access model, enforced and metered. Arms arrive in the
// instance's fixed order on every pass; pulls are legal only on the arriving
// arm or on stored arms. Each arm draws from its own generator seeded by
// (session seed, arm index), so an arm's reward sequence does not depend on
// how other arms were pulled.
class StreamSession {
public:
    StreamSession(const BanditInstance& instance, std::uint64_t seed,
                  StatsMode mode = StatsMode::free_transcript,
                  SamplingPath path = SamplingPath::batched)
        : instance_(&instance), mode_(mode), path_(path),
          records_(instance.size()), stored_(instance.size(), false) {
        engines_.reserve(instance.size());
        for (std::size_t i = 0; i < instance.size(); ++i) engines_.push_back(make_engine(seed, i));
    }

    std::size_t arm_count() const noexcept { return instance_->size(); }
    StatsMode stats_mode() const noexcept { return mode_; }

    void begin_pass() {
        ensure_open();
        ++passes_;
        in_pass_ = true;
        cursor_ = 0;
        arriving_.reset();
    }

    // Next arriving arm, or nullopt once the pass is exhausted.
    std::optional<ArmHandle> advance() {
        ensure_open();
        if (!in_pass_) throw IllegalAccess("advance outside a pass");
        if (cursor_ >= arm_count()) {
            arriving_.reset();
            in_pass_ = false;
            return std::nullopt;
        }
        arriving_ = ArmHandle{cursor_++};
        return arriving_;
    }

    void retain(ArmHandle h) {
        ensure_open();
        if (!arriving_ || !(*arriving_ == h))
            throw IllegalAccess("retain of non-arriving arm " + std::to_string(h.index));
        if (!stored_[h.index]) {
            stored_[h.index] = true;
            ++memory_size_;
            peak_memory_ = std::max(peak_memory_, memory_size_);
        }
    }

    void evict(ArmHandle h) {
        ensure_open();
        if (h.index >= arm_count() || !stored_[h.index])
            throw IllegalAccess("evict of unstored arm " + std::to_string(h.index));
        stored_[h.index] = false;
        --memory_size_;
    }

    // Pulls `count` times, returns the number of unit rewards.
    std::uint64_t pull(ArmHandle h, std::uint64_t count) {
        ensure_open();
        if (count == 0) throw std::invalid_argument("pull count must be positive");
        if (!may_pull(h)) throw IllegalAccess("pull of arm " + std::to_string(h.index) +
                                              " that is neither arriving nor stored");
        if (count > std::numeric_limits<std::uint64_t>::max() - pull_count_)
            throw BudgetOverflow("total pull counter overflow");
        const std::uint64_t wins = draw(h.index, count);
        auto& rec = records_[h.index];
        rec.pulls += count;
        rec.successes += wins;
        pull_count_ += count;
        return wins;
    }

    // Cumulative (pulls, successes) of an arm. Free-transcript mode only.
    ArmRecord transcript(ArmHandle h) const {
        ensure_open();
        if (mode_ != StatsMode::free_transcript) throw IllegalAccess("transcript query in bounded mode");
        return records_.at(h.index);
    }

    void declare_stats(std::uint64_t words) {
        ensure_open();
        if (mode_ != StatsMode::bounded) return;
        stats_words_ = words;
        peak_stats_words_ = std::max(peak_stats_words_, words);
    }

    void close() noexcept { closed_ = true; }
    bool closed() const noexcept { return closed_; }

    std::uint64_t pull_count() const noexcept { return pull_count_; }
    std::uint64_t arm_pulls(std::size_t i) const { return records_.at(i).pulls; }
    std::vector<std::uint64_t> per_arm_pulls() const {
        std::vector<std::uint64_t> out(records_.size());
        std::transform(records_.begin(), records_.end(), out.begin(), [](const ArmRecord& r) { return r.pulls; });
        return out;
    }
    std::size_t memory_size() const noexcept { return memory_size_; }
    std::size_t peak_memory() const noexcept { return peak_memory_; }
    std::uint64_t passes_used() const noexcept { return passes_; }
    std::uint64_t stats_words() const noexcept { return stats_words_; }
    // nullopt in free-transcript mode: statistics are not charged there.
    std::optional<std::uint64_t> peak_stats_words() const noexcept {
        if (mode_ != StatsMode::bounded) return std::nullopt;
        return peak_stats_words_;
    }

private:
    void ensure_open() const {
        if (closed_) throw SessionClosed();
    }

    bool may_pull(ArmHandle h) const {
        if (h.index >= arm_count()) return false;
        return stored_[h.index] || (arriving_ && *arriving_ == h);
    }

    std::uint64_t draw(std::size_t arm, std::uint64_t count) {
        const double p = instance_->arms[arm].mean;
        if (p <= 0.0) return 0;
        if (p >= 1.0) return count;
        auto& eng = engines_[arm];
        if (path_ == SamplingPath::per_draw) {
            std::bernoulli_distribution coin(p);
            std::uint64_t wins = 0;
            for (std::uint64_t k = 0; k < count; ++k) wins += coin(eng) ? 1 : 0;
            return wins;
        }
        std::binomial_distribution<std::uint64_t> binom(count, p);
        return binom(eng);
    }

    const BanditInstance* instance_;
    StatsMode mode_;
    SamplingPath path_;
    std::vector<Engine> engines_;
    std::vector<ArmRecord> records_;
    std::vector<bool> stored_;
    std::optional<ArmHandle> arriving_;
    std::size_t cursor_{0};
    bool in_pass_{false};
    bool closed_{false};
    std::uint64_t passes_{0};
    std::uint64_t pull_count_{0};
    std::size_t memory_size_{0};
    std::size_t peak_memory_{0};
    std::uint64_t stats_words_{0};
    std::uint64_t peak_stats_words_{0};
};

} // namespace streambandit
