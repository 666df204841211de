// Instance families and the batched lower-bound construction.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/oracles.hpp"

using namespace streambandit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> means_of(const BanditInstance& inst) {
    std::vector<double> m;
    for (const auto& a : inst.arms) m.push_back(a.mean);
    return m;
}

} // namespace

TEST_CASE("uniform family", "[generators]") {
    const auto inst = gen_uniform(100, 4);
    const auto m = means_of(inst);
    for (double x : m) CHECK((x >= 0.0 && x <= 1.0));
    auto sorted = m;
    std::sort(sorted.rbegin(), sorted.rend());
    CHECK(*inst.known_delta2 == sorted[0] - sorted[1]);
    CHECK(inst.delta2_mode == Delta2Mode::exact);
    CHECK_NOTHROW(validate(inst));
    CHECK(means_of(gen_uniform(100, 4)) == m);
    CHECK(means_of(gen_uniform(100, 5)) != m);
    CHECK_THROWS_AS(gen_uniform(1, 0), std::invalid_argument);
}

TEST_CASE("expected maximum of 100 uniforms", "[generators]") {
    double sum = 0.0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        const auto inst = gen_uniform(100, r);
        sum += inst.arms[gap_profile(inst).best_index].mean;
    }
    CHECK_THAT(sum / reps, WithinAbs(100.0 / 101.0, 0.003));
}

TEST_CASE("arithmetic family", "[generators]") {
    auto m = means_of(gen_arithmetic(3, 0.0, 1.0, 9));
    std::sort(m.begin(), m.end());
    CHECK(m == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(*gen_arithmetic(3, 0.0, 1.0, 9).known_delta2 == 0.5);

    const std::size_t n = 200;
    const double lo = 0.1, hi = 0.9, step = (hi - lo) / (n - 1);
    const auto inst = gen_arithmetic(n, lo, hi, 2);
    const auto g = gap_profile(inst);
    for (std::size_t i = 0; i < g.sorted_gaps.size(); ++i)
        CHECK_THAT(g.sorted_gaps[i], WithinAbs((i + 1) * step, 1e-14));
    CHECK_THAT(*inst.known_delta2, WithinRel(step, 1e-12));

    double zeta = 0.0;
    for (std::size_t k = 1; k < n; ++k) zeta += 1.0 / (double(k) * double(k));
    const double expected = std::pow((n - 1) / (hi - lo), 2) * zeta;
    CHECK_THAT(hardness_budget(inst), WithinRel(expected, 1e-10));
    CHECK_THROWS_AS(gen_arithmetic(5, 0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("cluster family", "[generators]") {
    const auto inst = gen_cluster(5, {}, 3);
    auto g = gap_profile(inst).sorted_gaps;
    REQUIRE(g.size() == 4);
    CHECK_THAT(g[0], WithinAbs(0.001, 1e-12));
    CHECK_THAT(g[1], WithinAbs(0.001, 1e-12));
    CHECK_THAT(g[2], WithinAbs(0.002, 1e-12));
    CHECK_THAT(g[3], WithinAbs(0.002, 1e-12));
    CHECK(*inst.known_delta2 == 0.9 - 0.899);

    const auto desk = gen_cluster(200, {0.9, 0.88, 0.86}, 1);
    const auto m = means_of(desk);
    CHECK(std::count(m.begin(), m.end(), 0.88) == 100);
    CHECK(std::count(m.begin(), m.end(), 0.86) == 99);
    double scan = 0.0;
    for (double x : m)
        if (x != 0.9) scan += 1.0 / ((0.9 - x) * (0.9 - x));
    CHECK_THAT(hardness_budget(desk), WithinRel(scan, 1e-12));
    CHECK_THAT(hardness_budget(desk), WithinRel(100 / (0.02 * 0.02) + 99 / (0.04 * 0.04), 1e-9));
    CHECK_THROWS_AS(gen_cluster(2, {}, 0), std::invalid_argument);
}

TEST_CASE("hard family structure", "[generators][hard]") {
    HardInstanceParams p{120, 2, 1, HardInstanceParams::default_gamma(120)};
    const auto [inst, meta] = gen_hard_batched(p, 17);
    CHECK(inst.size() == 120);
    CHECK(meta.theta.back() == 1);
    CHECK(meta.batch_bounds.back() == std::pair<std::size_t, std::size_t>{0, 40});
    CHECK(meta.chi.size() == 3);
    for (std::size_t b = 0; b + 1 < meta.chi.size(); ++b) CHECK(meta.chi[b + 1] < meta.chi[b]);
    for (std::size_t b = 0; b < meta.special_positions.size(); ++b) {
        const auto [lo, hi] = meta.special_positions[b];
        const auto [begin, end] = meta.batch_bounds[b];
        CHECK(lo < hi);
        CHECK((lo >= begin && hi < end));
    }
    // only the planted arms leave 1/2
    std::size_t above = 0;
    for (const auto& a : inst.arms) {
        CHECK((a.mean >= 0.0 && a.mean <= 1.0));
        if (mean_less(RewardDistribution{0.5, 0.0}, a)) ++above;
    }
    std::size_t fired = 0;
    for (int t : meta.theta) fired += t;
    CHECK(above == 2 * fired);
    // the first batch to arrive holds batch B+1's specials
    const auto [lo, hi] = meta.special_positions.back();
    CHECK(hi < 40);
    CHECK(inst.arms[hi] == RewardDistribution::from_sum(0.5 + meta.gamma, meta.chi.back()));
    CHECK(inst.arms[lo] == RewardDistribution::from_sum(0.5, meta.chi.back()));
}

TEST_CASE("hard family with no coin fired has two arms above 1/2", "[generators][hard]") {
    HardInstanceParams p{120, 2, 1, HardInstanceParams::default_gamma(120)};
    bool seen = false;
    for (std::uint64_t seed = 0; seed < 200 && !seen; ++seed) {
        const auto [inst, meta] = gen_hard_batched(p, seed);
        if (meta.theta[0] || meta.theta[1]) continue;
        seen = true;
        std::size_t above = 0;
        for (const auto& a : inst.arms)
            if (mean_less(RewardDistribution{0.5, 0.0}, a)) ++above;
        CHECK(above == 2);
        CHECK(gap_profile(inst).delta2() == meta.gamma);
    }
    CHECK(seen);
}

TEST_CASE("hard family coin frequency", "[generators][hard]") {
    HardInstanceParams p{120, 2, 1, HardInstanceParams::default_gamma(120)};
    int fired = 0;
    const int reps = 5000;
    for (int s = 0; s < reps; ++s) fired += gen_hard_batched(p, s).second.theta[0];
    CHECK_THAT(double(fired) / reps, WithinAbs(0.25, 0.02));
}

TEST_CASE("hard family gap when batch 1 fires", "[generators][hard]") {
    // With Θ_1 = 1 the top two arms are batch 1's specials, so Δ[2] = γ.
    HardInstanceParams p{600, 3, 1, HardInstanceParams::default_gamma(600)};
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto [inst, meta] = gen_hard_batched(p, seed);
        if (!meta.theta[0]) continue;
        ++checked;
        CHECK(gap_profile(inst).delta2() == meta.gamma);
    }
    CHECK(checked > 0);
}

TEST_CASE("hard family parameter checks", "[generators][hard]") {
    const double g = HardInstanceParams::default_gamma(120);
    CHECK_THROWS_AS(gen_hard_batched({121, 2, 1, g}, 0), std::domain_error);
    CHECK_THROWS_AS(gen_hard_batched({120, 0, 1, g}, 0), std::domain_error);
    CHECK_THROWS_AS(gen_hard_batched({120, 2, 1, 0.5}, 0), std::domain_error);
    CHECK_THROWS_AS(gen_hard_batched({120, 2, 1, 1e-4}, 0), std::domain_error);
    // χ underflow: many batches drive χ_b below 1e-300
    CHECK_THROWS_AS(gen_hard_batched({1200, 23, 1, HardInstanceParams::default_gamma(1200)}, 0), std::domain_error);
}

TEST_CASE("chi to gamma ratio at the accepted grid", "[generators][hard]") {
    // χ_1/γ = n^{1/3} >= n^{1/5}; deeper χ_b fall far below γ at these sizes.
    for (std::size_t n : {120u, 600u}) {
        for (std::size_t B : {2u, 3u}) {
            const double g = HardInstanceParams::default_gamma(n);
            const auto chi = hard_chi_sequence({n, B, 1, g}, g);
            CHECK(chi[0] / g >= std::pow(double(n), 0.2));
            CHECK(chi[1] / g < std::pow(double(n), 0.2));
        }
    }
}
