// JSON formats, trial batteries, aggregation and CSV output.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "support/oracles.hpp"

using namespace streambandit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("instance JSON round-trips bit-exactly", "[json]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = gen_uniform(50, seed);
        const auto back = instance_from_string(instance_to_json(inst));
        REQUIRE(back.size() == inst.size());
        for (std::size_t i = 0; i < inst.size(); ++i) CHECK(back.arms[i] == inst.arms[i]);
        CHECK(back.known_delta2 == inst.known_delta2);
        CHECK(back.label == inst.label);
    }
    const auto [hard, meta] = gen_hard_batched({120, 2, 1, HardInstanceParams::default_gamma(120)}, 3);
    const auto text = instance_to_json(hard);
    CHECK(text.find("mean_residuals") != std::string::npos);
    const auto back = instance_from_string(text);
    for (std::size_t i = 0; i < hard.size(); ++i) CHECK(back.arms[i] == hard.arms[i]);
    CHECK(gap_profile(back).delta2() == meta.gamma);

    auto lb = gen_arithmetic(10, 0.0, 1.0, 1);
    lb.known_delta2.reset();
    const auto lb_back = instance_from_string(instance_to_json(lb));
    CHECK_FALSE(lb_back.known_delta2.has_value());
    CHECK(instance_to_json(lb).find("\"known_delta2\": null") != std::string::npos);
}

TEST_CASE("instance JSON rejects malformed input", "[json]") {
    CHECK_THROWS(instance_from_string("{\"means\": []}"));
    CHECK_THROWS(instance_from_string("{\"label\": \"x\"}"));
    CHECK_THROWS(instance_from_string("{\"means\": [0.5], \"delta2_mode\": \"guess\"}"));
    CHECK_THROWS_AS(load_instance("/nonexistent/inst.json"), std::runtime_error);
}

TEST_CASE("algorithm config JSON", "[json]") {
    auto cfg = AlgorithmConfig::of(AlgorithmKind::alg2, 7, 0.1);
    const auto j = to_json(cfg);
    CHECK(j.at("algorithm") == "alg2");
    CHECK(j.at("P") == 7);
    CHECK(j.at("pass_cap").is_null());
    CHECK(config_from_json(j) == cfg);
    const auto jh = config_from_json(json::parse(R"({"algorithm":"jhtx","P":null,"delta":0.05,
        "delta2_source":"none","pass_cap":12})"));
    CHECK(jh.pass_cap == std::optional<std::size_t>(12));
    CHECK(jh.delta2_source == Delta2Source::none);
}

TEST_CASE("trial result JSON line", "[json]") {
    const auto r = run_trial(gen_uniform(20, 1), AlgorithmConfig::of(AlgorithmKind::alg2, 3), 4);
    const auto j = to_json(r);
    CHECK(j.at("total_pulls") == r.total_pulls);
    CHECK(j.at("peak_stats_words") == *r.peak_stats_words);
    const auto r1 = run_trial(gen_uniform(20, 1), AlgorithmConfig::of(AlgorithmKind::alg1, 3), 4);
    CHECK(to_json(r1).at("peak_stats_words") == "unbounded");
}

TEST_CASE("hard instance meta JSON", "[json]") {
    const auto [inst, meta] = gen_hard_batched({120, 2, 1, HardInstanceParams::default_gamma(120)}, 8);
    const auto j = to_json(meta);
    CHECK(j.at("theta").size() == 3);
    CHECK(j.at("theta")[2] == 1);
    CHECK(j.at("log_base") == 2);
    CHECK(j.at("batch_bounds")[2][0] == 0);
}

// ---------------------------------------------------------------------------

namespace {

TrialRecord record(std::size_t trial, const std::string& alg, std::uint64_t pulls, std::uint64_t passes, bool ok) {
    TrialRecord r;
    r.trial = trial;
    r.result.algorithm = alg;
    r.result.total_pulls = pulls;
    r.result.passes_used = passes;
    r.result.correct = ok;
    r.result.peak_arm_memory = 1;
    r.result.seed = trial;
    if (ok) r.result.returned_arm = 0;
    return r;
}

ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.family.family = "uniform";
    s.family.n = 40;
    s.algorithms = {AlgorithmConfig::of(AlgorithmKind::alg1, 6), AlgorithmConfig::of(AlgorithmKind::jhtx),
                    AlgorithmConfig::of(AlgorithmKind::keepbest)};
    s.trials = 5;
    s.base_seed = 100;
    return s;
}

} // namespace

TEST_CASE("aggregate by hand", "[bench]") {
    const auto one = aggregate({record(0, "a", 42, 3, true)});
    CHECK(one.rows.size() == 1);
    CHECK(one.at("a").mean_samples == 42.0);
    CHECK(one.at("a").samples_ci95 == 0.0);
    CHECK(one.at("a").passes_ci95 == 0.0);

    const auto two = aggregate({record(0, "a", 10, 2, true), record(1, "a", 30, 4, false), record(0, "b", 5, 1, true)});
    const auto& a = two.at("a");
    CHECK(a.mean_samples == 20.0);
    CHECK(a.mean_passes == 3.0);
    CHECK(a.success_rate == 0.5);
    CHECK(a.mean_peak_memory == 1.0);
    // sd = sqrt(((10-20)^2 + (30-20)^2)/1) = sqrt(200)
    CHECK_THAT(a.samples_ci95, WithinRel(1.96 * std::sqrt(200.0) / std::sqrt(2.0), 1e-15));
    CHECK(two.rows[0].algorithm == "a");
    CHECK(two.rows[1].algorithm == "b");
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("battery of one trial on one arm", "[bench]") {
    ExperimentSpec s;
    s.instance = BanditInstance::from_means({0.4});
    s.algorithms = {AlgorithmConfig::of(AlgorithmKind::alg1)};
    s.trials = 1;
    const auto out = run_experiment(s);
    REQUIRE(out.size() == 1);
    CHECK(out[0].result.correct);
}

TEST_CASE("batteries are deterministic and independent of the job count", "[bench]") {
    const auto spec = small_spec();
    const auto a = run_experiment(spec, 1);
    const auto b = run_experiment(spec, 1);
    const auto c = run_experiment(spec, 3);
    CHECK(a == b);
    CHECK(a == c);
    REQUIRE(a.size() == 15);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].trial == k / 3);
        CHECK(a[k].result.seed == 100 + k / 3);
        CHECK(a[k].result.algorithm == spec.algorithms[k % 3].label());
    }
}

TEST_CASE("instance sharing within a trial", "[bench]") {
    auto spec = small_spec();
    CHECK(experiment_instance(spec, 0).arms == experiment_instance(spec, 4).arms);
    spec.resample_instance = true;
    CHECK(experiment_instance(spec, 0).arms != experiment_instance(spec, 4).arms);
    CHECK(experiment_instance(spec, 2).arms == experiment_instance(spec, 2).arms);
    spec.gap_factor = 0.25;
    const auto lb = experiment_instance(spec, 1);
    CHECK(lb.delta2_mode == Delta2Mode::lower_bound);
    CHECK(*lb.known_delta2 == 0.25 * gap_profile(lb).delta2());
}

TEST_CASE("invalid experiment specs", "[bench]") {
    auto spec = small_spec();
    spec.trials = 0;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
    spec = small_spec();
    spec.algorithms[0].delta2_source = Delta2Source::none;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
    spec = small_spec();
    spec.family.family = "zipf";
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("results CSV", "[bench][csv]") {
    CHECK(results_to_csv({}) == std::string(results_csv_header) + "\n");
    const auto recs = run_experiment(small_spec());
    const auto back = parse_results_csv(results_to_csv(recs));
    REQUIRE(back.size() == recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) {
        auto expect = recs[k];
        expect.result.failure_reason.reset();
        CHECK(back[k] == expect);
    }
    CHECK(results_to_csv(recs).find("unbounded") != std::string::npos);

    TrialRecord failed = record(3, "x", 7, 2, false);
    failed.result.peak_stats_words = 4;
    const auto one = parse_results_csv(results_to_csv({failed}));
    CHECK(one[0] == failed);
    CHECK_FALSE(one[0].result.returned_arm.has_value());
}

TEST_CASE("summary and plot CSV", "[bench][csv]") {
    const auto s = aggregate({record(0, "alg1", 1180000000, 9, true)});
    const auto text = summary_to_csv(s);
    CHECK(text.rfind("algorithm,mean_samples,samples_ci95,mean_passes,success_rate", 0) == 0);
    CHECK(text.find("alg1,1180000000,0,9,1,") != std::string::npos);

    CHECK_THAT(log10_samples(1180000000), WithinAbs(9.0719, 1e-3));
    const auto plot = plot_data_to_csv({record(0, "alg1", 1180000000, 9, true)});
    CHECK(plot.find("0,alg1,1180000000,9.071882,9") != std::string::npos);
    CHECK(plot_data_to_csv({}) == std::string(plot_csv_header) + "\n");
}

TEST_CASE("CSV files are written and I/O errors carry the path", "[bench][csv]") {
    const auto dir = std::filesystem::temp_directory_path() / "sbandit_csv_test";
    std::filesystem::create_directories(dir);
    const auto recs = run_experiment(small_spec());
    const auto path = (dir / "results.csv").string();
    emit_csv(recs, path);
    CHECK(parse_results_csv(read_text(path)).size() == recs.size());
    emit_csv(aggregate(recs), (dir / "summary.csv").string());
    emit_plot_data(recs, (dir / "plot.csv").string());
    try {
        emit_csv(recs, "/nonexistent_dir/results.csv");
        FAIL("expected an I/O error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent_dir/results.csv") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment spec JSON", "[bench][json]") {
    auto spec = small_spec();
    spec.scale_note = "desk";
    spec.gap_factor = 0.25;
    const auto back = experiment_from_json(to_json(spec));
    CHECK(back.algorithms == spec.algorithms);
    CHECK(back.trials == spec.trials);
    CHECK(back.base_seed == spec.base_seed);
    CHECK(back.family.family == "uniform");
    CHECK(back.family.n == 40);
    CHECK(back.gap_factor == spec.gap_factor);
    CHECK(back.scale_note == "desk");

    ExperimentSpec inl;
    inl.instance = gen_cluster(7, {}, 2);
    inl.algorithms = {AlgorithmConfig::of(AlgorithmKind::keepbest)};
    const auto inl_back = experiment_from_json(to_json(inl));
    REQUIRE(inl_back.instance);
    CHECK(inl_back.instance->arms == inl.instance->arms);
}

TEST_CASE("reference rows", "[bench]") {
    const auto& rows = reference_rows();
    CHECK(rows.size() == 9);
    CHECK(rows[0].mean_samples == 5.62e11);
    CHECK(rows[1].mean_samples == 1.41e10);
    CHECK(rows[1].mean_passes == 16.4);
    CHECK(rows[2].mean_samples == 1.18e9);
    CHECK(rows[2].mean_passes == 8.83);
}
