// sbandit: command-line front end for the streaming bandit lab.
// Exit codes: 0 success, 1 trial or check failure, 2 usage error.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streambandit/streambandit.hpp"

namespace sb = streambandit;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FamilyFlags {
    sb::FamilySpec spec;
    double gamma = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--family", spec.family, "uniform | arithmetic | cluster | hard")
            ->check(CLI::IsMember({"uniform", "arithmetic", "cluster", "hard"}));
        app->add_option("--n", spec.n, "number of arms");
        app->add_option("--lo", spec.lo, "arithmetic: smallest mean");
        app->add_option("--hi", spec.hi, "arithmetic: largest mean");
        app->add_option("--best", spec.cluster.best, "cluster: best mean");
        app->add_option("--c1", spec.cluster.c1, "cluster: first cluster mean");
        app->add_option("--c2", spec.cluster.c2, "cluster: second cluster mean");
        app->add_option("--B", spec.batches, "hard: batch parameter");
        app->add_option("--C", spec.c, "hard: C");
        app->add_option("--gamma", gamma, "hard: gap gamma (default: bracket midpoint)");
    }

    sb::FamilySpec resolved() const {
        sb::FamilySpec f = spec;
        if (gamma > 0.0) f.gamma = gamma;
        return f;
    }
};

std::string meta_path_for(const std::string& out) {
    fs::path p(out);
    return (p.parent_path() / (p.stem().string() + ".meta.json")).string();
}

int cmd_gen(const FamilyFlags& ff, std::uint64_t seed, const std::string& out) {
    const sb::FamilySpec f = ff.resolved();
    std::string text;
    std::optional<sb::HardInstanceMeta> meta;
    if (f.family == "hard") {
        sb::HardInstanceParams p{f.n, f.batches, f.c, f.gamma.value_or(sb::HardInstanceParams::default_gamma(f.n))};
        auto [inst, m] = sb::gen_hard_batched(p, seed);
        text = sb::instance_to_json(inst);
        meta = std::move(m);
    } else {
        text = sb::instance_to_json(sb::generate_family(f, seed));
    }
    if (out.empty() || out == "-") {
        std::cout << text;
        if (meta) std::cout << sb::to_json(*meta).dump(2) << '\n';
        return exit_ok;
    }
    sb::write_text(out, text);
    if (meta) sb::write_text(meta_path_for(out), sb::to_json(*meta).dump(2) + "\n");
    return exit_ok;
}

sb::Delta2Source parse_mode(const std::string& s) {
    try {
        return sb::parse_delta2_source(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

struct RunFlags {
    std::string instance;
    std::string algorithm = "alg1";
    std::size_t passes = 0;
    double delta = 0.05;
    std::string delta2_mode;
    double gamma_factor = 0.25;
    std::size_t pass_cap = 64;
};

// An exact instance run in lower_bound mode gets gamma = factor * Δ[2].
sb::BanditInstance prepare_instance(sb::BanditInstance inst, sb::Delta2Source src, double factor) {
    if (src == sb::Delta2Source::lower_bound && inst.delta2_mode == sb::Delta2Mode::exact)
        return sb::with_gap_lower_bound(std::move(inst), factor);
    return inst;
}

sb::AlgorithmConfig make_config(sb::AlgorithmKind kind, std::size_t passes, double delta, const std::string& mode,
                                std::size_t pass_cap) {
    sb::AlgorithmConfig cfg = sb::AlgorithmConfig::of(kind, passes ? std::optional<std::size_t>(passes) : std::nullopt,
                                                      delta);
    if (!mode.empty() && cfg.needs_delta2()) cfg.delta2_source = parse_mode(mode);
    if (kind == sb::AlgorithmKind::jhtx) cfg.pass_cap = pass_cap;
    return cfg;
}

int cmd_run(const RunFlags& rf, std::uint64_t seed) {
    const sb::AlgorithmConfig cfg =
        make_config(sb::parse_algorithm(rf.algorithm), rf.passes, rf.delta, rf.delta2_mode, rf.pass_cap);
    const sb::BanditInstance inst = prepare_instance(sb::load_instance(rf.instance), cfg.delta2_source, rf.gamma_factor);
    sb::validate(inst);
    const sb::TrialResult r = sb::run_trial(inst, cfg, seed);
    std::cout << sb::to_json(r).dump() << '\n';
    return r.correct && !r.failure_reason ? exit_ok : exit_failure;
}

struct BenchFlags {
    std::string spec_file;
    std::string instance;
    std::vector<std::string> algorithms{"alg1", "jhtx", "keepbest"};
    std::size_t passes = 0;
    double delta = 0.05;
    std::string delta2_mode;
    double gamma_factor = 0.25;
    std::size_t trials = 30;
    std::size_t jobs = 1;
    bool resample = false;
    std::string out = ".";
};

void print_summary(const sb::Summary& s, std::ostream& os) {
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %6s %14s %12s %9s %8s %8s\n", "algorithm", "trials", "mean_samples",
                  "ci95", "passes", "success", "memory");
    os << line;
    for (const auto& r : s.rows) {
        std::snprintf(line, sizeof line, "%-14s %6zu %14.4e %12.3e %9.3f %8.3f %8.3f\n", r.algorithm.c_str(), r.trials,
                      r.mean_samples, r.samples_ci95, r.mean_passes, r.success_rate, r.mean_peak_memory);
        os << line;
    }
}

int cmd_bench(const BenchFlags& bf, const FamilyFlags& ff, std::uint64_t seed, bool seed_given, bool trials_given) {
    sb::ExperimentSpec spec;
    if (!bf.spec_file.empty()) {
        spec = sb::load_experiment(bf.spec_file);
        if (seed_given) spec.base_seed = seed;
        if (trials_given) spec.trials = bf.trials;
    } else {
        if (!bf.instance.empty())
            spec.instance = sb::load_instance(bf.instance);
        else
            spec.family = ff.resolved();
        for (const auto& name : bf.algorithms)
            spec.algorithms.push_back(make_config(sb::parse_algorithm(name), bf.passes, bf.delta, bf.delta2_mode, 64));
        spec.trials = bf.trials;
        spec.base_seed = seed;
        spec.resample_instance = bf.resample;
        if (!bf.delta2_mode.empty() && parse_mode(bf.delta2_mode) == sb::Delta2Source::lower_bound)
            spec.gap_factor = bf.gamma_factor;
        spec.scale_note = "desk scale";
    }
    const auto records = sb::run_experiment(spec, bf.jobs);
    const auto summary = sb::aggregate(records);
    fs::create_directories(bf.out);
    const fs::path dir(bf.out);
    sb::emit_csv(records, (dir / "results.csv").string());
    sb::emit_csv(summary, (dir / "summary.csv").string());
    sb::emit_plot_data(records, (dir / "plot.csv").string());
    print_summary(summary, std::cout);
    for (const auto& rec : records)
        if (rec.result.failure_reason) return exit_failure;
    return exit_ok;
}

int cmd_check_bounds(std::uint64_t seed, std::size_t pinsker_pairs) {
    const auto grid = sb::info::claim_grid();
    std::size_t cells = 0, failed = 0;
    std::printf("%-8s %-8s %-12s %-12s %-12s %s\n", "alpha", "beta", "kl12", "kl21", "8(b-a)^2", "result");
    for (double a : grid) {
        for (double b : grid) {
            const auto r = sb::info::check_bernoulli_kl_bounds({a, b});
            ++cells;
            if (!r.passed()) ++failed;
            std::printf("%-8.4f %-8.4f %-12.4e %-12.4e %-12.4e %s\n", a, b, r.kl12, r.kl21, r.bound8,
                        r.passed() ? "pass" : "FAIL");
        }
    }
    std::printf("kl grid: %zu/%zu cells pass\n", cells - failed, cells);

    sb::Engine eng = sb::make_engine(seed, sb::hash_label("pinsker"));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t pinsker_failed = 0;
    for (std::size_t k = 0; k < pinsker_pairs; ++k) {
        const double p = unif(eng), q = unif(eng);
        const double tv = sb::info::tvd_bernoulli(p, q);
        if (!(tv <= std::sqrt(0.5 * sb::info::kl_bernoulli(p, q)) + 1e-15)) ++pinsker_failed;
    }
    std::printf("pinsker: %zu/%zu random pairs pass\n", pinsker_pairs - pinsker_failed, pinsker_pairs);
    return failed == 0 && pinsker_failed == 0 ? exit_ok : exit_failure;
}

int cmd_gaps(const std::string& path) {
    const sb::BanditInstance inst = sb::load_instance(path);
    const sb::GapProfile g = sb::gap_profile(inst);
    sb::json j;
    j["n"] = inst.size();
    j["best_index"] = g.best_index;
    j["delta2"] = inst.size() >= 2 ? sb::json(g.delta2()) : sb::json(nullptr);
    j["sorted_gaps"] = g.sorted_gaps;
    j["hardness_budget"] = sb::hardness_budget(g);
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming multi-armed bandit lab"};
    app.require_subcommand(1, 1);
    std::uint64_t seed = 0;
    std::string out;

    FamilyFlags gen_family;
    auto* gen = app.add_subcommand("gen", "generate an instance JSON");
    gen_family.attach(gen);
    gen->add_option("--seed", seed, "random seed")->capture_default_str();
    gen->add_option("--out", out, "output path (default stdout)");

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run one algorithm once and print the result as a JSON line");
    run->add_option("instance,--instance", rf.instance, "instance JSON")->required();
    run->add_option("--algorithm", rf.algorithm, "alg1 | alg2 | keepbest | jhtx")
        ->check(CLI::IsMember({"alg1", "alg2", "keepbest", "jhtx"}));
    run->add_option("--P", rf.passes, "pass parameter (default ceil(log2 n))");
    run->add_option("--delta", rf.delta, "failure probability");
    run->add_option("--delta2-mode", rf.delta2_mode, "exact | lower_bound");
    run->add_option("--gamma-factor", rf.gamma_factor, "lower_bound mode: gamma = factor * gap");
    run->add_option("--pass-cap", rf.pass_cap, "jhtx pass cap");
    run->add_option("--seed", seed, "random seed");

    BenchFlags bf;
    FamilyFlags bench_family;
    bench_family.spec.family = "uniform";
    auto* bench = app.add_subcommand("bench", "run a seeded battery and write results, summary and plot CSVs");
    bench->add_option("--spec", bf.spec_file, "experiment spec JSON (overrides the family flags)");
    bench->add_option("--instance", bf.instance, "instance JSON instead of a generator");
    bench_family.attach(bench);
    bench->add_option("--algorithms", bf.algorithms, "algorithms to compare")->delimiter(',');
    bench->add_option("--P", bf.passes, "pass parameter for alg1/alg2");
    bench->add_option("--delta", bf.delta, "failure probability");
    bench->add_option("--delta2-mode", bf.delta2_mode, "exact | lower_bound");
    bench->add_option("--gamma-factor", bf.gamma_factor, "lower_bound mode: gamma = factor * gap");
    auto* trials_opt = bench->add_option("--trials", bf.trials, "trials per algorithm");
    auto* bench_seed = bench->add_option("--seed", seed, "base seed");
    bench->add_option("--jobs", bf.jobs, "worker threads");
    bench->add_flag("--resample", bf.resample, "draw a fresh instance for every trial");
    bench->add_option("--out", bf.out, "output directory");

    std::size_t pinsker_pairs = 10000;
    auto* check = app.add_subcommand("check-bounds", "check the Bernoulli KL bound grid and Pinsker's inequality");
    check->add_option("--seed", seed, "seed for the random Pinsker pairs");
    check->add_option("--pairs", pinsker_pairs, "number of random Pinsker pairs");

    std::string gaps_instance;
    auto* gaps = app.add_subcommand("gaps", "print the gap profile and hardness budget of an instance");
    gaps->add_option("instance,--instance", gaps_instance, "instance JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*gen) return cmd_gen(gen_family, seed, out);
        if (*run) return cmd_run(rf, seed);
        if (*bench) return cmd_bench(bf, bench_family, seed, bench_seed->count() > 0, trials_opt->count() > 0);
        if (*check) return cmd_check_bounds(seed, pinsker_pairs);
        if (*gaps) return cmd_gaps(gaps_instance);
    } catch (const UsageError& e) {
        std::cerr << "sbandit: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sbandit: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "sbandit: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "sbandit: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
