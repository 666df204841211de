// bench.hpp
#pragma once
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "instance.hpp"
#include "serialization.hpp"
#include "trial.hpp"

namespace streambandit {

// Generator recipe. Fields a family does not use are ignored.
struct FamilySpec {
    std::string family{"uniform"}; // uniform | arithmetic | cluster | hard
    std::size_t n{200};
    double lo{0.0};
    double hi{1.0};
    ClusterParams cluster{};
    std::size_t batches{2};
    std::size_t c{1};
    std::optional<double> gamma; // hard family; defaults to the bracket midpoint
};

inline BanditInstance generate_family(const FamilySpec& f, std::uint64_t seed) {
    if (f.family == "uniform") return gen_uniform(f.n, seed);
    if (f.family == "arithmetic") return gen_arithmetic(f.n, f.lo, f.hi, seed);
    if (f.family == "cluster") return gen_cluster(f.n, f.cluster, seed);
    if (f.family == "hard") {
        HardInstanceParams p{f.n, f.batches, f.c, f.gamma.value_or(HardInstanceParams::default_gamma(f.n))};
        return gen_hard_batched(p, seed).first;
    }
    throw std::invalid_argument("unknown family '" + f.family + "'");
}

// Replace the exact gap with gamma = factor * Δ[2], flagged as a lower bound.
inline BanditInstance with_gap_lower_bound(BanditInstance inst, double factor) {
    if (!(factor > 0.0 && factor <= 1.0)) throw std::invalid_argument("gap factor must lie in (0,1]");
    if (inst.size() >= 2) inst.known_delta2 = factor * gap_profile(inst).delta2();
    inst.delta2_mode = Delta2Mode::lower_bound;
    return inst;
}

struct ExperimentSpec {
    std::optional<BanditInstance> instance; // inline instance; otherwise `family`
    FamilySpec family{};
    std::vector<AlgorithmConfig> algorithms;
    std::size_t trials{30};
    std::uint64_t base_seed{0};
    std::string scale_note;
    // false: one realization (drawn from base_seed) shared by every trial;
    // true: trial t draws its own realization from base_seed + t.
    bool resample_instance{false};
    std::optional<double> gap_factor; // run with a lower bound on Δ[2] instead
};

struct TrialRecord {
    std::size_t trial{0};
    TrialResult result;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline BanditInstance experiment_instance(const ExperimentSpec& spec, std::size_t trial) {
    BanditInstance inst = spec.instance ? *spec.instance
                                        : generate_family(spec.family, spec.base_seed + (spec.resample_instance ? trial : 0));
    if (spec.gap_factor) inst = with_gap_lower_bound(std::move(inst), *spec.gap_factor);
    return inst;
}

inline void validate(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (spec.algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
    const BanditInstance probe = experiment_instance(spec, 0);
    validate(probe);
    for (const auto& cfg : spec.algorithms) check_config(probe, cfg);
}

// trials x algorithms results ordered by (trial, algorithm position). Trial t
// runs with seed base_seed + t; all algorithms in a trial share its instance
// and get disjoint random streams through their labels.
inline std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, std::size_t jobs = 1) {
    validate(spec);
    const std::size_t na = spec.algorithms.size();
    const std::size_t total = spec.trials * na;
    std::vector<TrialRecord> out(total);

    std::optional<BanditInstance> shared;
    if (!spec.resample_instance) shared = experiment_instance(spec, 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::optional<BanditInstance> cached;
        std::size_t cached_trial = static_cast<std::size_t>(-1);
        for (std::size_t k; (k = next.fetch_add(1)) < total;) {
            const std::size_t t = k / na;
            const AlgorithmConfig& cfg = spec.algorithms[k % na];
            const std::uint64_t seed = spec.base_seed + t;
            TrialRecord& rec = out[k];
            rec.trial = t;
            try {
                if (!shared && cached_trial != t) {
                    cached = experiment_instance(spec, t);
                    cached_trial = t;
                }
                rec.result = run_trial(shared ? *shared : *cached, cfg, seed);
            } catch (const std::exception& e) {
                rec.result = TrialResult{};
                rec.result.seed = seed;
                rec.result.algorithm = cfg.label();
                rec.result.failure_reason = e.what();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, total);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

struct AlgorithmSummary {
    std::string algorithm;
    std::size_t trials{0};
    double mean_samples{0.0};
    double samples_ci95{0.0}; // half-width, 1.96 sd / sqrt(trials)
    double mean_passes{0.0};
    double passes_ci95{0.0};
    double success_rate{0.0};
    double mean_peak_memory{0.0};

    double samples_lo() const { return mean_samples - samples_ci95; }
    double samples_hi() const { return mean_samples + samples_ci95; }
    double passes_lo() const { return mean_passes - passes_ci95; }
    double passes_hi() const { return mean_passes + passes_ci95; }
};

struct Summary {
    std::vector<AlgorithmSummary> rows; // first-appearance order

    const AlgorithmSummary& at(const std::string& algorithm) const {
        for (const auto& r : rows)
            if (r.algorithm == algorithm) return r;
        throw std::out_of_range("no summary row for '" + algorithm + "'");
    }
};

namespace detail {

struct MeanCi {
    double mean{0.0};
    double ci95{0.0};
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    if (xs.size() < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return r;
}

} // namespace detail

// Failed trials count as incorrect; their pulls still enter the means.
inline Summary aggregate(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no results");
    std::vector<std::string> order;
    std::map<std::string, std::vector<const TrialResult*>> by_alg;
    for (const auto& rec : records) {
        auto& bucket = by_alg[rec.result.algorithm];
        if (bucket.empty()) order.push_back(rec.result.algorithm);
        bucket.push_back(&rec.result);
    }
    Summary s;
    for (const auto& name : order) {
        const auto& rs = by_alg[name];
        std::vector<double> samples, passes;
        double wins = 0.0, memory = 0.0;
        for (const TrialResult* r : rs) {
            samples.push_back(static_cast<double>(r->total_pulls));
            passes.push_back(static_cast<double>(r->passes_used));
            wins += r->correct ? 1.0 : 0.0;
            memory += static_cast<double>(r->peak_arm_memory);
        }
        AlgorithmSummary row;
        row.algorithm = name;
        row.trials = rs.size();
        const auto sm = detail::mean_ci(samples);
        const auto pm = detail::mean_ci(passes);
        row.mean_samples = sm.mean;
        row.samples_ci95 = sm.ci95;
        row.mean_passes = pm.mean;
        row.passes_ci95 = pm.ci95;
        row.success_rate = wins / static_cast<double>(rs.size());
        row.mean_peak_memory = memory / static_cast<double>(rs.size());
        s.rows.push_back(row);
    }
    return s;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* results_csv_header =
    "trial,algorithm,seed,returned_arm,correct,total_pulls,passes_used,peak_arm_memory,peak_stats_words";
inline constexpr const char* summary_csv_header =
    "algorithm,mean_samples,samples_ci95,mean_passes,success_rate,passes_ci95,mean_peak_memory,trials";
inline constexpr const char* plot_csv_header = "trial,algorithm,total_pulls,log10_samples,passes_used";

inline std::string results_to_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream os;
    os << results_csv_header << '\n';
    for (const auto& rec : records) {
        const TrialResult& r = rec.result;
        os << rec.trial << ',' << r.algorithm << ',' << r.seed << ','
           << (r.returned_arm ? std::to_string(*r.returned_arm) : std::string{}) << ',' << (r.correct ? 1 : 0) << ','
           << r.total_pulls << ',' << r.passes_used << ',' << r.peak_arm_memory << ','
           << (r.peak_stats_words ? std::to_string(*r.peak_stats_words) : std::string{"unbounded"}) << '\n';
    }
    return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

} // namespace detail

// Inverse of results_to_csv for every column it writes (failure_reason is not
// part of the CSV).
inline std::vector<TrialRecord> parse_results_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != results_csv_header) throw std::invalid_argument("results CSV: bad header");
    std::vector<TrialRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = detail::split_csv_line(line);
        if (c.size() != 9) throw std::invalid_argument("results CSV: expected 9 columns in '" + line + "'");
        TrialRecord rec;
        rec.trial = detail::parse_u64(c[0]);
        rec.result.algorithm = c[1];
        rec.result.seed = detail::parse_u64(c[2]);
        if (!c[3].empty()) rec.result.returned_arm = detail::parse_u64(c[3]);
        rec.result.correct = c[4] == "1";
        rec.result.total_pulls = detail::parse_u64(c[5]);
        rec.result.passes_used = detail::parse_u64(c[6]);
        rec.result.peak_arm_memory = detail::parse_u64(c[7]);
        if (c[8] != "unbounded") rec.result.peak_stats_words = detail::parse_u64(c[8]);
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::string summary_to_csv(const Summary& s) {
    std::ostringstream os;
    os << summary_csv_header << '\n';
    for (const auto& r : s.rows) {
        os << r.algorithm << ',' << format_real(r.mean_samples) << ',' << format_real(r.samples_ci95) << ','
           << format_real(r.mean_passes) << ',' << format_real(r.success_rate) << ',' << format_real(r.passes_ci95)
           << ',' << format_real(r.mean_peak_memory) << ',' << r.trials << '\n';
    }
    return os.str();
}

inline double log10_samples(std::uint64_t pulls) { return pulls == 0 ? 0.0 : std::log10(static_cast<double>(pulls)); }

inline std::string plot_data_to_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream os;
    os << plot_csv_header << '\n';
    char buf[32];
    for (const auto& rec : records) {
        std::snprintf(buf, sizeof buf, "%.6f", log10_samples(rec.result.total_pulls));
        os << rec.trial << ',' << rec.result.algorithm << ',' << rec.result.total_pulls << ',' << buf << ','
           << rec.result.passes_used << '\n';
    }
    return os.str();
}

inline void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    write_text(path, results_to_csv(records));
}
inline void emit_csv(const Summary& s, const std::string& path) { write_text(path, summary_to_csv(s)); }
inline void emit_plot_data(const std::vector<TrialRecord>& records, const std::string& path) {
    write_text(path, plot_data_to_csv(records));
}

// ---------------------------------------------------------------------------
// Reference full-scale rows (n = 2000), kept for side-by-side reporting.
// Desk-scale runs are compared by ordering only.

struct ReferenceRow {
    const char* family;
    const char* algorithm;
    double mean_samples;
    std::optional<double> mean_passes; // the single-pass baseline reports none
};

inline const std::vector<ReferenceRow>& reference_rows() {
    static const std::vector<ReferenceRow> rows = {
        {"uniform", "aw", 5.62e11, std::nullopt},    {"uniform", "jhtx", 1.41e10, 16.4},
        {"uniform", "alg1", 1.18e9, 8.83},           {"arithmetic", "aw", 4.01e12, std::nullopt},
        {"arithmetic", "jhtx", 5.05e10, 18.53},      {"arithmetic", "alg1", 4.61e9, 8.67},
        {"cluster", "aw", 3.32e10, std::nullopt},    {"cluster", "jhtx", 1.38e11, 13.47},
        {"cluster", "alg1", 1.73e10, 9.03},
    };
    return rows;
}

// ---------------------------------------------------------------------------
// Experiment spec JSON

inline json to_json(const FamilySpec& f) {
    json j;
    j["family"] = f.family;
    j["n"] = f.n;
    if (f.family == "arithmetic") {
        j["lo"] = f.lo;
        j["hi"] = f.hi;
    } else if (f.family == "cluster") {
        j["best"] = f.cluster.best;
        j["c1"] = f.cluster.c1;
        j["c2"] = f.cluster.c2;
    } else if (f.family == "hard") {
        j["B"] = f.batches;
        j["C"] = f.c;
        j["gamma"] = f.gamma ? json(*f.gamma) : json(nullptr);
    }
    return j;
}

inline FamilySpec family_from_json(const json& j) {
    FamilySpec f;
    f.family = j.at("family").get<std::string>();
    f.n = j.at("n").get<std::size_t>();
    f.lo = j.value("lo", f.lo);
    f.hi = j.value("hi", f.hi);
    f.cluster.best = j.value("best", f.cluster.best);
    f.cluster.c1 = j.value("c1", f.cluster.c1);
    f.cluster.c2 = j.value("c2", f.cluster.c2);
    f.batches = j.value("B", f.batches);
    f.c = j.value("C", f.c);
    if (j.contains("gamma") && !j.at("gamma").is_null()) f.gamma = j.at("gamma").get<double>();
    return f;
}

inline json to_json(const ExperimentSpec& s) {
    json j;
    if (s.instance)
        j["instance"] = json::parse(instance_to_json(*s.instance));
    else
        j["generator"] = to_json(s.family);
    j["algorithms"] = json::array();
    for (const auto& a : s.algorithms) j["algorithms"].push_back(to_json(a));
    j["trials"] = s.trials;
    j["base_seed"] = s.base_seed;
    j["scale_note"] = s.scale_note;
    j["resample_instance"] = s.resample_instance;
    j["gap_factor"] = s.gap_factor ? json(*s.gap_factor) : json(nullptr);
    return j;
}

// `instance` may be an inline object or a path to an instance file.
inline ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec s;
    if (j.contains("instance")) {
        const auto& in = j.at("instance");
        s.instance = in.is_string() ? load_instance(in.get<std::string>()) : instance_from_json(in);
    } else {
        s.family = family_from_json(j.at("generator"));
    }
    for (const auto& a : j.at("algorithms")) s.algorithms.push_back(config_from_json(a));
    s.trials = j.value("trials", s.trials);
    s.base_seed = j.value("base_seed", s.base_seed);
    s.scale_note = j.value("scale_note", std::string{});
    s.resample_instance = j.value("resample_instance", false);
    if (j.contains("gap_factor") && !j.at("gap_factor").is_null()) s.gap_factor = j.at("gap_factor").get<double>();
    return s;
}

inline ExperimentSpec load_experiment(const std::string& path) {
    try {
        return experiment_from_json(json::parse(read_text(path)));
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

} // namespace streambandit
