#pragma once

// Parameter sweeps over the analytic estimators with optional scaled-down
// empirical attack runs.

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "attack.hpp"
#include "experiment.hpp"

namespace fvault {

struct SweepGrid {
    std::vector<std::size_t> r;
    std::vector<std::size_t> t;
    std::vector<std::size_t> k;
    std::vector<std::size_t> threshold;  // D; 0 means k + 3
    std::vector<std::uint64_t> q{65537};
    std::uint32_t quiz_n = 0;
};

struct SweepOptions {
    std::size_t empirical_runs = 0;
    double max_empirical_odds = 2e4;  // skip attacks whose expected trials exceed this
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct SweepRow {
    ComplexityEstimate estimate;
    std::optional<double> empirical_mean_trials;
    std::size_t empirical_runs = 0;
};

// Mean brute-force trials over `runs` freshly locked vaults.
inline double empirical_mean_trials(const EstimateParams& p, std::size_t runs, std::uint64_t seed, unsigned workers = 1) {
    double total = 0.0;
    for (std::size_t i = 0; i < runs; ++i) {
        ExperimentSpec spec;
        spec.lock = {static_cast<std::uint32_t>(p.q), p.k, p.t, p.r, 11, false, GridKind::random, 0};
        const std::uint64_t run_seed = derive_seed(seed, i);
        const LockResult locked = make_experiment(spec, run_seed);
        AttackOptions opt;
        opt.rule = StopRule::by_threshold(p.d_threshold);
        opt.budget = default_attack_budget(p.r, p.t, p.k);
        opt.seed = derive_seed(run_seed, 0xA77AC);
        opt.workers = workers;
        total += static_cast<double>(brute_force_attack(locked.vault, opt).trials);
    }
    return total / static_cast<double>(runs);
}

inline std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepOptions& opt) {
    std::vector<SweepRow> rows;
    for (std::uint64_t q : grid.q)
        for (std::size_t r : grid.r)
            for (std::size_t t : grid.t)
                for (std::size_t k : grid.k)
                    for (std::size_t d0 : grid.threshold) {
                        const std::size_t d = d0 == 0 ? k + 3 : d0;
                        if (!(k >= 1 && k <= t && t <= r && d >= k && d <= t)) continue;
                        SweepRow row;
                        row.estimate = estimate({q, k, t, r, d, grid.quiz_n, 1.0});
                        if (opt.empirical_runs > 0 && grid.quiz_n == 0 && q > 0xFFFF &&
                            row.estimate.log2_trials_exact <= std::log2(opt.max_empirical_odds)) {
                            row.empirical_mean_trials =
                                empirical_mean_trials(row.estimate.params, opt.empirical_runs,
                                                      derive_seed(opt.seed, rows.size()), opt.workers);
                            row.empirical_runs = opt.empirical_runs;
                        }
                        rows.push_back(row);
                    }
    return rows;
}

inline constexpr const char* sweep_csv_header =
    "r,t,k,D,q,quiz_n,log2_trials_exact,log2_trials_approx,log2_R_bound,log2_Cbf,log2_spurious,log2_F,"
    "empirical_mean_trials,empirical_runs";

inline std::string sweep_csv_row(const SweepRow& row) {
    const auto& e = row.estimate;
    const auto& p = e.params;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%llu,%u,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,", p.r, p.t, p.k,
                  p.d_threshold, static_cast<unsigned long long>(p.q), p.quiz_n, e.log2_trials_exact,
                  e.log2_trials_approx, e.log2_R_bound, e.log2_Cbf, e.log2_spurious, e.log2_F);
    std::string out = buf;
    if (row.empirical_mean_trials) {
        std::snprintf(buf, sizeof buf, "%.3f", *row.empirical_mean_trials);
        out += buf;
    }
    out += "," + std::to_string(row.empirical_runs);
    return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << sweep_csv_header << "\n";
    for (const auto& row : rows) os << sweep_csv_row(row) << "\n";
    return os.str();
}

}  // namespace fvault
