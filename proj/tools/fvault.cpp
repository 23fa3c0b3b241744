// fvault: command-line front end for the vault laboratory.
//
// Exit codes: 0 success, 1 internal error, 2 parameter error,
// 3 unlock/attack found nothing within its budget.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvault/fvault.hpp"

using namespace fvault;

namespace {

constexpr int exit_param = 2;
constexpr int exit_exhausted = 3;

// Seed as given, or a fresh one announced on stderr so the run can be replayed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    std::cerr << "seed: " << s << "\n";
    return s;
}

unsigned default_workers() {
    if (const char* env = std::getenv("FVAULT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
        throw ParameterError("FVAULT_WORKERS must be a positive integer");
    }
    return 1;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

Preset preset_or_throw(const std::string& name) {
    const auto p = find_preset(name);
    if (!p) throw ParameterError("unknown preset '" + name + "'");
    return *p;
}

GridKind grid_from(const std::string& s) {
    if (s == "random") return GridKind::random;
    if (s == "hex") return GridKind::hex;
    throw ParameterError("grid must be 'random' or 'hex'");
}

// Parameters shared by lock/estimate: a preset plus explicit overrides.
struct ParamFlags {
    std::string preset;
    std::optional<std::uint32_t> q;
    std::optional<std::size_t> k, t, r, threshold;
    std::optional<int> d;
    std::optional<bool> crc;
    std::optional<std::uint32_t> quiz_n;

    void add(CLI::App* app, bool with_lock_flags) {
        app->add_option("--preset", preset, "clancy | uludag | small-attack");
        app->add_option("--q", q, "field modulus (prime)");
        app->add_option("-k,--k", k, "polynomial size (degree + 1)");
        app->add_option("-t,--t", t, "genuine points");
        app->add_option("-r,--r", r, "vault size");
        app->add_option("-D,--threshold", threshold, "acceptance threshold D (default k+3)");
        app->add_option("--quiz-n", quiz_n, "quiz size n (0: no quiz)");
        if (with_lock_flags) {
            app->add_option("-d,--d", d, "minimum point distance");
            app->add_flag("--crc,!--no-crc", crc, "CRC-16 in the top coefficient");
        }
    }

    Preset resolve() const {
        Preset p;
        if (!preset.empty()) p = preset_or_throw(preset);
        if (q) p.q = *q;
        if (k) p.k = *k;
        if (t) p.t = *t;
        if (r) p.r = *r;
        if (threshold) p.threshold = *threshold;
        if (d) p.d = *d;
        if (crc) p.crc = *crc;
        if (quiz_n) p.quiz_n = *quiz_n;
        if (p.k == 0 || p.t == 0) throw ParameterError("k and t are required (or use --preset)");
        if (p.threshold == 0) p.threshold = p.k + 3;
        return p;
    }
};

// Acceptance rule flags for unlock/attack.
struct RuleFlags {
    std::string preset;
    std::optional<std::size_t> threshold;
    std::optional<bool> crc;
    std::size_t secret_bits = 0;

    void add(CLI::App* app) {
        app->add_option("--preset", preset, "take D and the CRC mode from a preset");
        app->add_option("-D,--threshold", threshold, "accept at >= D points on the graph (default k+3)");
        app->add_flag("--crc,!--no-crc", crc, "accept on a verifying CRC instead");
        app->add_option("--secret-bits", secret_bits, "secret length l (default: full capacity)");
    }

    StopRule rule() const {
        std::size_t d = 0;
        bool use_crc = false;
        if (!preset.empty()) {
            const Preset p = preset_or_throw(preset);
            d = p.threshold;
            use_crc = p.crc;
        }
        if (threshold) d = *threshold;
        if (crc) use_crc = *crc;
        return use_crc ? StopRule::by_crc() : StopRule::by_threshold(d);
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void annotate_estimate(const Preset& p, const ComplexityEstimate& e) {
    auto& err = std::cerr;
    err << "# brute force bound 8rk(r/t)^k = 2^" << fmt("%.2f", e.log2_R_bound)
        << " (exact trial odds 2^" << fmt("%.2f", e.log2_trials_exact) << ", approximation 2^"
        << fmt("%.2f", e.log2_trials_approx) << ")\n";
    err << "# D-criterion C(r,D)/C(t,D) = 2^" << fmt("%.2f", e.log2_Cbf) << "\n";
    if (p.name == "clancy") {
        err << "# reference: quoted ~2^50 for this setting; differs by " << fmt("%.1f", e.log2_R_bound - 50)
            << " bits (unresolved)\n";
        err << "# reference: quoted O(2^69) lies between C(313,17)/C(38,17) = 2^"
            << fmt("%.1f", threshold_attack_complexity(313, 38, 17).log2()) << " and t=20: 2^"
            << fmt("%.1f", threshold_attack_complexity(313, 20, 17).log2()) << "\n";
    } else if (p.name == "uludag") {
        err << "# reference: quoted ~2^36 for this setting; differs by " << fmt("%.1f", e.log2_R_bound - 36)
            << " bits\n";
    }
    const std::size_t plain = secret_capacity_bits(p.k, false);
    const std::size_t with_crc = secret_capacity_bits(p.k, true);
    err << "# capacity: 16*k = " << plain << " bits without CRC, 16*(k-1) = " << with_crc << " bits with CRC"
        << (p.crc ? " (selected)" : "") << "\n";
    for (std::size_t bits : {112u, 128u})
        err << "# a " << bits << "-bit secret fills " << (bits + 15) / 16 << " of " << p.k - (p.crc ? 1 : 0)
            << " data coefficients" << ((bits + 15) / 16 > p.k - (p.crc ? 1 : 0) ? " (does not fit)" : "") << "\n";
    if (p.quiz_n > 0)
        err << "# quiz: attack work multiplied by n^k = 2^" << fmt("%.2f", e.log2_quiz_multiplier) << "\n";
}

std::vector<std::size_t> parse_list(const std::string& s, const char* what) {
    // "a,b,c" or "lo:hi:step"
    std::vector<std::size_t> out;
    try {
        if (s.find(':') != std::string::npos) {
            std::vector<std::size_t> parts;
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ':')) parts.push_back(std::stoull(tok));
            if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) throw std::invalid_argument(s);
            for (std::size_t v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(v);
        } else {
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
        }
    } catch (const std::exception&) {
        throw ParameterError(std::string("bad list for ") + what + ": '" + s + "'");
    }
    if (out.empty()) throw ParameterError(std::string("empty list for ") + what);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy fingerprint vault laboratory"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    bool timing = false;
    std::string out_path;
    auto common = [&](CLI::App* sub, bool randomized) {
        if (randomized) sub->add_option("--seed", seed, "RNG seed (generated and printed when absent)");
        sub->add_option("-o,--output", out_path, "output file (default stdout)");
    };
    auto parallel = [&](CLI::App* sub) {
        sub->add_option("--workers", workers, "worker threads (default $FVAULT_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--timing", timing, "record wall time in the report");
    };

    // lock
    auto* lock_cmd = app.add_subcommand("lock", "hide a secret in a new vault");
    ParamFlags lock_params;
    lock_params.add(lock_cmd, true);
    std::string secret_hex, template_in, template_out, truth_path, grid = "random";
    std::size_t secret_bits = 0, template_size = 0;
    lock_cmd->add_option("--secret-hex", secret_hex, "secret as hex (default: random, full capacity)");
    lock_cmd->add_option("--secret-bits", secret_bits, "secret length l in bits");
    lock_cmd->add_option("--template", template_in, "enrollment template JSON (default: synthetic)");
    lock_cmd->add_option("--template-size", template_size, "minutiae in the synthetic template (default t)");
    lock_cmd->add_option("--template-out", template_out, "write the synthetic template here");
    lock_cmd->add_option("--truth", truth_path, "write ground truth here");
    lock_cmd->add_option("--grid", grid, "random | hex");
    common(lock_cmd, true);

    // unlock
    auto* unlock_cmd = app.add_subcommand("unlock", "open a vault with a query template");
    RuleFlags unlock_rule;
    unlock_rule.add(unlock_cmd);
    std::string vault_path, query_path;
    double tolerance = -1.0;
    std::uint64_t budget = 0;
    unlock_cmd->add_option("--vault", vault_path, "vault JSON")->required();
    unlock_cmd->add_option("--template", query_path, "query template JSON")->required();
    unlock_cmd->add_option("--tolerance", tolerance, "matching radius in pixels (default from d and grid)");
    unlock_cmd->add_option("--budget", budget, "maximum candidates (default 100000)");
    common(unlock_cmd, true);
    parallel(unlock_cmd);

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "brute-force a vault without any template");
    RuleFlags attack_rule;
    attack_rule.add(attack_cmd);
    std::string order = "random";
    attack_cmd->add_option("--vault", vault_path, "vault JSON")->required();
    attack_cmd->add_option("--budget", budget, "maximum trials (default 20 C(r,k)/C(k+3,k))");
    attack_cmd->add_option("--order", order, "random | lex");
    common(attack_cmd, true);
    parallel(attack_cmd);

    // estimate
    auto* estimate_cmd = app.add_subcommand("estimate", "analytic attack cost for a parameter set");
    ParamFlags est_params;
    est_params.add(estimate_cmd, false);
    double mu = 1.0;
    estimate_cmd->add_option("--mu", mu, "abscissa fraction of F_q used by the vault");
    common(estimate_cmd, false);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "estimates over a parameter grid (CSV)");
    std::string r_list, t_list, k_list, d_list = "0", q_list = "65537";
    std::uint32_t sweep_quiz = 0;
    std::size_t empirical = 0;
    sweep_cmd->add_option("--r", r_list, "list 'a,b,c' or range 'lo:hi:step'")->required();
    sweep_cmd->add_option("--t", t_list, "list or range")->required();
    sweep_cmd->add_option("--k", k_list, "list or range")->required();
    sweep_cmd->add_option("--D", d_list, "list or range; 0 means k+3");
    sweep_cmd->add_option("--q", q_list, "list of moduli");
    sweep_cmd->add_option("--quiz-n", sweep_quiz, "quiz size n");
    sweep_cmd->add_option("--empirical-runs", empirical, "attack runs per feasible row");
    common(sweep_cmd, true);
    parallel(sweep_cmd);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "synthetic templates and noisy recaptures");
    std::string sim_in;
    std::size_t count = 38;
    double d_min = 11;
    std::uint32_t granularity = 0;
    RecaptureModel model;
    bool noiseless = false;
    sim_cmd->add_option("--from", sim_in, "recapture this template instead of generating one");
    sim_cmd->add_option("--count", count, "minutiae to generate");
    sim_cmd->add_option("--d-min", d_min, "minimum distance between generated minutiae");
    sim_cmd->add_option("--theta-granularity", granularity, "orientations in multiples of pi/g (0: continuous)");
    sim_cmd->add_option("--jitter", model.jitter_sigma, "recapture: per-axis Gaussian sigma (pixels)");
    sim_cmd->add_option("--miss", model.miss_rate, "recapture: probability a minutia is lost");
    sim_cmd->add_option("--spurious", model.spurious_rate, "recapture: mean extra minutiae");
    sim_cmd->add_option("--angle-sigma", model.angle_sigma, "recapture: orientation noise (radians)");
    sim_cmd->add_flag("--noiseless", noiseless, "recapture without any noise");
    common(sim_cmd, true);

    // spurious
    auto* spur_cmd = app.add_subcommand("spurious", "count polynomials through many points of tiny-field vaults");
    std::uint32_t sq = 17;
    std::size_t sr = 12, st = 4, sk = 3, vaults = 100;
    std::optional<std::size_t> hits;
    spur_cmd->add_option("--q", sq, "small prime modulus");
    spur_cmd->add_option("-r,--r", sr, "vault size");
    spur_cmd->add_option("-t,--t", st, "genuine points");
    spur_cmd->add_option("-k,--k", sk, "polynomial size");
    spur_cmd->add_option("--hits", hits, "minimum points on the graph (default t)");
    spur_cmd->add_option("--vaults", vaults, "random vaults to average over");
    common(spur_cmd, true);

    // correlate
    auto* corr_cmd = app.add_subcommand("correlate", "intersect vaults locked from the same finger");
    std::vector<std::string> vault_paths;
    double eps = 3.0;
    corr_cmd->add_option("--vault", vault_paths, "vault JSON (repeat)")->required();
    corr_cmd->add_option("--eps", eps, "match radius in pixels");
    common(corr_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_param;
    }

    try {
        if (workers == 0) workers = default_workers();

        if (*lock_cmd) {
            const Preset p = lock_params.resolve();
            if (p.r == 0 && grid_from(grid) == GridKind::random) throw ParameterError("r is required (or use --preset)");
            LockParams lp = p.lock_params();
            lp.grid = grid_from(grid);
            const std::uint64_t s = resolve_seed(seed);
            Template tpl;
            if (!template_in.empty()) {
                tpl = template_from_json(read_file(template_in));
            } else {
                tpl = gen_template(template_size == 0 ? lp.t : template_size, Frame{}, lp.d, 0, s);
                if (!template_out.empty()) write_file(template_out, template_to_json(tpl));
            }
            Secret secret;
            if (!secret_hex.empty()) {
                secret = Secret::from_hex(secret_hex, secret_bits);
            } else {
                Rng rng = make_rng(s, experiment_secret_stream);
                secret = Secret::random(secret_bits == 0 ? secret_capacity_bits(lp.k, lp.crc) : secret_bits, rng);
            }
            const LockResult res = lock(tpl, secret, lp, s);
            emit(out_path, vault_to_json(res.vault));
            if (!truth_path.empty()) write_file(truth_path, truth_to_json(res.truth));
            return 0;
        }

        if (*unlock_cmd) {
            const Vault v = vault_from_json(read_file(vault_path));
            const Template q = template_from_json(read_file(query_path));
            UnlockOptions opt;
            opt.rule = unlock_rule.rule();
            opt.secret_bits = unlock_rule.secret_bits;
            opt.tolerance = tolerance;
            if (budget > 0) opt.budget = budget;
            opt.seed = resolve_seed(seed);
            opt.workers = workers;
            const UnlockResult res = unlock(v, q, opt);
            emit(out_path, unlock_report_to_json(res, timing));
            if (timing) std::cerr << "elapsed_ms: " << res.elapsed_ms << "\n";
            return res.success ? 0 : exit_exhausted;
        }

        if (*attack_cmd) {
            const Vault v = vault_from_json(read_file(vault_path));
            AttackOptions opt;
            opt.rule = attack_rule.rule();
            opt.secret_bits = attack_rule.secret_bits;
            opt.budget = budget;
            if (order == "lex")
                opt.order = SubsetOrder::lexicographic;
            else if (order != "random")
                throw ParameterError("order must be 'random' or 'lex'");
            opt.seed = resolve_seed(seed);
            opt.workers = workers;
            const AttackReport rep = brute_force_attack(v, opt);
            emit(out_path, attack_report_to_json(rep, timing));
            if (timing) std::cerr << "elapsed_ms: " << rep.elapsed_ms << "\n";
            return rep.success ? 0 : exit_exhausted;
        }

        if (*estimate_cmd) {
            const Preset p = est_params.resolve();
            if (p.r == 0) throw ParameterError("r is required (or use --preset)");
            EstimateParams ep = p.estimate_params();
            ep.mu = mu;
            SweepRow row;
            row.estimate = estimate(ep);
            emit(out_path, std::string(sweep_csv_header) + "\n" + sweep_csv_row(row) + "\n");
            annotate_estimate(p, row.estimate);
            return 0;
        }

        if (*sweep_cmd) {
            SweepGrid g;
            g.r = parse_list(r_list, "--r");
            g.t = parse_list(t_list, "--t");
            g.k = parse_list(k_list, "--k");
            g.threshold = parse_list(d_list, "--D");
            g.q.clear();
            for (auto v : parse_list(q_list, "--q")) g.q.push_back(v);
            g.quiz_n = sweep_quiz;
            SweepOptions so;
            so.empirical_runs = empirical;
            so.seed = empirical > 0 ? resolve_seed(seed) : seed.value_or(0);
            so.workers = workers;
            emit(out_path, sweep_csv(sweep(g, so)));
            return 0;
        }

        if (*sim_cmd) {
            const std::uint64_t s = resolve_seed(seed);
            if (sim_in.empty()) {
                emit(out_path, template_to_json(gen_template(count, Frame{}, d_min, granularity, s)));
            } else {
                if (noiseless) model = RecaptureModel::noiseless();
                emit(out_path, template_to_json(recapture(template_from_json(read_file(sim_in)), model, s)));
            }
            return 0;
        }

        if (*spur_cmd) {
            const std::uint64_t s = resolve_seed(seed);
            const std::size_t min_hits = hits.value_or(st);
            if (vaults == 0) throw ParameterError("--vaults must be positive");
            OrderedJson j;
            std::vector<std::uint64_t> counts;
            double total = 0;
            for (std::size_t i = 0; i < vaults; ++i) {
                counts.push_back(count_matching_polynomials(small_field_vault(sq, sr, st, sk, derive_seed(s, i)), min_hits));
                total += static_cast<double>(counts.back());
            }
            j["q"] = sq;
            j["r"] = sr;
            j["t"] = st;
            j["k"] = sk;
            j["hits"] = min_hits;
            j["vaults"] = vaults;
            j["mean_count"] = total / static_cast<double>(vaults);
            if (min_hits == st) j["bound_mu1"] = std::exp2(spurious_polynomial_bound_log2(sq, sr, st, sk));
            j["counts"] = counts;
            j["seed"] = s;
            emit(out_path, j.dump(2) + "\n");
            return 0;
        }

        if (*corr_cmd) {
            std::vector<Vault> vs;
            for (const auto& path : vault_paths) vs.push_back(vault_from_json(read_file(path)));
            const auto found = correlate_vaults(vs, eps);
            OrderedJson j;
            j["eps"] = eps;
            j["vaults"] = vs.size();
            j["count"] = found.size();
            OrderedJson pts = OrderedJson::array();
            for (const auto& p : found) pts.push_back({{"x", p.x}, {"y", p.y}});
            j["points"] = pts;
            emit(out_path, j.dump(2) + "\n");
            return 0;
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_param;
    } catch (const PlacementError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_param;
    } catch (const SnappingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_param;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
