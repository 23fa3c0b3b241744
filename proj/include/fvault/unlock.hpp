#pragma once

// Genuine verifier: match a fresh template against the vault, then search
// k-subsets of the matches for the locking polynomial.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "field.hpp"
#include "geometry.hpp"
#include "quiz.hpp"
#include "search.hpp"
#include "secret.hpp"
#include "vault.hpp"

namespace fvault {

struct Match {
    std::size_t record = 0;
    Minutia minutia;
    double distance = 0.0;
};

struct UnlockingSet {
    std::vector<Match> matches;
    double tolerance = 0.0;

    std::size_t size() const { return matches.size(); }
};

// d/2 for random chaff. Hex vaults move genuine points up to the lattice
// cell circumradius d/sqrt(3) plus pixel rounding.
inline double default_tolerance(const Vault& v) {
    if (v.grid == GridKind::hex) return v.d / std::sqrt(3.0) + std::sqrt(0.5);
    return v.d / 2.0;
}

// Greedy global-nearest matching: repeatedly take the closest unused
// (record, minutia) pair within tau.
inline UnlockingSet build_unlocking_set(const Vault& vault, const Template& tpl, double tau) {
    struct Pair {
        double dist;
        std::size_t record;
        std::size_t minutia;
    };
    std::vector<Pair> pairs;
    for (std::size_t m = 0; m < tpl.minutiae.size(); ++m) {
        const Pixel p = tpl.minutiae[m].pixel();
        for (std::size_t r = 0; r < vault.records.size(); ++r) {
            const double dist = distance(p, vault.records[r].pixel());
            if (dist <= tau) pairs.push_back({dist, r, m});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(a.dist, a.record, a.minutia) < std::tie(b.dist, b.record, b.minutia);
    });
    std::vector<bool> record_used(vault.records.size(), false);
    std::vector<bool> minutia_used(tpl.minutiae.size(), false);
    UnlockingSet out;
    out.tolerance = tau;
    for (const Pair& p : pairs) {
        if (record_used[p.record] || minutia_used[p.minutia]) continue;
        record_used[p.record] = true;
        minutia_used[p.minutia] = true;
        out.matches.push_back({p.record, tpl.minutiae[p.minutia], p.dist});
    }
    std::sort(out.matches.begin(), out.matches.end(),
              [](const Match& a, const Match& b) { return a.record < b.record; });
    return out;
}

struct UnlockOptions {
    StopRule rule = StopRule::by_threshold(0);  // threshold 0 means k + 3
    bool crc_padding = false;                   // implied by the crc rule
    std::size_t secret_bits = 0;                // 0: full data capacity
    double tolerance = -1.0;                    // negative: default_tolerance
    std::uint64_t budget = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct UnlockResult {
    bool success = false;
    std::optional<Secret> secret;
    std::optional<Polynomial> polynomial;
    std::uint64_t candidates = 0;
    std::uint64_t interpolations = 0;
    double elapsed_ms = 0.0;
    std::uint64_t seed = 0;
};

inline std::size_t effective_threshold(const StopRule& rule, std::size_t k) {
    return rule.threshold == 0 ? k + 3 : rule.threshold;
}

inline std::size_t effective_secret_bits(std::size_t bits, std::size_t k, bool crc) {
    return bits == 0 ? secret_capacity_bits(k, crc) : bits;
}

// Candidate i interpolates the i-th seeded k-subset of the unlocking set;
// the first accepted index wins regardless of the worker count.
inline UnlockResult consensus_decode(const Vault& vault, const UnlockingSet& uset, const UnlockOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    UnlockResult result;
    result.seed = opt.seed;
    const std::size_t k = vault.k;
    const bool crc = opt.crc_padding || opt.rule.kind == StopKind::crc;
    const std::size_t bits = effective_secret_bits(opt.secret_bits, k, crc);
    const std::size_t threshold = effective_threshold(opt.rule, k);
    if (uset.size() < k || k == 0) {
        result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return result;
    }

    const Field field = vault.field();
    const GraphTest on_graph(vault);
    std::vector<Element> all_x(vault.records.size());
    for (std::size_t i = 0; i < vault.records.size(); ++i) all_x[i] = vault.abscissa(vault.records[i]);

    // Verifier-side ordinates: quiz shifts undone with the measured angle.
    std::vector<Element> ux, uy;
    for (const Match& m : uset.matches) {
        const VaultRecord& rec = vault.records[m.record];
        ux.push_back(all_x[m.record]);
        Element y = rec.value;
        if (on_graph.quiz && rec.beta)
            y = quiz_transform(field, *on_graph.quiz, quiz_recover_j(*on_graph.quiz, m.minutia.theta, *rec.beta), y);
        uy.push_back(y);
    }

    struct Worker {
        Interpolator interp;
        std::vector<std::size_t> subset;
        std::vector<Element> sx, sy;
        Polynomial g;
        std::uint64_t interpolations = 0;
        std::uint64_t hit_index = SearchOutcome::none;
        Polynomial hit;
        Secret secret;
    };
    const unsigned workers = std::max(1u, opt.workers);
    std::vector<Worker> pool(workers, Worker{Interpolator(field), {}, {}, {}, {}, 0, SearchOutcome::none, {}, {}});

    const auto outcome = search_first(opt.budget, workers, [&](std::uint64_t index, unsigned w) {
        Worker& wk = pool[w];
        sample_subset(opt.seed, index, ux.size(), k, wk.subset);
        wk.sx.clear();
        wk.sy.clear();
        for (std::size_t s : wk.subset) {
            wk.sx.push_back(ux[s]);
            wk.sy.push_back(uy[s]);
        }
        wk.interp.interpolate(wk.sx, wk.sy, wk.g.coeffs);
        ++wk.interpolations;
        if (opt.rule.kind == StopKind::threshold) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < vault.records.size(); ++i)
                if (on_graph(evaluate(field, wk.g, all_x[i]), vault.records[i].value)) ++hits;
            if (hits < threshold) return false;
        }
        DecodeResult decoded = decode_secret(wk.g, bits, crc);
        if (!decoded.ok()) return false;
        wk.hit_index = index;
        wk.hit = wk.g;
        wk.secret = std::move(decoded.secret);
        return true;
    });

    for (const Worker& wk : pool) result.interpolations += wk.interpolations;
    if (outcome.found()) {
        for (const Worker& wk : pool)
            if (wk.hit_index == outcome.first_hit) {
                result.success = true;
                result.secret = wk.secret;
                result.polynomial = wk.hit;
            }
        result.candidates = outcome.first_hit + 1;
    } else {
        result.candidates = outcome.evaluated;
    }
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline UnlockResult unlock(const Vault& vault, const Template& tpl, const UnlockOptions& opt) {
    const double tau = opt.tolerance < 0 ? default_tolerance(vault) : opt.tolerance;
    return consensus_decode(vault, build_unlocking_set(vault, tpl, tau), opt);
}

}  // namespace fvault
