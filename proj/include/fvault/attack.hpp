#pragma once

// Attacks on a published vault: random k-subset brute force with a
// vault-wide graph scan, exhaustive spurious-polynomial counting for tiny
// fields, and the multi-vault correlation attack on random chaff.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "quiz.hpp"
#include "search.hpp"
#include "secret.hpp"
#include "vault.hpp"

namespace fvault {

enum class SubsetOrder { random, lexicographic };

struct AttackOptions {
    StopRule rule = StopRule::by_threshold(0);  // threshold 0 means k + 3
    bool crc_padding = false;
    std::size_t secret_bits = 0;  // 0: full data capacity
    std::uint64_t budget = 0;     // 0: default_attack_budget with t = k
    unsigned workers = 1;
    std::uint64_t seed = 0;
    SubsetOrder order = SubsetOrder::random;
};

struct AttackReport {
    bool success = false;
    std::optional<Secret> recovered_secret;
    std::optional<Polynomial> polynomial;
    std::uint64_t trials = 0;
    std::uint64_t interpolations = 0;
    std::uint64_t point_checks = 0;
    double elapsed_ms = 0.0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

// 20 * C(r,k)/C(t,k): the all-genuine draw is missed with probability
// about e^-20 under the geometric trial model.
inline std::uint64_t default_attack_budget(std::size_t r, std::size_t t, std::size_t k) {
    const double odds = static_cast<double>(binomial_u64(r, k)) / static_cast<double>(binomial_u64(t, k));
    const double budget = std::ceil(20.0 * odds);
    if (!(budget < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(budget));
}

// Each trial draws a k-subset T, interpolates g_T, scans the remaining
// records for points on the graph and discards T when none is found.
// Threshold rule: keep scanning and accept once D points (T included) lie
// on g_T. CRC rule: after the first extra point, accept if the checksum of
// the decoded secret verifies. On quiz vaults every one of the n^k shift
// assignments of T is tried, and a record counts as a hit under any shift.
inline AttackReport brute_force_attack(const Vault& vault, const AttackOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t k = vault.k;
    const std::size_t r = vault.size();
    if (k == 0 || r < k) throw ParameterError("vault must hold at least k records");
    const bool crc = opt.crc_padding || opt.rule.kind == StopKind::crc;
    const std::size_t threshold = opt.rule.threshold == 0 ? k + 3 : opt.rule.threshold;
    if (opt.rule.kind == StopKind::threshold && (threshold > r || threshold < k))
        throw ParameterError("threshold D must lie in [k, r]");
    const std::size_t bits = opt.secret_bits == 0 ? secret_capacity_bits(k, crc) : opt.secret_bits;
    std::uint64_t budget = opt.budget == 0 ? default_attack_budget(r, k, k) : opt.budget;
    if (opt.order == SubsetOrder::lexicographic) budget = std::min(budget, binomial_u64(r, k));

    const Field field = vault.field();
    const GraphTest on_graph(vault);
    const std::uint32_t shifts = on_graph.quiz ? on_graph.quiz->n : 1;
    std::vector<Element> xs(r), ys(r);
    for (std::size_t i = 0; i < r; ++i) {
        xs[i] = vault.abscissa(vault.records[i]);
        ys[i] = vault.records[i].value;
    }

    struct Worker {
        Interpolator interp;
        std::vector<std::size_t> subset;
        std::vector<char> in_subset;
        std::vector<std::uint32_t> shift;
        std::vector<Element> sx, sy;
        Polynomial g;
        std::uint64_t interpolations = 0;
        std::uint64_t point_checks = 0;
        std::uint64_t hit_index = SearchOutcome::none;
        Polynomial hit;
        Secret secret;
    };
    const unsigned workers = std::max(1u, opt.workers);
    std::vector<Worker> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.push_back(Worker{Interpolator(field), {}, std::vector<char>(r, 0), std::vector<std::uint32_t>(k, 0),
                              std::vector<Element>(k), std::vector<Element>(k), {}, 0, 0, SearchOutcome::none, {}, {}});
    }

    // Shifted ordinates only pin the constant term of the candidate down to a
    // multiple of the quiz step: g + c*step also meets every genuine record
    // whose own shift absorbs c. Keep the offset with the most vault hits.
    auto settle_offset = [&](Polynomial& g) {
        const Element base = g.coeffs[0];
        const long n = static_cast<long>(shifts);
        std::size_t best_hits = 0;
        Element best = base;
        for (long c = 0; c < 2 * n - 1; ++c) {
            const long off = c % 2 == 0 ? c / 2 : -(c + 1) / 2;  // 0, -1, 1, -2, 2, ...
            const Element delta = field.element(static_cast<std::uint64_t>(off < 0 ? -off : off) * on_graph.quiz->step);
            g.coeffs[0] = off < 0 ? field.sub(base, delta) : field.add(base, delta);
            std::size_t h = 0;
            for (std::size_t i = 0; i < r; ++i)
                if (on_graph(evaluate(field, g, xs[i]), ys[i])) ++h;
            if (h > best_hits) {
                best_hits = h;
                best = g.coeffs[0];
            }
        }
        g.coeffs[0] = best;
    };

    // Steps 2-4 for one interpolated candidate.
    auto confirm = [&](Worker& wk) -> bool {
        std::size_t hits = 0;
        std::size_t remaining = r - k;
        for (std::size_t i = 0; i < r; ++i) {
            if (wk.in_subset[i]) continue;
            --remaining;
            ++wk.point_checks;
            if (on_graph(evaluate(field, wk.g, xs[i]), ys[i])) {
                ++hits;
                if (opt.rule.kind == StopKind::crc) break;
                if (k + hits >= threshold) break;
            } else if (opt.rule.kind == StopKind::threshold && k + hits + remaining < threshold) {
                return false;
            }
        }
        if (hits == 0 && !(opt.rule.kind == StopKind::threshold && k >= threshold)) return false;
        if (opt.rule.kind == StopKind::threshold && k + hits < threshold) return false;
        if (shifts > 1) settle_offset(wk.g);
        DecodeResult decoded = decode_secret(wk.g, bits, crc);
        if (!decoded.ok()) return false;
        wk.hit = wk.g;
        wk.secret = std::move(decoded.secret);
        return true;
    };

    const auto outcome = search_first(budget, workers, [&](std::uint64_t index, unsigned w) {
        Worker& wk = pool[w];
        if (opt.order == SubsetOrder::lexicographic)
            unrank_subset(index, r, k, wk.subset);
        else
            sample_subset(opt.seed, index, r, k, wk.subset);
        for (std::size_t m = 0; m < k; ++m) {
            wk.in_subset[wk.subset[m]] = 1;
            wk.sx[m] = xs[wk.subset[m]];
        }
        std::fill(wk.shift.begin(), wk.shift.end(), 0u);
        bool accepted = false;
        for (;;) {
            for (std::size_t m = 0; m < k; ++m) {
                const Element y = ys[wk.subset[m]];
                wk.sy[m] = shifts == 1 ? y : quiz_transform(field, *on_graph.quiz, wk.shift[m], y);
            }
            wk.interp.interpolate(wk.sx, wk.sy, wk.g.coeffs);
            ++wk.interpolations;
            if (confirm(wk)) {
                accepted = true;
                break;
            }
            // Next shift assignment, odometer order.
            std::size_t m = 0;
            while (m < k && ++wk.shift[m] == shifts) wk.shift[m++] = 0;
            if (m == k) break;
        }
        for (std::size_t s : wk.subset) wk.in_subset[s] = 0;
        if (accepted) wk.hit_index = index;
        return accepted;
    });

    AttackReport report;
    report.seed = opt.seed;
    report.workers = workers;
    for (const Worker& wk : pool) {
        report.interpolations += wk.interpolations;
        report.point_checks += wk.point_checks;
    }
    if (outcome.found()) {
        report.trials = outcome.first_hit + 1;
        for (const Worker& wk : pool)
            if (wk.hit_index == outcome.first_hit) {
                report.success = true;
                report.polynomial = wk.hit;
                report.recovered_secret = wk.secret;
            }
    } else {
        report.trials = outcome.evaluated;
    }
    report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

inline constexpr std::uint64_t exhaustive_limit = 10'000'000;

// Exact number of polynomials of length k whose graph contains at least
// `min_hits` vault records, by enumerating all q^k coefficient vectors.
inline std::uint64_t count_matching_polynomials(const Vault& vault, std::size_t min_hits) {
    const std::size_t k = vault.k;
    const std::uint64_t q = vault.q;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        total *= q;
        if (total > exhaustive_limit)
            throw ParameterError("q^k exceeds the exhaustive enumeration limit of " + std::to_string(exhaustive_limit));
    }
    if (min_hits > vault.size()) return 0;
    const Field field = vault.field();
    const GraphTest on_graph(vault);
    std::vector<Element> xs, ys;
    for (const auto& rec : vault.records) {
        xs.push_back(vault.abscissa(rec));
        ys.push_back(rec.value);
    }
    Polynomial g;
    g.coeffs.assign(k, Element{0});
    std::uint64_t count = 0;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = 0; i < k; ++i) {
            g.coeffs[i] = Element{static_cast<std::uint32_t>(rest % q)};
            rest /= q;
        }
        std::size_t hits = 0;
        for (std::size_t i = 0; i < xs.size() && hits < min_hits; ++i)
            if (on_graph(evaluate(field, g, xs[i]), ys[i])) ++hits;
        if (hits >= min_hits) ++count;
    }
    return count;
}

// Vault over a tiny prime field for exhaustive counting: abscissae are the
// rows 0..q-1 of a 1 x q frame, t records lie on a random f and the other
// r - t carry ordinates off the graph.
inline Vault small_field_vault(std::uint32_t q, std::size_t r, std::size_t t, std::size_t k, std::uint64_t seed) {
    const Field field(q);
    if (!(k >= 1 && t <= r && r <= q)) throw ParameterError("small vault needs k >= 1 and t <= r <= q");
    Rng rng = seeded_rng(seed);
    Vault v;
    v.q = q;
    v.k = k;
    v.d = 1;
    v.frame = Frame{1, static_cast<int>(q)};
    std::vector<int> rows(q);
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    Polynomial f;
    for (std::size_t i = 0; i < k; ++i) f.coeffs.push_back(field.uniform(rng));
    for (std::size_t i = 0; i < r; ++i) {
        const Element x{static_cast<std::uint32_t>(rows[i])};
        const Element y = evaluate(field, f, x);
        v.records.push_back({0, rows[i], i < t ? y : draw_excluding(field, {y}, rng), std::nullopt});
    }
    return v;
}

// Coordinates of the first vault that recur within eps in every other vault.
inline std::vector<Pixel> correlate_vaults(std::span<const Vault> vaults, double eps) {
    std::vector<Pixel> out;
    if (vaults.empty()) return out;
    for (const auto& rec : vaults.front().records) {
        const Pixel p = rec.pixel();
        const bool everywhere = std::all_of(vaults.begin() + 1, vaults.end(), [&](const Vault& other) {
            return std::any_of(other.records.begin(), other.records.end(),
                               [&](const VaultRecord& o) { return distance(p, o.pixel()) <= eps; });
        });
        if (everywhere) out.push_back(p);
    }
    return out;
}

}  // namespace fvault
