#pragma once

// Closed-form attack cost estimates. Binomials are exact big integers;
// logarithms are taken from the exact values, never from floating-point
// binomials.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "errors.hpp"
#include "quiz.hpp"

namespace fvault {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (unsigned i = 0; i < k; ++i) {
        c *= n - i;
        c /= i + 1;
    }
    return c;
}

inline double log2_big(const BigInt& v) {
    if (v <= 0) throw ParameterError("log2 of a non-positive integer");
    const unsigned msb = boost::multiprecision::msb(v);
    if (msb < 64) return std::log2(static_cast<long double>(static_cast<std::uint64_t>(v)));
    const unsigned shift = msb - 63;
    const auto top = static_cast<std::uint64_t>(BigInt(v >> shift));
    return static_cast<double>(std::log2(static_cast<long double>(top)) + shift);
}

struct Ratio {
    BigInt num;
    BigInt den;

    double log2() const { return log2_big(num) - log2_big(den); }
    double value() const { return std::exp2(log2()); }
};

// Expected draws until a k-subset lies entirely in the genuine set.
inline Ratio trial_odds(std::size_t r, std::size_t t, std::size_t k) {
    if (!(0 < k && k <= t && t <= r)) throw ParameterError("trial odds need 0 < k <= t <= r");
    return {binomial(static_cast<unsigned>(r), static_cast<unsigned>(k)),
            binomial(static_cast<unsigned>(t), static_cast<unsigned>(k))};
}

// log2 of (r/t)^k, the usual approximation of trial_odds.
inline double log2_trials_approx(std::size_t r, std::size_t t, std::size_t k) {
    return static_cast<double>(k) * (std::log2(static_cast<double>(r)) - std::log2(static_cast<double>(t)));
}

struct AttackBound {
    double log2_bound = 0.0;           // 8 r k (r/t)^k
    double log2_trial_estimate = 0.0;  // 1.1 (r/t)^k
};

inline AttackBound attack_cost_bound(std::size_t r, std::size_t t, std::size_t k) {
    if (!(r >= t && t >= k && k >= 1)) throw ParameterError("attack bound needs r >= t >= k >= 1");
    const double scaled = log2_trials_approx(r, t, k);
    return {std::log2(8.0 * static_cast<double>(r) * static_cast<double>(k)) + scaled, std::log2(1.1) + scaled};
}

// Threshold-criterion brute force: C(r,D)/C(t,D).
inline Ratio threshold_attack_complexity(std::size_t r, std::size_t t, std::size_t d) {
    if (!(d <= t && t <= r)) throw ParameterError("threshold complexity needs D <= t <= r");
    return {binomial(static_cast<unsigned>(r), static_cast<unsigned>(d)),
            binomial(static_cast<unsigned>(t), static_cast<unsigned>(d))};
}

// log2 of (mu/3) q^(k-t) (r/t)^t; mu = 1 is the supremum of the admissible
// range and stands for the limit mu -> 1.
inline double spurious_polynomial_bound_log2(std::uint64_t q, std::size_t r, std::size_t t, std::size_t k,
                                             double mu = 1.0) {
    if (!(mu > 0 && mu <= 1)) throw ParameterError("mu must lie in (0, 1)");
    if (t == 0 || r == 0) throw ParameterError("r and t must be positive");
    return std::log2(mu / 3.0) +
           (static_cast<double>(k) - static_cast<double>(t)) * std::log2(static_cast<double>(q)) +
           static_cast<double>(t) * (std::log2(static_cast<double>(r)) - std::log2(static_cast<double>(t)));
}

// Point checks per interpolation, 6.5 log2(k)^2, floored at one.
inline double interpolation_unit(std::size_t k) {
    const double l = std::log2(static_cast<double>(k));
    return std::max(1.0, 6.5 * l * l);
}

// Noiseless verifier: one interpolation plus r point checks, in
// interpolation units.
inline double genuine_cost_log2(std::size_t r, std::size_t k) {
    return std::log2(1.0 + static_cast<double>(r) / interpolation_unit(k));
}

inline double security_factor_log2(double attack_log2, double genuine_log2) { return attack_log2 - genuine_log2; }

struct EstimateParams {
    std::uint64_t q = 65537;
    std::size_t k = 0;
    std::size_t t = 0;
    std::size_t r = 0;
    std::size_t d_threshold = 0;  // D
    std::uint32_t quiz_n = 0;
    double mu = 1.0;
};

struct ComplexityEstimate {
    EstimateParams params;
    double log2_trials_exact = 0.0;
    double log2_trials_approx = 0.0;
    double log2_trial_estimate = 0.0;  // with the 1.1 factor
    double log2_R_bound = 0.0;         // includes k log2 n on quiz vaults
    double log2_Cbf = 0.0;
    double log2_spurious = 0.0;
    double log2_genuine_cost = 0.0;
    double log2_F = 0.0;
    double log2_quiz_multiplier = 0.0;
};

inline ComplexityEstimate estimate(const EstimateParams& p) {
    ComplexityEstimate e;
    e.params = p;
    e.log2_trials_exact = trial_odds(p.r, p.t, p.k).log2();
    e.log2_trials_approx = log2_trials_approx(p.r, p.t, p.k);
    const AttackBound bound = attack_cost_bound(p.r, p.t, p.k);
    e.log2_quiz_multiplier = quiz_attack_multiplier_log2(p.k, p.quiz_n);
    e.log2_trial_estimate = bound.log2_trial_estimate;
    e.log2_R_bound = bound.log2_bound + e.log2_quiz_multiplier;
    e.log2_Cbf = threshold_attack_complexity(p.r, p.t, p.d_threshold).log2();
    e.log2_spurious = spurious_polynomial_bound_log2(p.q, p.r, p.t, p.k, p.mu);
    e.log2_genuine_cost = genuine_cost_log2(p.r, p.k);
    e.log2_F = security_factor_log2(e.log2_R_bound, e.log2_genuine_cost);
    return e;
}

// Independent vaults (one per finger) must all be broken: costs multiply.
inline double combined_attack_log2(std::span<const ComplexityEstimate> vaults) {
    double total = 0.0;
    for (const auto& e : vaults) total += e.log2_R_bound;
    return total;
}

}  // namespace fvault
