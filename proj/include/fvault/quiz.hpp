#pragma once

// Orientation quiz: each genuine record stores beta = alpha_snapped + j*pi/n
// (mod pi) and an ordinate shifted by -j*step, so reading the true value
// requires the transform index j, which only a holder of the minutia
// orientation can recover.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "random.hpp"

namespace fvault {

struct QuizParams {
    std::uint32_t n = 0;
    std::uint32_t step = 0;  // floor(q / n)

    static QuizParams make(const Field& field, std::uint32_t n) {
        if (n < 2) throw ParameterError("quiz granularity n must be at least 2");
        if (n > field.modulus()) throw ParameterError("quiz granularity n exceeds q");
        return {n, field.modulus() / n};
    }

    double bits() const { return std::log2(static_cast<double>(n)); }
};

inline double wrap_angle(double a) {
    a = std::fmod(a, std::numbers::pi);
    if (a < 0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a = 0.0;
    return a;
}

// Index m of the grid angle m*pi/n nearest to alpha.
inline std::uint32_t angle_grid_index(double alpha, std::uint32_t n) {
    const double m = std::round(wrap_angle(alpha) * n / std::numbers::pi);
    return static_cast<std::uint32_t>(static_cast<long long>(m) % n);
}

inline double grid_angle(std::uint32_t m, std::uint32_t n) { return m * std::numbers::pi / n; }

inline double snap_angle(double alpha, std::uint32_t n) { return grid_angle(angle_grid_index(alpha, n), n); }

// T_j(Y) = Y + j*step.
inline Element quiz_transform(const Field& field, const QuizParams& p, std::uint32_t j, Element stored) {
    return field.add(stored, field.element(static_cast<std::uint64_t>(j) * p.step));
}

struct QuizEncoding {
    Element stored;
    double beta = 0.0;
};

inline QuizEncoding quiz_encode(const Field& field, const QuizParams& p, double alpha, std::uint32_t j, Element f_value) {
    if (j >= p.n) throw ParameterError("quiz index j out of range");
    const std::uint32_t m = angle_grid_index(alpha, p.n);
    QuizEncoding enc;
    enc.beta = grid_angle((m + j) % p.n, p.n);
    enc.stored = field.sub(f_value, field.element(static_cast<std::uint64_t>(j) * p.step));
    return enc;
}

inline std::uint32_t quiz_recover_j(const QuizParams& p, double alpha_measured, double beta) {
    const double turns = wrap_angle(beta - alpha_measured) * p.n / std::numbers::pi;
    return static_cast<std::uint32_t>(static_cast<long long>(std::round(turns)) % p.n);
}

// Chaff beta: uniform over the same grid the genuine betas live on.
inline double quiz_random_beta(const QuizParams& p, Rng& rng) {
    std::uniform_int_distribution<std::uint32_t> dist(0, p.n - 1);
    return grid_angle(dist(rng), p.n);
}

// The n ordinates a chaff record must avoid so that no T_j maps it onto f.
inline std::vector<Element> quiz_preimages(const Field& field, const QuizParams& p, Element f_value) {
    std::vector<Element> out;
    out.reserve(p.n);
    for (std::uint32_t j = 0; j < p.n; ++j)
        out.push_back(field.sub(f_value, field.element(static_cast<std::uint64_t>(j) * p.step)));
    return out;
}

// Extra attacker work in bits: k * log2(n).
inline double quiz_attack_multiplier_log2(std::size_t k, std::uint32_t n) {
    if (n <= 1) return 0.0;
    return static_cast<double>(k) * std::log2(static_cast<double>(n));
}

}  // namespace fvault
