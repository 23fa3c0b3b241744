#pragma once

// Prime field F_q and dense polynomials over it.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "random.hpp"

namespace fvault {

struct Element {
    std::uint32_t value = 0;

    friend constexpr bool operator==(Element, Element) = default;
    friend constexpr auto operator<=>(Element, Element) = default;
};

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t p = 3; p * p <= n; p += 2)
        if (n % p == 0) return false;
    return true;
}

class Field {
public:
    static constexpr std::uint32_t default_modulus = 65537;
    static constexpr std::uint32_t max_modulus = 1u << 31;

    explicit Field(std::uint32_t q = default_modulus) : q_(q) {
        if (q >= max_modulus || !is_prime(q))
            throw ParameterError("field modulus must be a prime below 2^31, got " + std::to_string(q));
    }

    std::uint32_t modulus() const { return q_; }

    Element element(std::uint64_t v) const { return {static_cast<std::uint32_t>(v % q_)}; }

    Element add(Element a, Element b) const {
        std::uint32_t s = a.value + b.value;
        return {s >= q_ ? s - q_ : s};
    }

    Element sub(Element a, Element b) const {
        return {a.value >= b.value ? a.value - b.value : a.value + q_ - b.value};
    }

    Element neg(Element a) const { return {a.value == 0 ? 0 : q_ - a.value}; }

    Element mul(Element a, Element b) const {
        return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.value) * b.value % q_)};
    }

    Element inv(Element a) const {
        if (a.value == 0) throw ArithmeticError("inversion of zero in F_" + std::to_string(q_));
        std::int64_t r0 = q_, r1 = a.value, s0 = 0, s1 = 1;
        while (r1 != 0) {
            std::int64_t quot = r0 / r1;
            std::int64_t r2 = r0 - quot * r1;
            r0 = r1;
            r1 = r2;
            std::int64_t s2 = s0 - quot * s1;
            s0 = s1;
            s1 = s2;
        }
        if (s0 < 0) s0 += q_;
        return {static_cast<std::uint32_t>(s0)};
    }

    Element div(Element a, Element b) const {
        if (b.value == 0) throw ArithmeticError("division by zero in F_" + std::to_string(q_));
        return mul(a, inv(b));
    }

    Element pow(Element a, std::uint64_t e) const {
        Element result{1 % q_};
        while (e != 0) {
            if (e & 1) result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }

    Element uniform(Rng& rng) const {
        std::uniform_int_distribution<std::uint32_t> dist(0, q_ - 1);
        return {dist(rng)};
    }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::uint32_t q_;
};

// Coefficients constant-term first; the length is the vault degree bound k.
struct Polynomial {
    std::vector<Element> coeffs;

    std::size_t size() const { return coeffs.size(); }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

inline Element evaluate(const Field& field, std::span<const Element> coeffs, Element x) {
    Element acc{0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = field.add(field.mul(acc, x), *it);
    return acc;
}

inline Element evaluate(const Field& field, const Polynomial& f, Element x) {
    return evaluate(field, std::span<const Element>(f.coeffs), x);
}

// Lagrange interpolation through the master polynomial M(X) = prod (X - x_i):
// the i-th basis numerator is M / (X - x_i), its value at x_i is the
// barycentric weight. O(k^2) field operations and a single inversion.
// Scratch buffers are kept so repeated calls do not allocate.
class Interpolator {
public:
    explicit Interpolator(const Field& field) : field_(field) {}

    void interpolate(std::span<const Element> xs, std::span<const Element> ys, std::vector<Element>& out) {
        const std::size_t k = xs.size();
        if (k == 0 || ys.size() != k)
            throw PreconditionError("interpolation needs k >= 1 points with matching ordinates");

        master_.assign(k + 1, Element{0});
        master_[0] = Element{1};
        for (std::size_t i = 0; i < k; ++i) {
            const Element neg_x = field_.neg(xs[i]);
            for (std::size_t j = i + 1; j > 0; --j)
                master_[j] = field_.add(master_[j - 1], field_.mul(master_[j], neg_x));
            master_[0] = field_.mul(master_[0], neg_x);
        }

        quotients_.resize(k * k);
        weights_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            Element* quot = &quotients_[i * k];
            quot[k - 1] = master_[k];
            for (std::size_t j = k - 1; j > 0; --j)
                quot[j - 1] = field_.add(master_[j], field_.mul(xs[i], quot[j]));
            weights_[i] = evaluate(field_, std::span<const Element>(quot, k), xs[i]);
            if (weights_[i].value == 0)
                throw PreconditionError("interpolation abscissae must be pairwise distinct");
        }

        // Batch inversion of the weights.
        prefix_.resize(k);
        Element running{1};
        for (std::size_t i = 0; i < k; ++i) {
            prefix_[i] = running;
            running = field_.mul(running, weights_[i]);
        }
        Element inv_running = field_.inv(running);
        for (std::size_t i = k; i-- > 0;) {
            const Element inv_w = field_.mul(inv_running, prefix_[i]);
            inv_running = field_.mul(inv_running, weights_[i]);
            weights_[i] = inv_w;
        }

        out.assign(k, Element{0});
        for (std::size_t i = 0; i < k; ++i) {
            const Element scale = field_.mul(ys[i], weights_[i]);
            if (scale.value == 0) continue;
            const Element* quot = &quotients_[i * k];
            for (std::size_t j = 0; j < k; ++j)
                out[j] = field_.add(out[j], field_.mul(scale, quot[j]));
        }
    }

    const Field& field() const { return field_; }

private:
    Field field_;
    std::vector<Element> master_;
    std::vector<Element> quotients_;
    std::vector<Element> weights_;
    std::vector<Element> prefix_;
};

inline Polynomial interpolate(const Field& field, std::span<const Element> xs, std::span<const Element> ys) {
    Interpolator interp(field);
    Polynomial result;
    interp.interpolate(xs, ys, result.coeffs);
    return result;
}

inline Polynomial random_polynomial(const Field& field, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw ParameterError("polynomial length k must be at least 1");
    Rng rng = seeded_rng(seed);
    Polynomial f;
    f.coeffs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) f.coeffs.push_back(field.uniform(rng));
    return f;
}

}  // namespace fvault
