#pragma once

// Packing of a bit-string secret into polynomial coefficients.
//
// The secret is read as a big-endian integer of `bits` bits and split into
// 16-bit chunks; chunk 0 (least significant) is the constant term. In CRC
// mode the highest coefficient k-1 carries CRC-16/CCITT-FALSE of the secret
// bytes and the data occupies coefficients 0..k-2.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crc16.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace fvault {

struct Secret {
    std::vector<std::uint8_t> bytes;  // ceil(bits / 8), big-endian
    std::size_t bits = 0;

    friend bool operator==(const Secret&, const Secret&) = default;

    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (auto b : bytes) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xF]);
        }
        return out;
    }

    // bits == 0 means 4 bits per hex digit.
    static Secret from_hex(std::string_view hex, std::size_t bits = 0) {
        if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
        if (hex.empty()) throw ParameterError("empty secret");
        std::string padded(hex);
        if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw ParameterError(std::string("invalid hex digit '") + c + "' in secret");
        };
        Secret s;
        for (std::size_t i = 0; i < padded.size(); i += 2)
            s.bytes.push_back(static_cast<std::uint8_t>(nibble(padded[i]) << 4 | nibble(padded[i + 1])));
        s.bits = bits == 0 ? hex.size() * 4 : bits;
        const std::size_t need = (s.bits + 7) / 8;
        if (need > s.bytes.size()) s.bytes.insert(s.bytes.begin(), need - s.bytes.size(), 0);
        while (s.bytes.size() > need) {
            if (s.bytes.front() != 0) throw ParameterError("secret hex has more than " + std::to_string(s.bits) + " bits");
            s.bytes.erase(s.bytes.begin());
        }
        if (!s.top_bits_clear()) throw ParameterError("secret hex has more than " + std::to_string(s.bits) + " bits");
        return s;
    }

    static Secret random(std::size_t bits, Rng& rng) {
        Secret s;
        s.bits = bits;
        s.bytes.resize((bits + 7) / 8);
        std::uniform_int_distribution<int> byte(0, 255);
        for (auto& b : s.bytes) b = static_cast<std::uint8_t>(byte(rng));
        s.mask_top_bits();
        return s;
    }

    bool top_bits_clear() const {
        const std::size_t spare = bytes.size() * 8 - bits;
        return spare == 0 || bytes.empty() || (bytes.front() >> (8 - spare)) == 0;
    }

    void mask_top_bits() {
        const std::size_t spare = bytes.size() * 8 - bits;
        if (spare != 0 && !bytes.empty()) bytes.front() &= static_cast<std::uint8_t>(0xFF >> spare);
    }
};

inline constexpr std::size_t chunk_bits = 16;

inline std::size_t data_coefficients(std::size_t k, bool crc) { return crc ? (k == 0 ? 0 : k - 1) : k; }

inline std::size_t secret_capacity_bits(std::size_t k, bool crc) { return chunk_bits * data_coefficients(k, crc); }

// Minimal number of field elements holding `bits` bits: ceil(bits / log2 q).
inline std::size_t min_elements(std::size_t bits, std::uint32_t q) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(bits) / std::log2(static_cast<double>(q))));
}

inline Polynomial encode_secret(const Field& field, const Secret& s, std::size_t k, bool crc) {
    if (field.modulus() <= 0xFFFF) throw ParameterError("secret encoding needs q > 2^16");
    if (k == 0 || (crc && k < 2)) throw ParameterError("k too small for the encoding mode");
    if (s.bits == 0 || s.bytes.size() != (s.bits + 7) / 8) throw ParameterError("malformed secret");
    const std::size_t capacity = secret_capacity_bits(k, crc);
    if (s.bits > capacity)
        throw CapacityError("secret of " + std::to_string(s.bits) + " bits exceeds capacity " + std::to_string(capacity) +
                            " for k=" + std::to_string(k) + (crc ? " with CRC" : ""));
    Polynomial f;
    f.coeffs.assign(k, Element{0});
    const std::size_t n = s.bytes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t from_end = n - 1 - i;  // byte significance
        const std::size_t chunk = from_end / 2;
        const std::uint32_t shift = (from_end % 2) * 8;
        f.coeffs[chunk].value |= static_cast<std::uint32_t>(s.bytes[i]) << shift;
    }
    if (crc) f.coeffs[k - 1] = Element{crc16_ccitt_false(s.bytes)};
    return f;
}

enum class DecodeStatus { ok, malformed, crc_mismatch };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::malformed;
    Secret secret;

    bool ok() const { return status == DecodeStatus::ok; }
};

// Reads the low `bits` bits of the data chunks; padding coefficients are
// ignored, so in CRC mode every polynomial with 16-bit data chunks is
// accepted exactly when its top coefficient matches the checksum.
inline DecodeResult decode_secret(const Polynomial& f, std::size_t bits, bool crc) {
    const std::size_t k = f.size();
    if (bits == 0 || bits > secret_capacity_bits(k, crc))
        throw CapacityError("secret length " + std::to_string(bits) + " inconsistent with k=" + std::to_string(k));
    DecodeResult result;
    const std::size_t n = (bits + 7) / 8;
    const std::size_t chunks = (n + 1) / 2;
    for (std::size_t c = 0; c < chunks; ++c)
        if (f.coeffs[c].value > 0xFFFF) return result;
    result.secret.bits = bits;
    result.secret.bytes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t from_end = n - 1 - i;
        result.secret.bytes[i] = static_cast<std::uint8_t>(f.coeffs[from_end / 2].value >> ((from_end % 2) * 8));
    }
    result.secret.mask_top_bits();
    if (crc && f.coeffs[k - 1].value != crc16_ccitt_false(result.secret.bytes)) {
        result.status = DecodeStatus::crc_mismatch;
        return result;
    }
    result.status = DecodeStatus::ok;
    return result;
}

}  // namespace fvault
