#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "analysis.hpp"
#include "vault.hpp"

namespace fvault {

struct Preset {
    std::string_view name;
    std::uint32_t q = 65537;
    std::size_t k = 0;
    std::size_t t = 0;
    std::size_t r = 0;
    std::size_t threshold = 0;  // D
    int d = 11;
    bool crc = false;
    std::uint32_t quiz_n = 0;

    LockParams lock_params() const { return {q, k, t, r, d, crc, GridKind::random, quiz_n}; }

    EstimateParams estimate_params() const { return {q, k, t, r, threshold, quiz_n, 1.0}; }
};

inline constexpr std::array<Preset, 3> builtin_presets{{
    {"clancy", 65537, 14, 38, 313, 17, 11, false, 0},
    {"uludag", 65537, 8, 25, 200, 11, 11, true, 0},
    {"small-attack", 65537, 6, 15, 60, 9, 11, false, 0},
}};

inline std::optional<Preset> find_preset(std::string_view name) {
    for (const auto& p : builtin_presets)
        if (p.name == name) return p;
    return std::nullopt;
}

}  // namespace fvault
