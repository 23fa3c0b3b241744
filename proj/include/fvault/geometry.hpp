#pragma once

// Pixel-frame types shared by templates and vaults.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"

namespace fvault {

struct Frame {
    int width = 256;
    int height = 256;

    friend bool operator==(const Frame&, const Frame&) = default;
};

struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Orientation theta is in [0, pi).
struct Minutia {
    int x = 0;
    int y = 0;
    double theta = 0.0;

    Pixel pixel() const { return {x, y}; }

    friend bool operator==(const Minutia&, const Minutia&) = default;
};

struct Template {
    Frame frame;
    std::vector<Minutia> minutiae;

    friend bool operator==(const Template&, const Template&) = default;
};

inline double distance(Pixel a, Pixel b) {
    return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y));
}

inline bool in_frame(Pixel p, const Frame& frame) {
    return p.x >= 0 && p.y >= 0 && p.x < frame.width && p.y < frame.height;
}

// Bits reserved for the row coordinate: ceil(log2 H).
inline int row_bits(int height) {
    if (height <= 0) throw ParameterError("frame height must be positive");
    return static_cast<int>(std::bit_width(static_cast<unsigned>(height - 1)));
}

// x || y as a single integer.
inline std::uint64_t concat(Pixel p, int height) {
    return (static_cast<std::uint64_t>(p.x) << row_bits(height)) | static_cast<std::uint64_t>(p.y);
}

inline std::uint64_t max_concat(const Frame& frame) {
    return concat({frame.width - 1, frame.height - 1}, frame.height);
}

inline double min_pairwise_distance(std::span<const Pixel> points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::min(best, distance(points[i], points[j]));
    return best;
}

inline std::vector<Pixel> pixels_of(std::span<const Minutia> minutiae) {
    std::vector<Pixel> out;
    out.reserve(minutiae.size());
    for (const auto& m : minutiae) out.push_back(m.pixel());
    return out;
}

}  // namespace fvault
