#pragma once

// Synthetic templates and a recapture noise model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "errors.hpp"
#include "geometry.hpp"
#include "quiz.hpp"
#include "random.hpp"
#include "vault.hpp"

namespace fvault {

struct RecaptureModel {
    double jitter_sigma = 2.0;  // per-axis Gaussian, pixels
    double miss_rate = 0.1;
    double spurious_rate = 3.0;  // Poisson mean of extra minutiae
    double angle_sigma = std::numbers::pi / 32;

    static RecaptureModel noiseless() { return {0.0, 0.0, 0.0, 0.0}; }

    void validate() const {
        if (!(jitter_sigma >= 0) || !(angle_sigma >= 0)) throw ParameterError("noise sigmas must be non-negative");
        if (!(miss_rate >= 0 && miss_rate <= 1)) throw ParameterError("miss rate must lie in [0, 1]");
        if (!(spurious_rate >= 0)) throw ParameterError("spurious rate must be non-negative");
    }
};

// Uniform minutiae at mutual distance >= d_min. theta_granularity g > 0
// restricts orientations to multiples of pi/g; 0 means continuous.
inline Template gen_template(std::size_t count, const Frame& frame, double d_min, std::uint32_t theta_granularity,
                             std::uint64_t seed) {
    if (frame.width <= 0 || frame.height <= 0) throw ParameterError("frame must be non-empty");
    Rng rng = make_rng(seed, streams::template_gen);
    std::uniform_int_distribution<int> px(0, frame.width - 1);
    std::uniform_int_distribution<int> py(0, frame.height - 1);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    SpacingIndex index(frame, d_min);
    Template tpl;
    tpl.frame = frame;
    tpl.minutiae.reserve(count);
    while (tpl.minutiae.size() < count) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < chaff_retry_budget; ++attempt) {
            const Pixel p{px(rng), py(rng)};
            if (!index.admissible(p)) continue;
            index.insert(p);
            double theta = angle(rng);
            if (theta_granularity > 0) theta = snap_angle(theta, theta_granularity);
            tpl.minutiae.push_back({p.x, p.y, theta});
            placed = true;
            break;
        }
        if (!placed)
            throw PlacementError("template placement saturated after " + std::to_string(tpl.minutiae.size()) +
                                     " of " + std::to_string(count) + " minutiae",
                                 tpl.minutiae.size(), count);
    }
    return tpl;
}

inline Template recapture(const Template& tpl, const RecaptureModel& model, std::uint64_t seed) {
    model.validate();
    Rng rng = make_rng(seed, streams::recapture);
    std::bernoulli_distribution miss(model.miss_rate);
    std::normal_distribution<double> jitter(0.0, 1.0);
    Template out;
    out.frame = tpl.frame;
    for (const Minutia& m : tpl.minutiae) {
        if (miss(rng)) continue;
        const double dx = model.jitter_sigma * jitter(rng);
        const double dy = model.jitter_sigma * jitter(rng);
        const double da = model.angle_sigma * jitter(rng);
        Minutia moved;
        moved.x = std::clamp(static_cast<int>(std::lround(m.x + dx)), 0, tpl.frame.width - 1);
        moved.y = std::clamp(static_cast<int>(std::lround(m.y + dy)), 0, tpl.frame.height - 1);
        moved.theta = model.angle_sigma == 0.0 ? m.theta : wrap_angle(m.theta + da);
        out.minutiae.push_back(moved);
    }
    if (model.spurious_rate > 0) {
        std::poisson_distribution<int> extra(model.spurious_rate);
        std::uniform_int_distribution<int> px(0, tpl.frame.width - 1);
        std::uniform_int_distribution<int> py(0, tpl.frame.height - 1);
        std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
        const int n = extra(rng);
        for (int i = 0; i < n; ++i) {
            const int x = px(rng);
            const int y = py(rng);
            out.minutiae.push_back({x, y, angle(rng)});
        }
    }
    return out;
}

}  // namespace fvault
