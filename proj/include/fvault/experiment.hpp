#pragma once

// Synthetic enrollment + lock in one call, for experiments and tests.

#include <cstddef>
#include <cstdint>

#include "random.hpp"
#include "secret.hpp"
#include "simulate.hpp"
#include "vault.hpp"

namespace fvault {

struct ExperimentSpec {
    LockParams lock;
    std::size_t template_size = 0;  // 0: exactly t minutiae
    Frame frame;
    std::size_t secret_bits = 0;  // 0: full capacity
    std::uint32_t theta_granularity = 0;
};

inline constexpr std::uint64_t experiment_secret_stream = 0x5EC;

inline LockResult make_experiment(const ExperimentSpec& spec, std::uint64_t seed) {
    const std::size_t count = spec.template_size == 0 ? spec.lock.t : spec.template_size;
    const Template tpl = gen_template(count, spec.frame, spec.lock.d, spec.theta_granularity, seed);
    const std::size_t bits =
        spec.secret_bits == 0 ? secret_capacity_bits(spec.lock.k, spec.lock.crc) : spec.secret_bits;
    Rng rng = make_rng(seed, experiment_secret_stream);
    const Secret secret = Secret::random(bits, rng);
    return lock(tpl, secret, spec.lock, seed);
}

}  // namespace fvault
