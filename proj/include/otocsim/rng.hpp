// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace otocsim {

/// SplitMix64 finalizer. Used for seed derivation only, never as a stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of instance `index` under `master`. Instance i is reproducible alone.
constexpr std::uint64_t derive_instance_seed(std::uint64_t master,
                                             std::uint64_t index) noexcept
{
    return splitmix64(master ^ splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Stream kinds derived from one circuit seed.
enum class StreamKind : std::uint64_t { two_qubit = 0, single_qubit = 1, shot_noise = 2 };

/// Seed of the substream owning (layer, slot) of a circuit with seed `master`.
constexpr std::uint64_t derive_slot_seed(std::uint64_t master, std::uint64_t layer,
                                         std::uint64_t slot,
                                         StreamKind kind = StreamKind::two_qubit) noexcept
{
    const std::uint64_t key =
        splitmix64(splitmix64(layer) ^ (slot * 0xd1b54a32d192ed03ULL) ^
                   (static_cast<std::uint64_t>(kind) << 62));
    return splitmix64(master ^ key);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal by Box-Muller. The spare value is cached.
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace otocsim
