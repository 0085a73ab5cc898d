#pragma once

#include <cstdint>
#include <random>

namespace spikedet {

// Seeded random source used by every stochastic component. Gaussian draws
// come from a Box-Muller transform over the raw uniform stream, so the
// produced sequences depend only on the seed, not on the standard library's
// normal_distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal draw, N(0, 1).
    double gaussian();

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Counter-based stream split: maps (master, a, b, c) onto a seed for an
// independent stream. Workers that derive their seeds through distinct
// counters never share generator state.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace spikedet
