// Deterministic, platform-stable random streams and seed derivation.
//
// All campaign randomness flows from one master seed through a counter-based
// derivation tree (master -> run -> attempt -> stream), so reruns are stable
// across platforms and independent of execution order. Distributions are
// hand-rolled on top of the raw generator because the standard library does
// not pin their algorithms.
#pragma once

#include <cstdint>

namespace aartilc {

inline constexpr std::uint64_t kDefaultSeed = 42;

// splitmix64; used both as a mixer for seed derivation and to seed pcg32.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a child seed from (seed, tag, index). Tags keep sibling streams
// (run / attempt / turbulence / measurement) from colliding.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= tag * 0xd6e8feb86659fd93ULL;
    h ^= splitmix64(s);
    s ^= (index + 1) * 0xa0761d6478bd642fULL;
    h ^= splitmix64(s);
    return h;
}

namespace seed_tag {
inline constexpr std::uint64_t run = 0x52554e00;         // per Monte Carlo run
inline constexpr std::uint64_t attempt = 0x41545400;     // per docking attempt
inline constexpr std::uint64_t turb_drogue = 0x54424400; // drogue turbulence stream
inline constexpr std::uint64_t turb_receiver = 0x54425200;
inline constexpr std::uint64_t measurement = 0x4d454100;
inline constexpr std::uint64_t affine_noise = 0x41464e00; // affine-tier bounded draws
}  // namespace seed_tag

// PCG32 (Melissa O'Neill's pcg_basic variant). Small, fast, reproducible.
class Pcg32 {
  public:
    explicit Pcg32(std::uint64_t seed) {
        std::uint64_t s = seed;
        state_ = splitmix64(s);
        inc_ = splitmix64(s) | 1ULL;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    // Uniform in (-1, 1).
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

    // Standard normal via Box-Muller (no rejection, stream stays aligned).
    double next_normal();

  private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace aartilc
