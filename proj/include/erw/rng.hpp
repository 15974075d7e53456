#pragma once

#include <cstdint>
#include <cmath>

namespace erw {

// Counter-based generator (Philox4x32-10). The 128-bit counter block is split
// as (draw_lo, draw_hi, stream_lo, stream_hi), so a stream is addressed by a
// 64-bit id and every draw is a pure function of (seed, stream, draw index).
// Per-site cookie stacks and per-generation trial sequences get their own
// streams, which makes the environment a fixed function of the master seed,
// independent of consumption order anywhere else in the program.
class Rng {
  public:
    Rng(uint64_t seed, uint64_t stream);

    uint32_t next_u32();
    uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double next_double();
    // Uniform on (0,1); never returns an endpoint, safe under log().
    double next_open();

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform on {0,...,n-1}, unbiased (rejection).
    uint64_t below(uint64_t n);

    double normal();
    double exponential() { return -std::log(next_open()); }

    // Unit-scale gamma, any shape > 0 (Marsaglia-Tsang, with the shape<1 boost).
    double gamma(double shape);

    uint64_t poisson(double mean);

    // Failures before the first success, P(k) = (1-eps)^k * eps, k >= 0.
    uint64_t geometric_count(double eps);

    // Successes drawn before the m-th failure when each trial succeeds with
    // probability q. One negative-binomial jump; distributionally identical to
    // running the m trial runs one by one.
    uint64_t neg_binomial_count(uint64_t m, double q);

  private:
    void refill();

    uint32_t key_[2];
    uint32_t stream_[2];
    uint64_t draw_;
    uint32_t buf_[4];
    int pos_;
};

// splitmix64 finalizer; used to compose stream ids and decorrelate seeds.
uint64_t mix64(uint64_t x);

// Maps a signed site index to a u32 for stream addressing (0,-1,1,-2,... -> 0,1,2,3,...).
inline uint32_t zigzag32(int64_t x) {
    return static_cast<uint32_t>((x << 1) ^ (x >> 63));
}

inline uint64_t stream_pair(uint32_t hi, uint32_t lo) {
    return (static_cast<uint64_t>(hi) << 32) | lo;
}

// Domain tags XOR'd into the seed so that different subsystems can reuse the
// same (path, index) stream coordinates without overlap.
namespace domain {
inline constexpr uint64_t walk_env = 0x9d8f31a5c6b7e201ull;
inline constexpr uint64_t blp_forward = 0x4be1d2c3a8f6907bull;
inline constexpr uint64_t blp_backward = 0x58c02ef9317a4d6cull;
inline constexpr uint64_t coupled = 0xe6a7c0d14b3f8525ull;
inline constexpr uint64_t bootstrap = 0x71c9e4b2d06a8f3dull;
inline constexpr uint64_t stable = 0x2f5b8c1da7e49063ull;
inline constexpr uint64_t generator = 0xb3d47f20c18e6a99ull;
}  // namespace domain

}  // namespace erw
