#include "erw/rng.hpp"

namespace erw {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(uint32_t c[4], uint32_t k0, uint32_t k1) {
    uint64_t prod0 = static_cast<uint64_t>(kMul0) * c[0];
    uint64_t prod1 = static_cast<uint64_t>(kMul1) * c[2];
    uint32_t hi0 = static_cast<uint32_t>(prod0 >> 32);
    uint32_t lo0 = static_cast<uint32_t>(prod0);
    uint32_t hi1 = static_cast<uint32_t>(prod1 >> 32);
    uint32_t lo1 = static_cast<uint32_t>(prod1);
    uint32_t out0 = hi1 ^ c[1] ^ k0;
    uint32_t out1 = lo1;
    uint32_t out2 = hi0 ^ c[3] ^ k1;
    uint32_t out3 = lo0;
    c[0] = out0;
    c[1] = out1;
    c[2] = out2;
    c[3] = out3;
}

}  // namespace

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed, uint64_t stream) : draw_(0), pos_(4) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    stream_[0] = static_cast<uint32_t>(stream);
    stream_[1] = static_cast<uint32_t>(stream >> 32);
}

void Rng::refill() {
    uint32_t c[4] = {static_cast<uint32_t>(draw_), static_cast<uint32_t>(draw_ >> 32),
                     stream_[0], stream_[1]};
    uint32_t k0 = key_[0];
    uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    buf_[0] = c[0];
    buf_[1] = c[1];
    buf_[2] = c[2];
    buf_[3] = c[3];
    ++draw_;
    pos_ = 0;
}

uint32_t Rng::next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
}

uint64_t Rng::next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

uint64_t Rng::below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        uint64_t x = next_u64();
        if (x >= threshold) return x % n;
    }
}

double Rng::normal() {
    // Box-Muller, cosine branch only: stateless apart from the draw counter.
    double u1 = next_open();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
        double u = next_open();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = next_open();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        // Product-of-uniforms inversion.
        double limit = std::exp(-mean);
        double prod = next_open();
        uint64_t k = 0;
        while (prod > limit) {
            prod *= next_open();
            ++k;
        }
        return k;
    }
    // PTRS transformed rejection (Hormann), valid for mean >= 10.
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = next_double() - 0.5;
        double v = next_open();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
            return static_cast<uint64_t>(k);
        }
    }
}

uint64_t Rng::geometric_count(double eps) {
    if (eps >= 1.0) return 0;
    double log_q = std::log1p(-eps);
    return static_cast<uint64_t>(std::floor(std::log(next_open()) / log_q));
}

uint64_t Rng::neg_binomial_count(uint64_t m, double q) {
    if (m == 0) return 0;
    if (m <= 16) {
        // Sum of m geometric run lengths (successes between consecutive failures).
        uint64_t total = 0;
        for (uint64_t i = 0; i < m; ++i) total += geometric_count(1.0 - q);
        return total;
    }
    // Gamma-Poisson mixture: Poisson(Gamma(m) * q/(1-q)).
    double lambda = gamma(static_cast<double>(m)) * (q / (1.0 - q));
    return poisson(lambda);
}

}  // namespace erw
