#pragma once
// Seedable PRNG with portable, implementation-pinned distributions.
//
// std::mt19937 + std::normal_distribution are not bit-portable across
// standard libraries, so reproducibility across builds requires owning the
// whole stack: xoshiro256++ for bits, splitmix64 for seeding, Box-Muller for
// gaussians, waiting-time sampling for binomials.

#include <cmath>
#include <cstdint>
#include <string>

namespace bizcycle {

inline constexpr const char* kRngAlgorithmId = "xoshiro256++/box-muller";

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the xoshiro state
        std::uint64_t x = seed;
        for (auto& si : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            si = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller; caches the second deviate
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);  // log(0) guard
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Binomial(n, prob) by geometric waiting-time skips: O(n * prob) expected,
    // exact, and identical on every platform.  Intended for the small flip
    // probabilities of the micro model (prob << 1).
    long binomial(long n, double prob) {
        if (n <= 0 || prob <= 0.0) return 0;
        if (prob >= 1.0) return n;
        const double log_q = std::log1p(-prob);
        long count = 0;
        long i = 0;
        while (true) {
            double u = 0.0;
            do {
                u = uniform();
            } while (u <= 0.0);
            i += static_cast<long>(std::floor(std::log(u) / log_q)) + 1;
            if (i > n) break;
            ++count;
        }
        return count;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bizcycle
