#pragma once

#include <cmath>
#include <cstdint>

namespace spinbeat {

// splitmix64 (Steele, Lea, Flood 2014). 64-bit state, one multiply-xorshift
// scramble per output. Streams are split by hashing (seed, stream index), so
// every bin of a count trace draws from its own deterministic sequence.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t scramble(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(scramble(seed + 0x9e3779b97f4a7c15ULL) ^
                          scramble(index + 0xd1b54a32d192ed03ULL));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return scramble(state_);
    }

    // uniform in (0, 1]
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

namespace detail {

inline double log_factorial(std::uint64_t k) {
    static const double table[10] = {0.0,
                                     0.0,
                                     0.6931471805599453,
                                     1.791759469228055,
                                     3.1780538303479458,
                                     4.787491742782046,
                                     6.579251212010101,
                                     8.525161361065415,
                                     10.60460290274525,
                                     12.801827480081469};
    if (k < 10) return table[k];
    const double x = static_cast<double>(k);
    // Stirling series, plenty for k >= 10
    return (x + 0.5) * std::log(x) - x + 0.9189385332046727 +
           (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * x * x)) / (x * x)) / x;
}

inline double log_poisson_pmf(double kf, double mu) {
    return kf * std::log(mu) - mu - log_factorial(static_cast<std::uint64_t>(kf));
}

// Hoermann's transformed rejection (PTRD), valid for mean >= 10.
inline std::uint64_t poisson_ptrd(double mu, SplitMix64& rng) {
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        double v = rng.uniform();
        double u;
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<std::uint64_t>(
                std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mu + 0.445));
        }
        if (v >= v_r) {
            u = rng.uniform() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = rng.uniform() * v_r;
        }
        const double us = 0.5 - std::fabs(u);
        if (us < 0.013 && v > us) continue;
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.445);
        if (kf < 0.0) continue;
        v = v * inv_alpha / (a / (us * us) + b);
        const auto k = static_cast<std::uint64_t>(kf);
        if (k >= 10) {
            const double xk = kf;
            if (std::log(v * smu) <= (xk + 0.5) * std::log(mu / xk) - mu -
                                         0.9189385332046727 + xk -
                                         (1.0 / 12.0 - 1.0 / (360.0 * xk * xk)) / xk)
                return k;
        } else {
            if (std::log(v) <= log_poisson_pmf(kf, mu)) return k;
        }
    }
}

}  // namespace detail

// Poisson sampling: cumulative inversion below mean 30, PTRD rejection above.
inline std::uint64_t poisson_sample(double mean, SplitMix64& rng) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        double p = std::exp(-mean);
        double cdf = p;
        const double u = rng.uniform();
        std::uint64_t k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    return detail::poisson_ptrd(mean, rng);
}

}  // namespace spinbeat
