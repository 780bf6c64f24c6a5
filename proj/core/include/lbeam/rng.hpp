#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace lbeam {

// Counter-based splittable random stream. Every output is a pure function of
// (key, counter), so copies replay identically and substreams derived with
// split() are independent of each other and of execution order — the
// foundation of the deterministic parallel Monte-Carlo contract.
//
// The output and derivation functions use the splitmix64 finalizer over
// distinct Weyl-constant domains.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(seed) {}

    // Child stream addressed by index; does not disturb this stream.
    RngStream split(std::uint64_t index) const {
        return RngStream(mix(mix(index + kDeriveWeyl) ^ key_));
    }

    std::uint64_t next_u64() { return mix(mix(++counter_ + kOutputWeyl) ^ key_); }

    // Uniform on [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch).
    double next_gaussian() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Circularly-symmetric complex normal CN(0,1): real/imag ~ N(0, 1/2).
    std::complex<double> next_complex_gaussian() {
        const double u1 = 1.0 - next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kOutputWeyl = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kDeriveWeyl = 0xD1B54A32D192ED03ull;
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace lbeam
