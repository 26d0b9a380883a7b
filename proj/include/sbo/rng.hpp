#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sbo {

/// splitmix64 finalizer; used as a counter-based hash when deriving sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for replicate `index` of a campaign seeded with
/// `master`. Counter-based, so replicates can start in any order and still
/// draw from independent, reproducible streams.
constexpr std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

/// Seeded pseudorandom generator with a fixed, portable algorithm.
///
/// The engine is mt19937_64, whose output sequence the C++ standard pins
/// down exactly; doubles are formed as (x >> 11) * 2^-53 rather than through
/// std::uniform_real_distribution, whose sequence is implementation-defined.
/// Identical seeds therefore reproduce identical samples on every platform.
/// Instances are single-owner: never share one across threads.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    /// Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (std::uint64_t{0} - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % n;
        }
    }

    /// Standard normal deviate (Box-Muller, pair cached).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[next_below(i)]);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sbo
