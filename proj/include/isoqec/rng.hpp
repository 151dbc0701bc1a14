#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace isoqec {

/// Seeded random stream with platform-independent output. std::mt19937_64
/// supplies the bits (its sequence is fixed by the standard); uniform and
/// normal variates are derived by hand so no library-specific distribution
/// algorithm leaks into the results.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent substream for a Monte Carlo chunk: the (seed, chunk)
    /// pair is mixed through splitmix64 before seeding the engine.
    static Rng substream(std::uint64_t seed, std::uint64_t chunk) {
        return Rng(splitmix64(seed ^ splitmix64(chunk + 0x9e3779b97f4a7c15ull)));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace isoqec
