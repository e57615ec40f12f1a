#ifndef SPINPOW_RNG_HPP
#define SPINPOW_RNG_HPP

#include <cmath>
#include <cstdint>

namespace spinpow {

/// Counter-based random generator: every output is the splitmix64 finalizer
/// applied to (seed, stream, counter), so streams are reproducible from their
/// labels alone and independent streams can be handed to parallel workers.
class CounterRng {
public:
    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

    uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do { u = next_double(); } while (u == 0.0);
        const double v = next_double();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(6.283185307179586476925287 * v);
        have_spare_ = true;
        return r * std::cos(6.283185307179586476925287 * v);
    }

private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    uint64_t key_ = 0;
    uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace spinpow

#endif
