#pragma once

// Deterministic random streams. Raw bits come from std::mt19937_64 (whose
// output sequence is fixed by the standard); all mappings to reals and
// integer ranges are implemented here so that generated data never depends
// on the standard library's distribution internals.

#include <cmath>
#include <cstdint>
#include <random>

namespace ddvv {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of the substream identified by (seed, index, salt). Used to hand each
// fuzz instance / optimizer restart its own independent stream, so results do
// not depend on evaluation order or worker count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(index + 0x51ed2701ULL)) ^ splitmix64(salt + 0xc2b2ae3dULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [lo, hi], inclusive
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(bits() % span);
    }

    // standard normal via Box-Muller
    double normal() {
        double u = uniform01();
        while (u <= 1e-300) u = uniform01();
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace ddvv
