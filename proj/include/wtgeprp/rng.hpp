#pragma once

#include <cstdint>
#include <random>

namespace wtgeprp {

// 64-bit finalizer mix, used for deriving sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for a named sub-stream (e.g. one per wavelet component).  Streams are
// a pure function of (master, stream_id), so adding streams never perturbs
// existing ones.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id) {
    return splitmix64(master ^ splitmix64(stream_id + 1));
}

// Deterministic RNG facade.  Every draw is defined directly on the raw
// mt19937_64 output (no std:: distributions), so sequences are reproducible
// across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) via 128-bit multiply-shift.  n > 0.
    std::size_t next_below(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    bool chance(double p) { return next_unit() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace wtgeprp
