#pragma once

#include <cstdint>
#include <stdexcept>

namespace switchsim {

// Counter-based stream RNG built on SplitMix64. A stream is fully
// determined by (seed, stream_id), so per-cycle streams reproduce exactly
// regardless of worker count or execution order. All samplers are
// hand-rolled: the standard library's distributions are implementation-
// defined sequences and would break the bit-reproducibility contract
// across toolchains.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream_id) {
        // The stream id must enter nonlinearly: the generator itself steps
        // its state by the same golden-ratio constant, so an affine
        // state = f(seed) + c*stream would make stream n+1 reproduce
        // stream n shifted by one draw.
        state_ = mix(seed ^ mix(0x9E3779B97F4A7C15ULL * (stream_id + 1)));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    result_type operator()() { return next(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate);

    // Box-Muller; the second variate is discarded to keep streams stateless
    double normal();

    // Knuth's product method; fine for the small means used here
    int poisson(double mean);

    int binomial(int n, double p);

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }

    std::uint64_t state_;
};

} // namespace switchsim
