#pragma once

#include <cstdint>

namespace ncosim {

// Counter-style deterministic generator with cheap substreams. Each
// (seed, stream) pair yields an independent sequence, so parallel replicates
// can be assigned stream = replicate index and the thread schedule can never
// change the draws. Core step is the splitmix64 finalizer.
class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : state_(mix(mix(seed + kGamma) ^ mix(stream * kGamma + 1))) {}

    uint64_t next_u64() { return mix(state_ += kGamma); }

    // uniform double in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // inversion sampling; the last bucket absorbs any rounding slack
    int categorical(const double* probs, int k) {
        const double u = uniform();
        double cum = 0.0;
        for (int i = 0; i < k - 1; ++i) {
            cum += probs[i];
            if (u < cum) return i;
        }
        return k - 1;
    }

  private:
    static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

}  // namespace ncosim
