#pragma once

#include <cstdint>
#include <utility>

namespace gardo {

// Counter-based generator: every draw is a hash of (key, counter), so any
// substream can be replayed independently of evaluation order.
class Rng {
public:
    explicit Rng(uint64_t seed) : key_(mix(0x6a09e667f3bcc908ull, seed)) {}

    // Child stream derived from this stream's key and a tag. Tags are small
    // integers (trajectory index, iteration, purpose id); derivation is
    // order-sensitive, so derive(a).derive(b) != derive(b).derive(a).
    Rng derive(uint64_t tag) const { return Rng(mix(key_, tag), 0); }

    uint64_t next_u64() { return mix(key_, ++counter_); }

    // Uniform on the open interval (0,1); never returns 0, safe under log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal via Box-Muller (cosine branch only).
    double normal();

    // Two independent standard normals from one Box-Muller pair.
    std::pair<double, double> normal2();

    uint64_t key() const { return key_; }

private:
    Rng(uint64_t key, uint64_t counter) : key_(key), counter_(counter) {}

    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    uint64_t key_;
    uint64_t counter_ = 0;
};

// Purpose tags for deriving disjoint streams from a run seed.
namespace stream {
constexpr uint64_t pretrain = 1;
constexpr uint64_t rollout = 2;
constexpr uint64_t eval = 3;
constexpr uint64_t init = 4;
constexpr uint64_t oracle = 5;
}  // namespace stream

}  // namespace gardo
