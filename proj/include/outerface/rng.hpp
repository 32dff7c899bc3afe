#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace outerface {

// splitmix64 step, used to derive well-separated seeds from (seed, tag...)
// chains. Stable across platforms.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (0x51AFD1EDULL + (b << 6) + (b >> 2));
    splitmix64(s);
    uint64_t t = s + b;
    return splitmix64(t);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Deterministic RNG. The engine is std::mt19937_64 (bit-exact by the
// standard); every distribution on top of it is implemented here because
// the std:: distributions are not portable across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Derives an independent stream from a root seed plus a tag path,
    // e.g. derive(seed, {kStreamPose, identity, video}).
    static Rng derive(uint64_t seed, std::initializer_list<uint64_t> tags) {
        uint64_t s = seed;
        for (uint64_t t : tags) s = mix_seed(s, t);
        return Rng(s);
    }

    uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, bound) via rejection sampling.
    uint64_t uniform_below(uint64_t bound) {
        if (bound <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; the paired deviate is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sample k distinct indices from [0, n) without replacement; the order
    // of the result is the draw order.
    std::vector<size_t> sample_indices(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        if (k > n) k = n;
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(uniform_below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream tags for derived RNGs, so independent subsystems never collide.
namespace rngtag {
constexpr uint64_t kIdentityCode = 0x1D;
constexpr uint64_t kPose = 0x90;
constexpr uint64_t kSeam = 0x5E;
constexpr uint64_t kShuffle = 0x51;
constexpr uint64_t kInit = 0x11;
constexpr uint64_t kPool = 0xB0;
constexpr uint64_t kSelect = 0x5C;
constexpr uint64_t kNoise = 0xA0;
constexpr uint64_t kSample = 0x5A;
}  // namespace rngtag

}  // namespace outerface
