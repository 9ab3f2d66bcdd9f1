#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hredsum {

// Deterministic splittable generator. Streams are addressed by (seed, name)
// so parameter initialization does not depend on registration order, and the
// same seed reproduces bit-identical runs on any platform (std:: distributions
// are not bit-pinned by the standard, so everything here is hand-rolled).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // burn-in so nearby seeds decorrelate
        next_u64();
        next_u64();
    }

    static Rng for_name(std::uint64_t seed, std::string_view name) {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return Rng(seed ^ h);
    }

    std::uint64_t next_u64() {  // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller, no cached spare (keeps the stream position obvious).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace hredsum
