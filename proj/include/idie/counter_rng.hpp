#pragma once

#include <cstdint>
#include <string_view>

namespace idie {

/// Counter-based generator: draw i of stream s under seed k is
/// splitmix64(key(k, s) + (i + 1) * golden). No hidden state beyond the
/// counter, so any (seed, stream, index) triple is reproducible on its own.
class CounterRng {
public:
    static constexpr std::string_view kName = "splitmix64-counter";

    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGolden))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t index) const { return mix(key_ + (index + 1) * kGolden); }
    std::uint64_t next() { return at(counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    long integer(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace idie
