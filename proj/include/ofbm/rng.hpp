#ifndef OFBM_RNG_HPP
#define OFBM_RNG_HPP

#include <cstdint>
#include <utility>

namespace ofbm {

// Philox2x64-10 counter-based generator (Salmon et al., SC'11 family).
// A stream is identified by its 64-bit key; draws are a pure function of
// (key, counter), so replicate r of a Monte Carlo run simply uses key
// seed ^ r and any parallel schedule produces identical output.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::pair<std::uint64_t, std::uint64_t>
    block(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo) {
        std::uint64_t x0 = counter_lo, x1 = counter_hi, k = key;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod = static_cast<unsigned __int128>(kMultiplier) * x0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            x0 = hi ^ k ^ x1;
            x1 = lo;
            k += kWeyl;
        }
        return {x0, x1};
    }

    std::uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto [a, b] = block(key_, 0, counter_++);
        spare_ = b;
        have_spare_ = true;
        return a;
    }

    // Uniform on [0,1) with 53 random bits.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; caches the second variate.
    double next_gaussian();

    std::uint64_t key() const { return key_; }

private:
    static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
    static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
    double gauss_spare_ = 0.0;
    bool have_gauss_spare_ = false;
};

inline std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t replicate) {
    return base_seed ^ replicate;
}

} // namespace ofbm

#endif
