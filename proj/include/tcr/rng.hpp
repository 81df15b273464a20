#ifndef TCR_RNG_HPP
#define TCR_RNG_HPP

#include <cstdint>
#include <cstddef>
#include <cmath>
#include <array>

namespace tcr {

/// Philox4x32-10 counter-based generator. Streams are addressed by
/// (seed, stream_hi, stream_lo) so independent trials can draw from
/// disjoint sequences in any order.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream_hi = 0, std::uint64_t stream_lo = 0)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream_lo)),
          ctr3_(static_cast<std::uint32_t>(stream_lo >> 32)) {
        // stream_hi folded into the key so streams differ even at counter 0
        key0_ ^= static_cast<std::uint32_t>(stream_hi);
        key1_ ^= static_cast<std::uint32_t>(stream_hi >> 32);
    }

    std::uint32_t next_u32() {
        if (have_ == 0) {
            block_ = round10(counter_++, ctr2_, ctr3_, key0_, key1_);
            have_ = 4;
        }
        return block_[4 - have_--];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t lim = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= lim);
        return x % n;
    }

    template <typename T>
    void shuffle(T* data, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            T tmp = data[i - 1];
            data[i - 1] = data[j];
            data[j] = tmp;
        }
    }

private:
    static std::array<std::uint32_t, 4> round10(std::uint64_t ctr01, std::uint32_t c2,
                                                std::uint32_t c3, std::uint32_t k0,
                                                std::uint32_t k1) {
        std::uint32_t x0 = static_cast<std::uint32_t>(ctr01);
        std::uint32_t x1 = static_cast<std::uint32_t>(ctr01 >> 32);
        std::uint32_t x2 = c2, x3 = c3;
        for (int r = 0; r < 10; ++r) {
            std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x0;
            std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x2;
            std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
            std::uint32_t y1 = static_cast<std::uint32_t>(p1);
            std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
            std::uint32_t y3 = static_cast<std::uint32_t>(p0);
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {x0, x1, x2, x3};
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr2_, ctr3_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int have_ = 0;
};

}  // namespace tcr

#endif
