#pragma once

// Counter-based PRNG (Philox4x32-10) with Box-Muller gaussians.
// Counter-based so that noise streams are reproducible and substreams
// (one per dataset/channel) are independent of evaluation order.

#include <array>
#include <cmath>
#include <cstdint>

namespace rocofbench {

class philox4x32 {
public:
    using block = std::array<std::uint32_t, 4>;

    philox4x32(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    block next_block() {
        block out = round10(ctr_, key_);
        if (++ctr_[0] == 0) ++ctr_[1];
        return out;
    }

    // direct bijection access, mainly for known-answer tests
    static block raw(const block& ctr, const std::array<std::uint32_t, 2>& key) {
        return round10(ctr, key);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            buf_ = next_block();
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    // uniform in (0, 1]
    double next_uniform() {
        return (static_cast<double>(next_u32()) + 1.0) * 0x1p-32;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    static block round10(block ctr, std::array<std::uint32_t, 2> key) {
        for (int r = 0; r < 10; ++r) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, ctr[0], hi0, lo0);
            mulhilo(kMul1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    std::array<std::uint32_t, 2> key_;
    block ctr_;
    block buf_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// substream ids so different consumers never overlap
namespace stream_id {
inline constexpr std::uint64_t dataset1 = 1;
inline constexpr std::uint64_t dataset2 = 2;
inline constexpr std::uint64_t dataset3 = 3;
inline constexpr std::uint64_t steady = 4;
inline constexpr std::uint64_t ufls = 5;
inline constexpr std::uint64_t custom = 6;
}  // namespace stream_id

}  // namespace rocofbench
