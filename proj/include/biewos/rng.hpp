#pragma once

#include <array>
#include <cstdint>

namespace biewos {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11). Stateless
// block function: 256-bit counter + 128-bit key -> 256 bits of output.
// Streams keyed by (seed, point_id, path_id) are independent by construction
// and reproducible under any scheduling.
namespace philox {

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL; // golden ratio
inline constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL; // sqrt(3)-1

inline std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                          std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

} // namespace philox

// One logical random stream: counter word 0 advances per generated block,
// words 1..3 carry (path_id, point_id, domain) so distinct ids never collide.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t point_id, std::uint64_t path_id,
              std::uint64_t domain = 0)
        : key_{seed, 0x1BD11BDAA9FC1A22ULL ^ domain}, ctr_{0, path_id, point_id, domain} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = philox::block(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // uniform in [0,1), 53-bit mantissa
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> ctr_;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
};

} // namespace biewos
