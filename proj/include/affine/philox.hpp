#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every draw is a pure function of (key, counter), so path i of a simulation
// sees the same numbers no matter which thread runs it or in what order.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace affine {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Stream of standard normals for one simulation path.
///
/// Block j of path p is Philox(counter = {p_lo, p_hi, j, 0}, key = seed) and
/// yields two normals by Box-Muller.
class PathNormals {
public:
    PathNormals(std::uint64_t seed, std::uint64_t path) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32)) {}

    double next() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto [z0, z1] = block(block_++);
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

    std::pair<double, double> block(std::uint32_t index) const noexcept {
        const auto out = Philox4x32::generate({path_lo_, path_hi_, index, 0u}, key_);
        const double u1 = to_open_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
        const double u2 = to_open_unit((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Maps 64 random bits to the open interval (0, 1).
    static double to_open_unit(std::uint64_t bits) noexcept {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

private:
    Philox4x32::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint32_t block_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace affine
