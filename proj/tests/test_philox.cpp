#include <gtest/gtest.h>

#include <cmath>

#include "affine/philox.hpp"

using affine::PathNormals;
using affine::Philox4x32;

// Known-answer vectors from the Random123 distribution.
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
              (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                   K{0xffffffffu, 0xffffffffu}),
              (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                   K{0xa4093822u, 0x299f31d0u}),
              (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(PathNormals, DeterministicPerPath) {
    PathNormals a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 10; ++i) {
        const double x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
        EXPECT_NE(x, d.next());
    }
}

TEST(PathNormals, BlockIsRandomAccess) {
    PathNormals a(1, 2);
    const auto [z0, z1] = a.block(3);
    PathNormals b(1, 2);
    for (int i = 0; i < 6; ++i) b.next();
    EXPECT_EQ(b.next(), z0);
    EXPECT_EQ(b.next(), z1);
}

TEST(PathNormals, RoughMoments) {
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int p = 0; p < n / 2; ++p) {
        PathNormals s(9, static_cast<std::uint64_t>(p));
        for (int k = 0; k < 2; ++k) {
            const double z = s.next();
            sum += z;
            sum2 += z * z;
        }
    }
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(sum2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(PathNormals, OpenUnitInterval) {
    EXPECT_GT(PathNormals::to_open_unit(0), 0.0);
    EXPECT_LT(PathNormals::to_open_unit(~std::uint64_t{0}), 1.0);
}
