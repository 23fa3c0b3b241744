#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "fvault/quiz.hpp"

using namespace fvault;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quiz, StepIsFloorOfQOverN) {
    const Field f;
    EXPECT_EQ(QuizParams::make(f, 8).step, 8192u);
    EXPECT_EQ(QuizParams::make(f, 3).step, 21845u);
    EXPECT_THROW(QuizParams::make(f, 1), ParameterError);
}

TEST(Quiz, BetaWrapsToZero) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    const auto enc = quiz_encode(f, p, 3 * pi / 8, 5, Element{1234});
    EXPECT_NEAR(enc.beta, 0.0, 1e-12);
}

TEST(Quiz, IndexZeroIsIdentity) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    const auto enc = quiz_encode(f, p, 0.4, 0, Element{777});
    EXPECT_EQ(enc.stored.value, 777u);
    EXPECT_NEAR(enc.beta, snap_angle(0.4, 8), 1e-12);
}

TEST(Quiz, TransformUndoesShift) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    for (std::uint32_t v : {0u, 1u, 8191u, 40000u, 65536u}) {
        const auto enc = quiz_encode(f, p, 1.0, 5, Element{v});
        EXPECT_EQ(quiz_transform(f, p, 5, enc.stored).value, v);
    }
}

TEST(Quiz, RecoversEveryIndexOnTheGrid) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    for (std::uint32_t m = 0; m < 8; ++m)
        for (std::uint32_t j = 0; j < 8; ++j) {
            const double alpha = grid_angle(m, 8);
            const auto enc = quiz_encode(f, p, alpha, j, Element{42});
            EXPECT_EQ(quiz_recover_j(p, alpha, enc.beta), j) << m << " " << j;
        }
}

TEST(Quiz, ToleratesNoiseBelowHalfCell) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    Rng rng(3);
    std::uniform_real_distribution<double> noise(-0.999 * pi / 16, 0.999 * pi / 16);
    std::uniform_real_distribution<double> angle(0.0, pi);
    std::uniform_int_distribution<std::uint32_t> pick(0, 7);
    for (int i = 0; i < 100000; ++i) {
        const double enrolled = snap_angle(angle(rng), 8);
        const std::uint32_t j = pick(rng);
        const auto enc = quiz_encode(f, p, enrolled, j, Element{1});
        ASSERT_EQ(quiz_recover_j(p, wrap_angle(enrolled + noise(rng)), enc.beta), j);
    }
}

TEST(Quiz, EqualAnglesGiveIndexZero) {
    const Field f;
    const auto p = QuizParams::make(f, 6);
    EXPECT_EQ(quiz_recover_j(p, 1.234, 1.234), 0u);
}

TEST(Quiz, BetaIsUniformOnTheGrid) {
    const Field f;
    const auto p = QuizParams::make(f, 8);
    Rng rng(11);
    std::uniform_real_distribution<double> angle(0.0, pi);
    std::uniform_int_distribution<std::uint32_t> pick(0, 7);
    std::array<int, 8> counts{};
    constexpr int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const auto enc = quiz_encode(f, p, angle(rng), pick(rng), Element{5});
        const double cell = enc.beta * 8 / pi;
        ASSERT_NEAR(cell, std::round(cell), 1e-9);
        ++counts[angle_grid_index(enc.beta, 8)];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - draws / 8.0) * (c - draws / 8.0) / (draws / 8.0);
    // 7 degrees of freedom: mean 7, sd sqrt(14).
    EXPECT_LE(chi2, 7 + 3 * std::sqrt(14.0));
}

TEST(Quiz, ChaffBetaUsesTheSameGrid) {
    const Field f;
    const auto p = QuizParams::make(f, 4);
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const double b = quiz_random_beta(p, rng);
        EXPECT_NEAR(b * 4 / pi, std::round(b * 4 / pi), 1e-12);
    }
}

TEST(Quiz, PreimagesCoverAllShifts) {
    const Field f;
    const auto p = QuizParams::make(f, 4);
    const auto pre = quiz_preimages(f, p, Element{100});
    ASSERT_EQ(pre.size(), 4u);
    for (std::uint32_t j = 0; j < 4; ++j) EXPECT_EQ(quiz_transform(f, p, j, pre[j]).value, 100u);
}

TEST(Quiz, AttackMultiplierBits) {
    EXPECT_DOUBLE_EQ(quiz_attack_multiplier_log2(14, 8), 42.0);
    EXPECT_DOUBLE_EQ(quiz_attack_multiplier_log2(3, 4), 6.0);
    EXPECT_DOUBLE_EQ(quiz_attack_multiplier_log2(3, 1), 0.0);
}
