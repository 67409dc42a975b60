#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ect/verify.hpp"
#include "oracle.hpp"

namespace ect::verify {
namespace {

TEST(ThresholdInjectivity, Examples) {
    const Shape s{2, 1, 1};
    const GrayVolume a(s, {0.2f, 0.7f});
    const GrayVolume b(s, {0.7f, 0.2f});
    EXPECT_TRUE(check_lemma1(a, a, 2));
    EXPECT_TRUE(check_lemma1(a, b, 2));
    EXPECT_TRUE(check_lemma1(a, b, 5));
    try {
        check_lemma1(a, GrayVolume(s, {0.1f, 0.9f}), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
    }
}

TEST(ThresholdInjectivity, SequenceDistinguishesDifferentPairs) {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> level(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<float> va(27), vb(27);
        for (auto& v : va) v = static_cast<float>(level(rng)) * 0.25f;
        for (auto& v : vb) v = static_cast<float>(level(rng)) * 0.25f;
        const GrayVolume a({3, 3, 3}, va);
        const GrayVolume b({3, 3, 3}, vb);
        const auto thresholds = sorted_distinct_union(a, b);
        const bool same = binarization_sequence(a, thresholds) == binarization_sequence(b, thresholds);
        EXPECT_EQ(same, a == b);
        EXPECT_TRUE(check_lemma1(a, b, static_cast<int>(thresholds.size())));
    }
}

TEST(ThresholdInjectivity, Suite) {
    const Lemma1Summary s = run_lemma1_suite(300, {3, 3, 2}, 5);
    EXPECT_EQ(s.trials, 300);
    EXPECT_EQ(s.passed, 300);
    EXPECT_GT(s.identical_pairs, 0);
    EXPECT_LT(s.identical_pairs, 300);
}

TEST(CubeCount, Grids) {
    const CubeCountCheck c5 = check_cube_count({5, 5, 5});
    EXPECT_TRUE(c5.pass);
    EXPECT_EQ(c5.dimension, 3);
    EXPECT_EQ(c5.bound, 27);
    EXPECT_EQ(c5.max_count, 27);
    EXPECT_EQ(c5.corner_count, 8);
    EXPECT_EQ(c5.interior_voxels, 27u);
    EXPECT_EQ(c5.voxels_at_bound, 27u);

    const CubeCountCheck c2 = check_cube_count({2, 2, 2});
    EXPECT_TRUE(c2.pass);
    EXPECT_EQ(c2.max_count, 8);
    EXPECT_EQ(c2.voxels_at_bound, 0u);

    const CubeCountCheck slab = check_cube_count({5, 5, 1});
    EXPECT_TRUE(slab.pass);
    EXPECT_EQ(slab.dimension, 2);
    EXPECT_EQ(slab.bound, 9);
    EXPECT_EQ(slab.max_count, 9);
    EXPECT_EQ(slab.corner_count, 4);

    for (int nx = 1; nx <= 6; ++nx)
        for (int ny = 1; ny <= 6; ++ny)
            for (int nz = 1; nz <= 6; ++nz) EXPECT_TRUE(check_cube_count_bound({nx, ny, nz}));
}

TEST(StabilityBound, Values) {
    EXPECT_NEAR(stability_bound({4, 4, 4}, 1), 27.0 * 64.0 / std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(stability_bound({4, 4, 4}, 1), 997.66, 0.01);
    EXPECT_NEAR(stability_bound({5, 5, 1}, 2), 2.0 * 9.0 * 25.0 / std::sqrt(2.0), 1e-9);
    EXPECT_EQ(stability_bound({4, 4, 4}, 0), 0.0);
    EXPECT_DOUBLE_EQ(direction_sphere_area(3), 4.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(direction_sphere_area(2), 2.0 * std::numbers::pi);
}

TEST(MeasuredDistance, RiemannSumMatchesSampledOracle) {
    std::mt19937_64 rng(62);
    std::uniform_int_distribution<int> steps(1, 64);
    for (int trial = 0; trial < 100; ++trial) {
        const Shape s = oracle::random_shape(rng, 4);
        const BinaryVolume a = oracle::random_binary(rng, s, 0.5);
        const BinaryVolume b = oracle::random_binary(rng, s, 0.5);
        const Vec3 u = oracle::random_unit(rng);
        const int m = steps(rng);
        const auto ca = oracle::euler_curve(a, u, m, true);
        const auto cb = oracle::euler_curve(b, u, m, true);
        const oracle::Range r = oracle::grid_range(s, u);
        const double dh = r.hi > r.lo ? (r.hi - r.lo) / m : 0.0;
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            const double d = static_cast<double>(ca[static_cast<std::size_t>(j)] - cb[static_cast<std::size_t>(j)]);
            sum += d * d * dh;
        }
        EXPECT_NEAR(riemann_ec_distance(CubicalComplex(a), CubicalComplex(b), u, m), std::sqrt(sum), 1e-12);
    }
}

TEST(MeasuredDistance, WithinRiemannErrorOfExactIntegral) {
    // A left sum is exact on cells without a breakpoint; a cell holding one is
    // off by at most dh * max(diff^2).
    std::mt19937_64 rng(63);
    for (int trial = 0; trial < 60; ++trial) {
        const Shape s = oracle::random_shape(rng, 4);
        const BinaryVolume a = oracle::random_binary(rng, s, 0.5);
        const BinaryVolume b = oracle::random_binary(rng, s, 0.5);
        const Vec3 u = oracle::random_unit(rng);
        const MeasuredDistance m = measure_ec_distance(a, b, u, 32);
        EXPECT_TRUE(m.converged);
        const double exact = oracle::exact_ec_distance(a, b, u);
        const auto cubes_a = oracle::all_cubes(a);
        const auto cubes_b = oracle::all_cubes(b);
        const std::size_t breaks = cubes_a.size() + cubes_b.size();
        double max_sq = 0.0;
        for (const auto* list : {&cubes_a, &cubes_b})
            for (const auto& c : *list) {
                const double h = oracle::entry_height(c, u);
                const auto chi_at = [&](const std::vector<oracle::ExplicitCube>& cubes) {
                    std::int64_t total = 0;
                    for (const auto& x : cubes)
                        if (oracle::entry_height(x, u) <= h) total += x.dim % 2 == 0 ? 1 : -1;
                    return static_cast<double>(total);
                };
                const double d = chi_at(cubes_a) - chi_at(cubes_b);
                max_sq = std::max(max_sq, d * d);
            }
        const oracle::Range r = oracle::grid_range(s, u);
        const double dh = (r.hi - r.lo) / m.steps;
        EXPECT_LE(std::abs(m.value * m.value - exact * exact), static_cast<double>(breaks) * dh * max_sq + 1e-9)
            << "trial " << trial;
    }
}

TEST(MeasuredDistance, RefinementGate) {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 40; ++trial) {
        const BinaryVolume a = oracle::random_binary(rng, {4, 4, 4}, 0.5);
        const BinaryVolume b = oracle::random_binary(rng, {4, 4, 4}, 0.5);
        const Vec3 u = oracle::random_unit(rng);
        const MeasuredDistance m = measure_ec_distance(a, b, u, 32);
        ASSERT_TRUE(m.converged);
        ASSERT_GE(m.steps, 64);
        const double coarser = riemann_ec_distance(CubicalComplex(a), CubicalComplex(b), u, m.steps / 2);
        EXPECT_EQ(m.value, riemann_ec_distance(CubicalComplex(a), CubicalComplex(b), u, m.steps));
        EXPECT_LE(std::abs(m.value - coarser), 1e-3 * std::max(m.value, coarser));
    }
}

TEST(MeasuredDistance, ZeroForEqualVolumesAndSymmetric) {
    std::mt19937_64 rng(65);
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryVolume a = oracle::random_binary(rng, {4, 4, 4}, 0.5);
        const BinaryVolume b = oracle::random_binary(rng, {4, 4, 4}, 0.5);
        const Vec3 u = oracle::random_unit(rng);
        EXPECT_EQ(measured_ec_distance(a, a, u, 32), 0.0);
        EXPECT_EQ(measured_ec_distance(a, b, u, 32), measured_ec_distance(b, a, u, 32));
    }
}

TEST(MeasuredDistance, TriangleInequality) {
    std::mt19937_64 rng(66);
    for (int trial = 0; trial < 50; ++trial) {
        const Shape s{3, 3, 3};
        const BinaryVolume a = oracle::random_binary(rng, s, 0.5);
        const BinaryVolume b = oracle::random_binary(rng, s, 0.5);
        const BinaryVolume c = oracle::random_binary(rng, s, 0.5);
        const Vec3 u = oracle::random_unit(rng);
        // Same resolution for all three so the estimates are one L2 norm.
        const CubicalComplex ca(a), cb(b), cc(c);
        EXPECT_LE(riemann_ec_distance(ca, cc, u, 256),
                  riemann_ec_distance(ca, cb, u, 256) + riemann_ec_distance(cb, cc, u, 256) + 1e-9);
    }
}

TEST(Stability, SuiteWithinBound) {
    for (const Shape s : {Shape{4, 4, 4}, Shape{5, 5, 1}}) {
        const auto trials = run_stability_suite(40, s, 5, 9);
        ASSERT_EQ(trials.size(), 40u);
        for (const auto& t : trials) {
            EXPECT_GE(t.k, 1);
            EXPECT_LE(t.k, 5);
            EXPECT_TRUE(t.pass);
            EXPECT_TRUE(t.corollary_pass);
            EXPECT_LE(t.measured, t.bound);
            EXPECT_NEAR(t.direction.norm(), 1.0, 1e-12);
            if (s.nz == 1) {
                EXPECT_EQ(t.direction.z, 0.0);
            }
        }
    }
}

TEST(Stability, ZeroFlipsGiveZeroDistance) {
    for (const auto& t : run_stability_suite(10, {4, 4, 4}, 0, 3)) {
        EXPECT_EQ(t.k, 0);
        EXPECT_EQ(t.measured, 0.0);
        EXPECT_EQ(t.bound, 0.0);
        EXPECT_TRUE(t.pass);
    }
}

TEST(Stability, DeterministicAcrossThreads) {
    StabilityOptions one;
    one.threads = 1;
    StabilityOptions four;
    four.threads = 4;
    const auto a = run_stability_suite(12, {4, 4, 4}, 3, 17, one);
    const auto b = run_stability_suite(12, {4, 4, 4}, 3, 17, four);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].k, b[i].k);
        EXPECT_EQ(a[i].direction, b[i].direction);
        EXPECT_EQ(a[i].measured, b[i].measured);
        EXPECT_EQ(a[i].corollary_measured, b[i].corollary_measured);
    }
}

}  // namespace
}  // namespace ect::verify
