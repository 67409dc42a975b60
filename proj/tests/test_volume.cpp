#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "ect/volume.hpp"

namespace ect {
namespace {

namespace fs = std::filesystem;
using namespace std::string_literals;

class VolumeFileTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ect_volume_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write_raw(const fs::path& p, const std::string& bytes) const {
        std::ofstream out(p, std::ios::binary);
        out << bytes;
    }

    static ErrorCode load_error(const fs::path& p) {
        try {
            load_volume(p);
        } catch (const Error& e) {
            return e.code();
        }
        ADD_FAILURE() << "expected load_volume to throw";
        return ErrorCode::invalid_argument;
    }

    fs::path dir_;
};

GrayVolume random_gray(std::mt19937_64& rng, Shape s) {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> values(s.size());
    for (auto& v : values) v = u(rng);
    return GrayVolume(s, std::move(values));
}

TEST(Shape, IndexIsXSlowest) {
    const Shape s{2, 3, 4};
    EXPECT_EQ(s.index(0, 0, 1), 1u);
    EXPECT_EQ(s.index(0, 1, 0), 4u);
    EXPECT_EQ(s.index(1, 0, 0), 12u);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.index(s.voxel(i)), i);
}

TEST(GrayVolume, RejectsNonFiniteAndWrongLength) {
    EXPECT_THROW(GrayVolume(Shape{1, 1, 2}, std::vector<float>{0.0f}), Error);
    EXPECT_THROW(GrayVolume(Shape{1, 1, 1}, std::vector<float>{NAN}), Error);
    EXPECT_THROW(GrayVolume(Shape{1, 1, 1}, std::vector<float>{INFINITY}), Error);
    EXPECT_THROW(GrayVolume(Shape{0, 1, 1}), Error);
}

TEST_F(VolumeFileTest, BinaryAllOnesRoundTrip) {
    const BinaryVolume ones(Shape{2, 2, 2}, true);
    save_volume(ones, path("ones.vgrid"));
    const AnyVolume loaded = load_volume(path("ones.vgrid"));
    ASSERT_TRUE(std::holds_alternative<BinaryVolume>(loaded));
    EXPECT_EQ(std::get<BinaryVolume>(loaded).count(), 8u);
    EXPECT_EQ(std::get<BinaryVolume>(loaded), ones);
}

TEST_F(VolumeFileTest, HeaderIsBitExact) {
    save_volume(BinaryVolume(Shape{4, 3, 2}), path("h.vgrid"));
    std::ifstream in(path("h.vgrid"), std::ios::binary);
    std::string magic, header;
    std::getline(in, magic);
    std::getline(in, header);
    EXPECT_EQ(magic, "VGRID1");
    EXPECT_EQ(header, R"({"dtype":"u8","shape":[4,3,2],"order":"x-slowest"})");
    EXPECT_EQ(fs::file_size(path("h.vgrid")), 7u + header.size() + 1u + 24u);
}

TEST_F(VolumeFileTest, TruncatedPayload) {
    write_raw(path("t.vgrid"),
              "VGRID1\n{\"dtype\":\"u8\",\"shape\":[4,4,4],\"order\":\"x-slowest\"}\n" +
                  std::string(63, '\0'));
    EXPECT_EQ(load_error(path("t.vgrid")), ErrorCode::truncated_payload);
}

TEST_F(VolumeFileTest, DistinctErrorCodes) {
    write_raw(path("magic.vgrid"), "VGRID2\n{}\n");
    EXPECT_EQ(load_error(path("magic.vgrid")), ErrorCode::bad_magic);

    write_raw(path("json.vgrid"), "VGRID1\n{not json\n");
    EXPECT_EQ(load_error(path("json.vgrid")), ErrorCode::malformed_header);

    write_raw(path("shape.vgrid"), "VGRID1\n{\"dtype\":\"u8\",\"shape\":[4,0,4],\"order\":\"x-slowest\"}\n");
    EXPECT_EQ(load_error(path("shape.vgrid")), ErrorCode::malformed_header);

    write_raw(path("order.vgrid"), "VGRID1\n{\"dtype\":\"u8\",\"shape\":[1,1,1],\"order\":\"z-slowest\"}\n\1");
    EXPECT_EQ(load_error(path("order.vgrid")), ErrorCode::malformed_header);

    write_raw(path("dtype.vgrid"), "VGRID1\n{\"dtype\":\"f64\",\"shape\":[1,1,1],\"order\":\"x-slowest\"}\n12345678");
    EXPECT_EQ(load_error(path("dtype.vgrid")), ErrorCode::unsupported_dtype);

    write_raw(path("long.vgrid"), "VGRID1\n{\"dtype\":\"u8\",\"shape\":[1,1,1],\"order\":\"x-slowest\"}\n\1\1");
    EXPECT_EQ(load_error(path("long.vgrid")), ErrorCode::trailing_data);

    EXPECT_EQ(load_error(path("missing.vgrid")), ErrorCode::io_failure);
}

TEST_F(VolumeFileTest, ZerosF32) {
    save_volume(GrayVolume(Shape{64, 64, 64}), path("z.vgrid"));
    const AnyVolume loaded = load_volume(path("z.vgrid"));
    ASSERT_TRUE(std::holds_alternative<GrayVolume>(loaded));
    const auto& g = std::get<GrayVolume>(loaded);
    EXPECT_EQ(g.size(), 64u * 64u * 64u);
    for (const float v : g.values()) ASSERT_EQ(v, 0.0f);
}

TEST_F(VolumeFileTest, RandomF32RoundTripIsBitExact) {
    std::mt19937_64 rng(11);
    const GrayVolume v = random_gray(rng, {64, 64, 64});
    save_volume(v, path("r.vgrid"));
    const auto loaded = std::get<GrayVolume>(load_volume(path("r.vgrid")));
    ASSERT_EQ(loaded.shape(), v.shape());
    EXPECT_EQ(std::memcmp(loaded.values().data(), v.values().data(), v.size() * sizeof(float)), 0);
}

TEST_F(VolumeFileTest, RoundTripProperty) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> extent(1, 7);
        const Shape s{extent(rng), extent(rng), extent(rng)};
        const GrayVolume g = random_gray(rng, s);
        save_volume(g, path("g.vgrid"));
        EXPECT_EQ(std::get<GrayVolume>(load_volume(path("g.vgrid"))), g);

        const BinaryVolume b = binarize(g, 0.5);
        save_volume(b, path("b.vgrid"));
        EXPECT_EQ(std::get<BinaryVolume>(load_volume(path("b.vgrid"))), b);
    }
}

TEST_F(VolumeFileTest, U8WithOtherValuesLoadsAsGray) {
    write_raw(path("u8.vgrid"), "VGRID1\n{\"dtype\":\"u8\",\"shape\":[1,1,2],\"order\":\"x-slowest\"}\n\0\7"s);
    const AnyVolume loaded = load_volume(path("u8.vgrid"));
    ASSERT_TRUE(std::holds_alternative<GrayVolume>(loaded));
    EXPECT_EQ(std::get<GrayVolume>(loaded)[1], 7.0f);
}

TEST_F(VolumeFileTest, UnwritableDirectory) {
    try {
        save_volume(BinaryVolume(Shape{1, 1, 1}), path("no_such_dir") / "x.vgrid");
        FAIL() << "expected an I/O error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io_failure);
    }
}

TEST(Binarize, InclusiveThreshold) {
    const GrayVolume v(Shape{1, 1, 2}, std::vector<float>{0.2f, 0.7f});
    const BinaryVolume b = binarize(v, 0.5);
    EXPECT_FALSE(b[0]);
    EXPECT_TRUE(b[1]);
    EXPECT_EQ(binarize(v, 0.2f).count(), 2u);
    EXPECT_EQ(binarize(v, 0.7f + 1.0).count(), 0u);
}

TEST(Binarize, MonotoneInThreshold) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> tau(-0.1, 1.1);
    for (int trial = 0; trial < 100; ++trial) {
        const GrayVolume v = random_gray(rng, {4, 5, 3});
        double t1 = tau(rng), t2 = tau(rng);
        if (t1 > t2) std::swap(t1, t2);
        const BinaryVolume lo = binarize(v, t1);
        const BinaryVolume hi = binarize(v, t2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (hi[i]) {
                ASSERT_TRUE(lo[i]);
            }
        }
    }
}

TEST(SortedDistinctUnion, Examples) {
    const GrayVolume a(Shape{1, 1, 2}, std::vector<float>{0.5f, 0.5f});
    const GrayVolume b(Shape{1, 1, 2}, std::vector<float>{0.1f, 0.5f});
    EXPECT_EQ(sorted_distinct_union(a, b), (std::vector<float>{0.1f, 0.5f}));

    const GrayVolume c(Shape{2, 2, 2}, 1.0f);
    EXPECT_EQ(sorted_distinct_union(c, c), (std::vector<float>{1.0f}));

    EXPECT_THROW(sorted_distinct_union(a, c), Error);
}

TEST(SortedDistinctUnion, MatchesBruteForceSet) {
    // a has 3 distinct values, b has 2 of which one overlaps.
    const GrayVolume a(Shape{1, 2, 3}, std::vector<float>{0.1f, 0.2f, 0.3f, 0.1f, 0.2f, 0.3f});
    const GrayVolume b(Shape{1, 2, 3}, std::vector<float>{0.3f, 0.9f, 0.9f, 0.3f, 0.3f, 0.9f});
    EXPECT_EQ(sorted_distinct_union(a, b).size(), 4u);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> level(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<float> va(27), vb(27);
        for (auto& v : va) v = static_cast<float>(level(rng)) / 10.0f;
        for (auto& v : vb) v = static_cast<float>(level(rng)) / 7.0f;
        const GrayVolume ga(Shape{3, 3, 3}, va), gb(Shape{3, 3, 3}, vb);
        std::set<float> expected(va.begin(), va.end());
        expected.insert(vb.begin(), vb.end());
        const auto got = sorted_distinct_union(ga, gb);
        EXPECT_EQ(got, std::vector<float>(expected.begin(), expected.end()));
        EXPECT_TRUE(std::adjacent_find(got.begin(), got.end(), std::greater_equal<>()) == got.end());
    }
}

// Exhaustive oracle over the 256 cut positions using raw voxel values.
double best_between_class_variance(const GrayVolume& v) {
    const auto [lo, hi] = std::minmax_element(v.values().begin(), v.values().end());
    const double min = *lo, width = (static_cast<double>(*hi) - min) / 256;
    double best = -1.0;
    for (int k = 1; k < 256; ++k) {
        const double t = min + k * width;
        double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (const float x : v.values()) {
            if (x >= t) { n1 += 1; s1 += x; } else { n0 += 1; s0 += x; }
        }
        if (n0 == 0 || n1 == 0) continue;
        const double n = n0 + n1, mu0 = s0 / n0, mu1 = s1 / n1;
        best = std::max(best, (n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1));
    }
    return best;
}

double between_class_variance(const GrayVolume& v, double t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (const float x : v.values()) {
        if (x >= t) { n1 += 1; s1 += x; } else { n0 += 1; s0 += x; }
    }
    const double n = n0 + n1, mu0 = s0 / n0, mu1 = s1 / n1;
    return (n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1);
}

TEST(Otsu, TwoClusters) {
    std::vector<float> values(1000, 0.1f);
    std::fill(values.begin() + 500, values.end(), 0.9f);
    const GrayVolume v(Shape{10, 10, 10}, values);
    const double t = otsu_threshold(v);
    EXPECT_GT(t, 0.1);
    EXPECT_LT(t, 0.9);
    EXPECT_NEAR(between_class_variance(v, t), best_between_class_variance(v), 1e-12);
    EXPECT_EQ(binarize(v, t).count(), 500u);
}

TEST(Otsu, Ramp) {
    std::vector<float> values(1000);
    for (int i = 0; i < 1000; ++i) values[static_cast<std::size_t>(i)] = static_cast<float>(i) / 999.0f;
    const GrayVolume v(Shape{10, 10, 10}, values);
    const double t = otsu_threshold(v);
    EXPECT_GE(t, 0.45);
    EXPECT_LE(t, 0.55);
    EXPECT_NEAR(between_class_variance(v, t), best_between_class_variance(v), 1e-12);
}

TEST(Otsu, ConstantVolume) {
    const GrayVolume v(Shape{3, 3, 3}, 0.5f);
    EXPECT_EQ(otsu_threshold(v), 0.5);
    EXPECT_EQ(binarize(v, otsu_threshold(v)).count(), 27u);
}

TEST(Otsu, WithinRangeAndOptimal) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const GrayVolume v = random_gray(rng, {5, 5, 5});
        const double t = otsu_threshold(v);
        const auto [lo, hi] = std::minmax_element(v.values().begin(), v.values().end());
        EXPECT_GE(t, *lo);
        EXPECT_LE(t, *hi);
        EXPECT_NEAR(between_class_variance(v, t), best_between_class_variance(v), 1e-12);
    }
}

}  // namespace
}  // namespace ect
