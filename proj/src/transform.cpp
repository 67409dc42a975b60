#include "ect/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ect/parallel.hpp"
#include "ect/random.hpp"

namespace ect {

double Vec3::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

std::string_view to_string(DirectionMode mode) noexcept {
    return mode == DirectionMode::random ? "random" : "fibonacci";
}

std::string_view to_string(RangeMode mode) noexcept {
    return mode == RangeMode::grid ? "grid" : "complex";
}

DirectionMode parse_direction_mode(std::string_view text) {
    if (text == "random") return DirectionMode::random;
    if (text == "fibonacci") return DirectionMode::fibonacci;
    throw Error(ErrorCode::invalid_argument, "unknown direction mode: " + std::string(text));
}

RangeMode parse_range_mode(std::string_view text) {
    if (text == "grid") return RangeMode::grid;
    if (text == "complex") return RangeMode::complex;
    throw Error(ErrorCode::invalid_argument, "unknown range mode: " + std::string(text));
}

Vec3 normalized(const Vec3& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || n == 0.0) {
        throw Error(ErrorCode::invalid_argument, "direction must be a finite non-zero vector");
    }
    return {v.x / n, v.y / n, v.z / n};
}

DirectionSet sample_directions(std::size_t count, std::uint64_t seed, DirectionMode mode) {
    if (count == 0) throw Error(ErrorCode::invalid_argument, "need at least one direction");
    DirectionSet set;
    set.seed = seed;
    set.mode = mode;
    set.directions.reserve(count);

    if (mode == DirectionMode::fibonacci) {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        const auto n = static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * static_cast<double>(i);
            set.directions.push_back(normalized({r * std::cos(phi), r * std::sin(phi), z}));
        }
        return set;
    }

    NormalStream normals(seed);
    while (set.directions.size() < count) {
        const Vec3 g{normals.next(), normals.next(), normals.next()};
        if (g.norm() < 1e-12) continue;
        set.directions.push_back(normalized(g));
    }
    return set;
}

double vertex_height(const Voxel& v, const Vec3& u) noexcept {
    return (u.x * v.x + u.y * v.y) + u.z * v.z;
}

unsigned direction_octant(const Vec3& u) noexcept {
    return (u.x > 0.0 ? kAxisX : 0u) | (u.y > 0.0 ? kAxisY : 0u) | (u.z > 0.0 ? kAxisZ : 0u);
}

HeightRange grid_height_range(const Shape& shape, const Vec3& u) noexcept {
    HeightRange range{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
    for (unsigned corner = 0; corner < 8; ++corner) {
        const Voxel d = corner_offset(corner);
        const Voxel v{d.x * (shape.nx - 1), d.y * (shape.ny - 1), d.z * (shape.nz - 1)};
        const double h = vertex_height(v, u);
        range.min = std::min(range.min, h);
        range.max = std::max(range.max, h);
    }
    return range;
}

HeightRange complex_height_range(const CubicalComplex& complex, const Vec3& u) {
    if (complex.empty()) {
        throw Error(ErrorCode::empty_volume, "complex height range needs a non-empty volume");
    }
    HeightRange range{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
    for (const Voxel& v : complex.foreground()) {
        const double h = vertex_height(v, u);
        range.min = std::min(range.min, h);
        range.max = std::max(range.max, h);
    }
    return range;
}

double EulerCurve::height(int j) const noexcept {
    return j >= steps() ? h_max : h_min + j * dh;
}

namespace {

// Smallest sample index whose height is >= entry.
int sample_bin(const EulerCurve& curve, double entry) noexcept {
    const int steps = curve.steps();
    if (curve.dh == 0.0) return 0;
    const double estimate = std::ceil((entry - curve.h_min) / curve.dh);
    int j = estimate <= 0.0 ? 0 : estimate >= steps ? steps : static_cast<int>(estimate);
    while (j > 0 && entry <= curve.height(j - 1)) --j;
    while (j < steps && entry > curve.height(j)) ++j;
    return j;
}

}  // namespace

EulerCurve euler_curve(const CubicalComplex& complex, const Vec3& u, int steps, RangeMode range) {
    if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be >= 1");
    const HeightRange hr = range == RangeMode::grid ? grid_height_range(complex.shape(), u)
                                                    : complex_height_range(complex, u);
    EulerCurve curve;
    curve.h_min = hr.min;
    curve.h_max = hr.max;
    curve.dh = hr.max > hr.min ? (hr.max - hr.min) / steps : 0.0;
    curve.samples.assign(static_cast<std::size_t>(steps) + 1, 0);

    for (const auto& w : complex.weights(direction_octant(u))) {
        const double entry = vertex_height({w.x, w.y, w.z}, u);
        curve.samples[static_cast<std::size_t>(sample_bin(curve, entry))] += w.weight;
    }
    for (std::size_t j = 1; j < curve.samples.size(); ++j) curve.samples[j] += curve.samples[j - 1];
    return curve;
}

EulerCurve euler_curve(const BinaryVolume& volume, const Vec3& u, int steps, RangeMode range) {
    return euler_curve(CubicalComplex(volume), u, steps, range);
}

EctMatrix compute_ect(const CubicalComplex& complex, const DirectionSet& dirs, int steps,
                      RangeMode range, unsigned threads) {
    if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be >= 1");
    if (range == RangeMode::complex && complex.empty()) {
        throw Error(ErrorCode::empty_volume, "complex range mode needs a non-empty volume");
    }
    EctMatrix matrix;
    matrix.directions = dirs.directions;
    matrix.steps = steps;
    matrix.range = range;
    matrix.curves.resize(dirs.size());
    parallel_for(
        dirs.size(),
        [&](std::size_t i) { matrix.curves[i] = euler_curve(complex, dirs[i], steps, range); },
        threads);
    return matrix;
}

EctMatrix compute_ect(const BinaryVolume& volume, const DirectionSet& dirs, int steps,
                      RangeMode range, unsigned threads) {
    return compute_ect(CubicalComplex(volume), dirs, steps, range, threads);
}

double ect_distance_sq(const EctMatrix& a, const EctMatrix& b) {
    if (a.directions != b.directions || a.steps != b.steps || a.rows() != b.rows()) {
        throw Error(ErrorCode::range_mismatch, "ECT matrices use different directions or steps");
    }
    if (a.rows() == 0) return 0.0;

    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const EulerCurve& ra = a.curves[i];
        const EulerCurve& rb = b.curves[i];
        if (ra.h_min != rb.h_min || ra.h_max != rb.h_max || ra.samples.size() != rb.samples.size()) {
            throw Error(ErrorCode::range_mismatch,
                        "row " + std::to_string(i) + " height ranges differ; use grid range mode");
        }
        std::int64_t squares = 0;
        for (std::size_t j = 0; j < ra.samples.size(); ++j) {
            const std::int64_t diff = ra.samples[j] - rb.samples[j];
            squares += diff * diff;
        }
        const auto sum = static_cast<double>(squares);
        total += ra.dh > 0.0 ? sum * ra.dh : sum / static_cast<double>(ra.samples.size());
    }
    return total / static_cast<double>(a.rows());
}

double ect_distance(const EctMatrix& a, const EctMatrix& b) { return std::sqrt(ect_distance_sq(a, b)); }

}  // namespace ect
