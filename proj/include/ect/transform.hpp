#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ect/cubical.hpp"
#include "ect/volume.hpp"

namespace ect {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const noexcept;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class DirectionMode { random, fibonacci };
// grid: heights span the grid's corners, so every volume on one grid shares
// sample heights. complex: heights span the foreground voxels only.
enum class RangeMode { grid, complex };

std::string_view to_string(DirectionMode mode) noexcept;
std::string_view to_string(RangeMode mode) noexcept;
DirectionMode parse_direction_mode(std::string_view text);
RangeMode parse_range_mode(std::string_view text);

struct DirectionSet {
    std::vector<Vec3> directions;
    std::uint64_t seed = 0;
    DirectionMode mode = DirectionMode::random;

    std::size_t size() const noexcept { return directions.size(); }
    const Vec3& operator[](std::size_t i) const noexcept { return directions[i]; }
};

// Random mode normalises three Box-Muller normals drawn from a splitmix64
// stream seeded with `seed`; fibonacci mode is the spherical Fibonacci lattice
// and ignores the seed.
DirectionSet sample_directions(std::size_t count, std::uint64_t seed, DirectionMode mode);

// Throws invalid_argument unless the vector is finite and non-zero.
Vec3 normalized(const Vec3& v);

// u . v with v the voxel's integer lattice coordinates. Evaluated as
// (ux*x + uy*y) + uz*z everywhere, so heights are comparable bit-for-bit.
double vertex_height(const Voxel& v, const Vec3& u) noexcept;

// Octant bit a is set when u_a > 0; see CubicalComplex::weights.
unsigned direction_octant(const Vec3& u) noexcept;

struct HeightRange {
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const HeightRange&, const HeightRange&) = default;
};

HeightRange grid_height_range(const Shape& shape, const Vec3& u) noexcept;
// Throws empty_volume for an empty complex.
HeightRange complex_height_range(const CubicalComplex& complex, const Vec3& u);

struct EulerCurve {
    double h_min = 0.0;
    double h_max = 0.0;
    double dh = 0.0;  // (h_max - h_min) / steps; 0 for a degenerate range
    std::vector<std::int64_t> samples;  // steps + 1 values

    int steps() const noexcept { return static_cast<int>(samples.size()) - 1; }
    // Height of sample j: h_min + j*dh, except the last sample is pinned to
    // h_max so the full complex is always counted there.
    double height(int j) const noexcept;

    friend bool operator==(const EulerCurve&, const EulerCurve&) = default;
};

EulerCurve euler_curve(const CubicalComplex& complex, const Vec3& u, int steps, RangeMode range);
EulerCurve euler_curve(const BinaryVolume& volume, const Vec3& u, int steps, RangeMode range);

struct EctMatrix {
    std::vector<Vec3> directions;
    int steps = 0;
    RangeMode range = RangeMode::grid;
    std::vector<EulerCurve> curves;  // one row per direction

    std::size_t rows() const noexcept { return curves.size(); }
    friend bool operator==(const EctMatrix&, const EctMatrix&) = default;
};

// Rows are computed independently (in parallel when threads != 1) and stored
// by index, so the result does not depend on the thread count.
EctMatrix compute_ect(const CubicalComplex& complex, const DirectionSet& dirs, int steps,
                      RangeMode range, unsigned threads = 0);
EctMatrix compute_ect(const BinaryVolume& volume, const DirectionSet& dirs, int steps,
                      RangeMode range, unsigned threads = 0);

// Monte Carlo estimate of the squared ECT distance:
//   (1/l) * sum_i sum_j (A[i][j] - B[i][j])^2 * dh_i
// A row with a degenerate range (dh == 0) gets unit total weight, i.e. each of
// its steps + 1 samples is weighted 1/(steps + 1).
// Throws range_mismatch unless both matrices share directions, steps and
// per-row height ranges.
double ect_distance_sq(const EctMatrix& a, const EctMatrix& b);
double ect_distance(const EctMatrix& a, const EctMatrix& b);

}  // namespace ect
