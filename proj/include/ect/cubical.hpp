#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ect/volume.hpp"

namespace ect {

// Axis bits used for cube spans and direction octants.
inline constexpr unsigned kAxisX = 1u;
inline constexpr unsigned kAxisY = 2u;
inline constexpr unsigned kAxisZ = 4u;

// Offset of the corner selected by the axis bits in `corner`.
constexpr Voxel corner_offset(unsigned corner) noexcept {
    return {static_cast<int>(corner & 1u), static_cast<int>((corner >> 1) & 1u),
            static_cast<int>((corner >> 2) & 1u)};
}

// An i-cube: the 2^i foreground voxels anchor + {0,1} along each axis in `axes`.
struct Cube {
    Voxel anchor;
    unsigned axes = 0;

    int dim() const noexcept { return __builtin_popcount(axes); }
    friend bool operator==(const Cube&, const Cube&) = default;
};

struct CellCounts {
    std::array<std::int64_t, 4> counts{};  // counts[i] = number of i-cubes

    friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

// True when every voxel of the cube (anchor, axes) is inside the grid and set.
bool cube_exists(const BinaryVolume& volume, const Voxel& anchor, unsigned axes) noexcept;

// Every cube of the complex, each once, ordered by anchor then axes.
std::vector<Cube> enumerate_cells(const BinaryVolume& volume);

CellCounts cell_counts(const BinaryVolume& volume);

// Alternating sum over dimensions.
std::int64_t euler_characteristic(const CellCounts& counts) noexcept;

// Number of cubes of any dimension that have `voxel` as a vertex.
int count_incident_cubes(const BinaryVolume& volume, const Voxel& voxel);

// Implicit cubical complex of a binary volume.
//
// Along a direction u a cube enters the height filtration at the height of
// its top vertex: anchor plus the unit step on every spanned axis where
// u_a > 0. The top vertex depends only on the sign pattern of u (its octant),
// so for each of the 8 octants the complex collapses to a signed weight per
// voxel, w(v) = sum of (-1)^dim over cubes whose top vertex is v. The Euler
// curve is then the cumulative sum of those weights ordered by vertex height.
// Voxels deep inside the foreground carry weight 0 and are dropped.
class CubicalComplex {
public:
    struct WeightedVertex {
        int x = 0;
        int y = 0;
        int z = 0;
        int weight = 0;
    };

    explicit CubicalComplex(const BinaryVolume& volume);

    const Shape& shape() const noexcept { return shape_; }
    const CellCounts& counts() const noexcept { return counts_; }
    std::int64_t euler_characteristic() const noexcept {
        return ect::euler_characteristic(counts_);
    }
    bool empty() const noexcept { return counts_.counts[0] == 0; }

    // Octant bit a is set when the direction's component on axis a is > 0.
    std::span<const WeightedVertex> weights(unsigned octant) const noexcept {
        return weights_[octant & 7u];
    }
    std::span<const Voxel> foreground() const noexcept { return foreground_; }

private:
    Shape shape_;
    CellCounts counts_;
    std::vector<Voxel> foreground_;
    std::array<std::vector<WeightedVertex>, 8> weights_;
};

}  // namespace ect
