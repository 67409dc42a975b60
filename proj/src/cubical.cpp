#include "ect/cubical.hpp"

#include <string>

namespace ect {
namespace {

// kCubesForCorners[p] has bit m set when every corner c of the cube spanned
// by axes m (c a subset of m) is present in the corner pattern p.
constexpr std::array<std::uint8_t, 256> make_cube_table() {
    std::array<std::uint8_t, 256> table{};
    for (unsigned pattern = 0; pattern < 256; ++pattern) {
        std::uint8_t cubes = 0;
        for (unsigned axes = 0; axes < 8; ++axes) {
            bool present = true;
            for (unsigned corner = 0; corner < 8; ++corner) {
                if ((corner & ~axes) == 0 && (pattern & (1u << corner)) == 0) present = false;
            }
            if (present) cubes = static_cast<std::uint8_t>(cubes | (1u << axes));
        }
        table[pattern] = cubes;
    }
    return table;
}

constexpr auto kCubesForCorners = make_cube_table();

constexpr int sign_of_dim(unsigned axes) { return (__builtin_popcount(axes) & 1) ? -1 : 1; }

// Bit m of result[i] is set when cube (voxel i, axes m) exists.
std::vector<std::uint8_t> cube_masks(const BinaryVolume& volume) {
    const Shape& s = volume.shape();
    std::vector<std::uint8_t> masks(s.size(), 0);
    for (int x = 0; x < s.nx; ++x) {
        for (int y = 0; y < s.ny; ++y) {
            for (int z = 0; z < s.nz; ++z) {
                if (!volume.at(x, y, z)) continue;
                unsigned pattern = 0;
                for (unsigned corner = 0; corner < 8; ++corner) {
                    const Voxel d = corner_offset(corner);
                    if (volume.foreground(x + d.x, y + d.y, z + d.z)) pattern |= 1u << corner;
                }
                masks[s.index(x, y, z)] = kCubesForCorners[pattern];
            }
        }
    }
    return masks;
}

}  // namespace

bool cube_exists(const BinaryVolume& volume, const Voxel& anchor, unsigned axes) noexcept {
    for (unsigned corner = 0; corner < 8; ++corner) {
        if ((corner & ~axes) != 0) continue;
        const Voxel d = corner_offset(corner);
        if (!volume.foreground(anchor.x + d.x, anchor.y + d.y, anchor.z + d.z)) return false;
    }
    return true;
}

std::vector<Cube> enumerate_cells(const BinaryVolume& volume) {
    const auto masks = cube_masks(volume);
    std::vector<Cube> cells;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (masks[i] == 0) continue;
        const Voxel anchor = volume.shape().voxel(i);
        for (unsigned axes = 0; axes < 8; ++axes) {
            if (masks[i] & (1u << axes)) cells.push_back({anchor, axes});
        }
    }
    return cells;
}

CellCounts cell_counts(const BinaryVolume& volume) {
    CellCounts result;
    for (const std::uint8_t mask : cube_masks(volume)) {
        for (unsigned axes = 0; axes < 8; ++axes) {
            if (mask & (1u << axes)) ++result.counts[__builtin_popcount(axes)];
        }
    }
    return result;
}

std::int64_t euler_characteristic(const CellCounts& counts) noexcept {
    return counts.counts[0] - counts.counts[1] + counts.counts[2] - counts.counts[3];
}

int count_incident_cubes(const BinaryVolume& volume, const Voxel& voxel) {
    if (!volume.shape().contains(voxel)) {
        throw Error(ErrorCode::out_of_bounds,
                    "voxel (" + std::to_string(voxel.x) + "," + std::to_string(voxel.y) + "," +
                        std::to_string(voxel.z) + ") is outside the grid");
    }
    int incident = 0;
    for (unsigned axes = 0; axes < 8; ++axes) {
        // Each subset of the spanned axes picks the negative neighbour on those axes.
        for (unsigned back = axes;; back = (back - 1) & axes) {
            const Voxel d = corner_offset(back);
            const Voxel anchor{voxel.x - d.x, voxel.y - d.y, voxel.z - d.z};
            if (cube_exists(volume, anchor, axes)) ++incident;
            if (back == 0) break;
        }
    }
    return incident;
}

CubicalComplex::CubicalComplex(const BinaryVolume& volume) : shape_(volume.shape()) {
    const auto masks = cube_masks(volume);
    for (const std::uint8_t mask : masks) {
        for (unsigned axes = 0; axes < 8; ++axes) {
            if (mask & (1u << axes)) ++counts_.counts[__builtin_popcount(axes)];
        }
    }
    foreground_.reserve(static_cast<std::size_t>(counts_.counts[0]));

    const Shape& s = shape_;
    for (int x = 0; x < s.nx; ++x) {
        for (int y = 0; y < s.ny; ++y) {
            for (int z = 0; z < s.nz; ++z) {
                if (!volume.at(x, y, z)) continue;
                foreground_.push_back({x, y, z});
                for (unsigned octant = 0; octant < 8; ++octant) {
                    int weight = 0;
                    for (unsigned axes = 0; axes < 8; ++axes) {
                        const Voxel d = corner_offset(axes & octant);
                        const int ax = x - d.x;
                        const int ay = y - d.y;
                        const int az = z - d.z;
                        if (ax < 0 || ay < 0 || az < 0) continue;
                        if (masks[s.index(ax, ay, az)] & (1u << axes)) weight += sign_of_dim(axes);
                    }
                    if (weight != 0) weights_[octant].push_back({x, y, z, weight});
                }
            }
        }
    }
}

}  // namespace ect
