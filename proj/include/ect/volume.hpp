#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "ect/error.hpp"

namespace ect {

// Integer lattice position of a voxel. Voxels are the vertices of the complex.
struct Voxel {
    int x = 0;
    int y = 0;
    int z = 0;

    friend bool operator==(const Voxel&, const Voxel&) = default;
};

// Grid extent. Storage is row-major with x slowest and z fastest.
struct Shape {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    std::size_t size() const noexcept {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    bool contains(int x, int y, int z) const noexcept {
        return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz;
    }
    bool contains(const Voxel& v) const noexcept { return contains(v.x, v.y, v.z); }
    std::size_t index(int x, int y, int z) const noexcept {
        return (static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
                static_cast<std::size_t>(y)) *
                   static_cast<std::size_t>(nz) +
               static_cast<std::size_t>(z);
    }
    std::size_t index(const Voxel& v) const noexcept { return index(v.x, v.y, v.z); }
    Voxel voxel(std::size_t i) const noexcept {
        const auto z = static_cast<int>(i % static_cast<std::size_t>(nz));
        i /= static_cast<std::size_t>(nz);
        const auto y = static_cast<int>(i % static_cast<std::size_t>(ny));
        const auto x = static_cast<int>(i / static_cast<std::size_t>(ny));
        return {x, y, z};
    }

    friend bool operator==(const Shape&, const Shape&) = default;
};

// Dense scalar grid; values are finite 32-bit floats.
class GrayVolume {
public:
    GrayVolume() = default;
    // Constant-filled volume.
    explicit GrayVolume(Shape shape, float fill = 0.0f);
    // Throws shape_mismatch if values.size() != shape.size() and invalid_value on
    // NaN or infinite entries.
    GrayVolume(Shape shape, std::vector<float> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const float> values() const noexcept { return values_; }

    float operator[](std::size_t i) const noexcept { return values_[i]; }
    float at(int x, int y, int z) const noexcept { return values_[shape_.index(x, y, z)]; }

    friend bool operator==(const GrayVolume&, const GrayVolume&) = default;

private:
    Shape shape_;
    std::vector<float> values_;
};

class BinaryVolume {
public:
    BinaryVolume() = default;
    explicit BinaryVolume(Shape shape, bool fill = false);
    BinaryVolume(Shape shape, std::vector<std::uint8_t> bits);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return bits_.size(); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    bool at(int x, int y, int z) const noexcept { return bits_[shape_.index(x, y, z)] != 0; }
    bool at(const Voxel& v) const noexcept { return at(v.x, v.y, v.z); }
    // Out-of-grid positions read as background.
    bool foreground(int x, int y, int z) const noexcept {
        return shape_.contains(x, y, z) && at(x, y, z);
    }

    void set(int x, int y, int z, bool value) noexcept {
        bits_[shape_.index(x, y, z)] = value ? 1 : 0;
    }
    void set(const Voxel& v, bool value) noexcept { set(v.x, v.y, v.z, value); }

    std::size_t count() const noexcept;
    bool empty() const noexcept { return count() == 0; }

    friend bool operator==(const BinaryVolume&, const BinaryVolume&) = default;

private:
    Shape shape_;
    std::vector<std::uint8_t> bits_;
};

using AnyVolume = std::variant<GrayVolume, BinaryVolume>;

// VGRID v1: "VGRID1\n", a one-line JSON header, then a little-endian payload.
// u8 payloads whose values are all 0/1 come back as BinaryVolume.
AnyVolume load_volume(const std::filesystem::path& path);
void save_volume(const GrayVolume& volume, const std::filesystem::path& path);
void save_volume(const BinaryVolume& volume, const std::filesystem::path& path);
void save_volume(const AnyVolume& volume, const std::filesystem::path& path);

// Binary volumes widen to {0, 1}.
GrayVolume to_gray(const BinaryVolume& volume);
GrayVolume to_gray(const AnyVolume& volume);
// Binary input is returned as-is; grayscale must already be {0, 1}-valued.
BinaryVolume to_binary(const AnyVolume& volume);

// bit(x) = value(x) >= threshold.
BinaryVolume binarize(const GrayVolume& volume, double threshold);

// Strictly increasing list of every value present in a or b.
std::vector<float> sorted_distinct_union(const GrayVolume& a, const GrayVolume& b);

// Otsu cut over 256 uniform bins spanning [min, max]. A constant volume
// returns its value, so binarize(v, otsu_threshold(v)) is all-true.
double otsu_threshold(const GrayVolume& volume);

}  // namespace ect
