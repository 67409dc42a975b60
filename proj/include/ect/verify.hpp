#pragma once

#include <cstdint>
#include <vector>

#include "ect/transform.hpp"
#include "ect/volume.hpp"

namespace ect::verify {

// ---------------------------------------------------------------------------
// Threshold-sequence injectivity
// ---------------------------------------------------------------------------

// Binarizations of `volume` at each threshold, in order.
std::vector<BinaryVolume> binarization_sequence(const GrayVolume& volume,
                                                const std::vector<float>& thresholds);

// True iff (the t-threshold binarization sequences agree) <=> (i1 == i2).
// Throws invalid_argument when t is below the number of distinct values of
// i1 and i2 together.
bool check_lemma1(const GrayVolume& i1, const GrayVolume& i2, int t);

struct Lemma1Summary {
    int trials = 0;
    int passed = 0;
    int identical_pairs = 0;
};

// Random grayscale pairs drawn from a small value palette so that identical
// pairs and single-voxel differences both occur.
Lemma1Summary run_lemma1_suite(int trials, const Shape& shape, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Incident-cube bound
// ---------------------------------------------------------------------------

// Grid dimension: the number of axes with extent > 1.
int grid_dimension(const Shape& shape) noexcept;

struct CubeCountCheck {
    Shape shape;
    int dimension = 0;
    int bound = 0;          // 3^dimension
    int max_count = 0;      // largest incident-cube count over all voxels
    int corner_count = 0;   // count at voxel (0, 0, 0)
    std::size_t interior_voxels = 0;
    std::size_t voxels_at_bound = 0;
    bool pass = false;      // every count <= bound, equality exactly on interior voxels
};

CubeCountCheck check_cube_count(const Shape& shape);
bool check_cube_count_bound(const Shape& shape);

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

struct MeasuredDistance {
    double value = 0.0;
    int steps = 0;          // resolution of the returned estimate
    bool converged = false;
};

// sqrt(integral over the grid height range of (chi_1(h) - chi_2(h))^2 dh),
// estimated by a left Riemann sum over `steps` intervals. Starting from
// `steps`, the resolution doubles until one doubling moves the estimate by
// less than 0.1%.
MeasuredDistance measure_ec_distance(const BinaryVolume& b1, const BinaryVolume& b2,
                                     const Vec3& u, int steps);
double measured_ec_distance(const BinaryVolume& b1, const BinaryVolume& b2, const Vec3& u,
                            int steps);

// Single-resolution Riemann estimate used by measure_ec_distance.
double riemann_ec_distance(const CubicalComplex& c1, const CubicalComplex& c2, const Vec3& u,
                           int steps);

// k * 3^d * n / sqrt(d), n the number of grid voxels.
double stability_bound(const Shape& shape, int flipped);

// Surface area of the unit sphere of directions: 4*pi for d = 3, 2*pi for d = 2.
double direction_sphere_area(int dimension);

struct StabilityTrial {
    Shape grid_shape;
    int k = 0;
    Vec3 direction;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    // Direction-integrated distance (sphere area times the mean over sampled
    // directions) against the per-direction bound times the sphere area.
    double corollary_measured = 0.0;
    double corollary_bound = 0.0;
    bool corollary_pass = false;
};

struct StabilityOptions {
    int steps = 32;                 // starting resolution for measure_ec_distance
    int corollary_directions = 16;  // directions averaged per trial
    unsigned threads = 0;
};

// Each trial draws a random base volume, flips k distinct voxels (k uniform in
// [1, k_max], or 0 when k_max is 0), and samples directions from the unit
// sphere of the grid's dimension. Per-trial seeds are mix_seed(seed, index).
std::vector<StabilityTrial> run_stability_suite(int trials, const Shape& grid_shape, int k_max,
                                                std::uint64_t seed,
                                                const StabilityOptions& options = {});

}  // namespace ect::verify
