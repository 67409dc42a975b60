#include "ect/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ect/cubical.hpp"
#include "ect/loss.hpp"
#include "ect/parallel.hpp"
#include "ect/random.hpp"

namespace ect::verify {

std::vector<BinaryVolume> binarization_sequence(const GrayVolume& volume,
                                                const std::vector<float>& thresholds) {
    std::vector<BinaryVolume> out;
    out.reserve(thresholds.size());
    for (const float tau : thresholds) out.push_back(binarize(volume, tau));
    return out;
}

bool check_lemma1(const GrayVolume& i1, const GrayVolume& i2, int t) {
    const std::size_t distinct = sorted_distinct_union(i1, i2).size();
    if (t < 1 || static_cast<std::size_t>(t) < distinct) {
        throw Error(ErrorCode::invalid_argument,
                    "threshold count " + std::to_string(t) + " is below the " +
                        std::to_string(distinct) + " distinct values of the pair");
    }
    const auto thresholds = select_thresholds(i1, i2, t);
    const bool sequences_equal =
        binarization_sequence(i1, thresholds) == binarization_sequence(i2, thresholds);
    return sequences_equal == (i1 == i2);
}

Lemma1Summary run_lemma1_suite(int trials, const Shape& shape, std::uint64_t seed) {
    static constexpr std::array<float, 6> kPalette{0.0f, 0.125f, 0.25f, 0.5f, 0.75f, 1.0f};
    Lemma1Summary summary;
    for (int trial = 0; trial < trials; ++trial) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
        std::vector<float> a(shape.size());
        for (auto& v : a) {
            // Mostly palette values, occasionally an arbitrary float.
            v = rng.below(8) == 0 ? static_cast<float>(rng.uniform())
                                  : kPalette[rng.below(kPalette.size())];
        }
        std::vector<float> b = a;
        switch (rng.below(3)) {
            case 0:  // identical
                break;
            case 1:  // one voxel changed
                b[rng.below(b.size())] = static_cast<float>(rng.uniform());
                break;
            default:  // independent
                for (auto& v : b) v = kPalette[rng.below(kPalette.size())];
                break;
        }
        const GrayVolume i1(shape, std::move(a));
        const GrayVolume i2(shape, std::move(b));
        const int t = static_cast<int>(sorted_distinct_union(i1, i2).size());
        ++summary.trials;
        if (i1 == i2) ++summary.identical_pairs;
        if (check_lemma1(i1, i2, t)) ++summary.passed;
    }
    return summary;
}

int grid_dimension(const Shape& shape) noexcept {
    return (shape.nx > 1 ? 1 : 0) + (shape.ny > 1 ? 1 : 0) + (shape.nz > 1 ? 1 : 0);
}

CubeCountCheck check_cube_count(const Shape& shape) {
    const BinaryVolume full(shape, true);
    CubeCountCheck check;
    check.shape = shape;
    check.dimension = grid_dimension(shape);
    check.bound = static_cast<int>(std::lround(std::pow(3.0, check.dimension)));
    check.corner_count = count_incident_cubes(full, {0, 0, 0});
    check.pass = true;

    auto interior_on = [](int c, int extent) { return extent == 1 || (c > 0 && c < extent - 1); };
    for (int x = 0; x < shape.nx; ++x) {
        for (int y = 0; y < shape.ny; ++y) {
            for (int z = 0; z < shape.nz; ++z) {
                const int count = count_incident_cubes(full, {x, y, z});
                const bool interior = interior_on(x, shape.nx) && interior_on(y, shape.ny) &&
                                      interior_on(z, shape.nz);
                check.max_count = std::max(check.max_count, count);
                if (interior) ++check.interior_voxels;
                if (count == check.bound) ++check.voxels_at_bound;
                if (count > check.bound || (count == check.bound) != interior) check.pass = false;
            }
        }
    }
    return check;
}

bool check_cube_count_bound(const Shape& shape) { return check_cube_count(shape).pass; }

double riemann_ec_distance(const CubicalComplex& c1, const CubicalComplex& c2, const Vec3& u,
                           int steps) {
    const EulerCurve a = euler_curve(c1, u, steps, RangeMode::grid);
    const EulerCurve b = euler_curve(c2, u, steps, RangeMode::grid);
    std::int64_t squares = 0;
    for (int j = 0; j < steps; ++j) {
        const std::int64_t diff = a.samples[static_cast<std::size_t>(j)] -
                                  b.samples[static_cast<std::size_t>(j)];
        squares += diff * diff;
    }
    return std::sqrt(static_cast<double>(squares) * a.dh);
}

MeasuredDistance measure_ec_distance(const BinaryVolume& b1, const BinaryVolume& b2,
                                     const Vec3& u, int steps) {
    constexpr int kMaxSteps = 1 << 22;
    if (b1.shape() != b2.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
    if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be >= 1");
    const CubicalComplex c1(b1);
    const CubicalComplex c2(b2);

    MeasuredDistance result;
    result.steps = steps;
    result.value = riemann_ec_distance(c1, c2, u, steps);
    while (result.steps < kMaxSteps) {
        const int refined_steps = result.steps * 2;
        const double refined = riemann_ec_distance(c1, c2, u, refined_steps);
        const double scale = std::max(refined, result.value);
        const bool settled = scale == 0.0 || std::abs(refined - result.value) < 1e-3 * scale;
        result.value = refined;
        result.steps = refined_steps;
        if (settled) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double measured_ec_distance(const BinaryVolume& b1, const BinaryVolume& b2, const Vec3& u,
                            int steps) {
    return measure_ec_distance(b1, b2, u, steps).value;
}

double stability_bound(const Shape& shape, int flipped) {
    const int d = std::max(1, grid_dimension(shape));
    return flipped * std::pow(3.0, d) * static_cast<double>(shape.size()) / std::sqrt(d);
}

double direction_sphere_area(int dimension) {
    if (dimension == 2) return 2.0 * std::numbers::pi;
    if (dimension == 3) return 4.0 * std::numbers::pi;
    if (dimension == 1) return 2.0;  // S^0 is two points
    throw Error(ErrorCode::invalid_argument, "unsupported grid dimension");
}

namespace {

Vec3 random_direction(NormalStream& normals, bool planar) {
    for (;;) {
        const Vec3 g{normals.next(), normals.next(), planar ? 0.0 : normals.next()};
        if (g.norm() >= 1e-12) return normalized(g);
    }
}

}  // namespace

std::vector<StabilityTrial> run_stability_suite(int trials, const Shape& grid_shape, int k_max,
                                                std::uint64_t seed,
                                                const StabilityOptions& options) {
    if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
    if (k_max < 0 || static_cast<std::size_t>(k_max) > grid_shape.size()) {
        throw Error(ErrorCode::invalid_argument, "k_max must lie in [0, voxel count]");
    }
    // Slabs (nz == 1) use in-plane directions, i.e. the circle S^1.
    const bool planar = grid_shape.nz == 1;
    const double area = direction_sphere_area(planar ? 2 : 3);

    std::vector<StabilityTrial> results(static_cast<std::size_t>(trials));
    parallel_for(
        results.size(),
        [&](std::size_t index) {
            SplitMix64 rng(mix_seed(seed, index));
            NormalStream normals(rng.next());

            const double density = 0.2 + 0.6 * rng.uniform();
            BinaryVolume base(grid_shape);
            for (std::size_t i = 0; i < grid_shape.size(); ++i) {
                if (rng.uniform() < density) base.set(grid_shape.voxel(i), true);
            }

            const int k = k_max == 0 ? 0 : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k_max)));
            std::vector<std::size_t> order(grid_shape.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            BinaryVolume flipped = base;
            for (int i = 0; i < k; ++i) {
                const auto pick = static_cast<std::size_t>(i) +
                                  static_cast<std::size_t>(rng.below(order.size() - static_cast<std::size_t>(i)));
                std::swap(order[static_cast<std::size_t>(i)], order[pick]);
                const Voxel v = grid_shape.voxel(order[static_cast<std::size_t>(i)]);
                flipped.set(v, !flipped.at(v));
            }

            StabilityTrial& trial = results[index];
            trial.grid_shape = grid_shape;
            trial.k = k;
            trial.direction = random_direction(normals, planar);
            trial.measured = measured_ec_distance(base, flipped, trial.direction, options.steps);
            trial.bound = stability_bound(grid_shape, k);
            trial.pass = trial.measured <= trial.bound;

            double sum = 0.0;
            for (int i = 0; i < options.corollary_directions; ++i) {
                sum += measured_ec_distance(base, flipped, random_direction(normals, planar),
                                            options.steps);
            }
            const double mean = options.corollary_directions > 0
                                    ? sum / options.corollary_directions
                                    : 0.0;
            trial.corollary_measured = area * mean;
            trial.corollary_bound = trial.bound * area;
            trial.corollary_pass = trial.corollary_measured <= trial.corollary_bound;
        },
        options.threads);
    return results;
}

}  // namespace ect::verify
