#include <algorithm>
#include <chrono>
#include <cmath>

#include "cli.hpp"
#include "ect/cubical.hpp"
#include "ect/random.hpp"
#include "ect/transform.hpp"

namespace ect::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

struct PhaseTimes {
    double binarize = 0.0;
    double cell_scan = 0.0;
    double curve = 0.0;
    double distance = 0.0;
};

// One pass of the loss pipeline with each phase timed separately.
PhaseTimes time_pipeline(const GrayVolume& pred, const GrayVolume& gt, const LossConfig& cfg) {
    PhaseTimes t;
    const auto thresholds = select_thresholds(pred, gt, cfg.thresholds);
    const DirectionSet dirs = sample_directions(static_cast<std::size_t>(cfg.directions),
                                                cfg.seed, cfg.direction_mode);

    auto start = Clock::now();
    std::vector<BinaryVolume> bins;
    bins.reserve(2 * thresholds.size());
    for (const float tau : thresholds) {
        bins.push_back(binarize(pred, tau));
        bins.push_back(binarize(gt, tau));
    }
    t.binarize = seconds_since(start);

    start = Clock::now();
    std::vector<CubicalComplex> complexes;
    complexes.reserve(bins.size());
    for (const auto& b : bins) complexes.emplace_back(b);
    t.cell_scan = seconds_since(start);

    start = Clock::now();
    std::vector<EctMatrix> matrices;
    matrices.reserve(complexes.size());
    for (const auto& c : complexes) {
        matrices.push_back(compute_ect(c, dirs, cfg.steps, RangeMode::grid));
    }
    t.curve = seconds_since(start);

    start = Clock::now();
    double sink = 0.0;
    for (std::size_t k = 0; k + 1 < matrices.size(); k += 2) {
        sink += ect_distance_sq(matrices[k], matrices[k + 1]);
    }
    t.distance = seconds_since(start);
    if (!std::isfinite(sink)) throw Error(ErrorCode::invalid_value, "non-finite distance in bench");
    return t;
}

// Cell scan plus all curves for one binary volume.
double time_transform(const BinaryVolume& volume, const DirectionSet& dirs, int steps) {
    const auto start = Clock::now();
    const EctMatrix m = compute_ect(volume, dirs, steps, RangeMode::grid);
    const double elapsed = seconds_since(start);
    if (m.rows() != dirs.size()) throw Error(ErrorCode::invalid_value, "bench transform lost rows");
    return elapsed;
}

}  // namespace

std::pair<GrayVolume, BinaryVolume> synthetic_pair(int size, std::uint64_t seed) {
    const Shape shape{size, size, size};
    SplitMix64 rng(seed);
    const double c = 0.5 * (size - 1);
    const double r1 = 0.3 * size;
    const double r2 = 0.15 * size;
    const double cx2 = c + 0.3 * size;

    std::vector<float> pred(shape.size());
    std::vector<std::uint8_t> gt(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const Voxel v = shape.voxel(i);
        const double d1 = std::hypot(v.x - c, v.y - c, v.z - c) - r1;
        const double d2 = std::hypot(v.x - std::min(cx2, size - 1.0), v.y - c, v.z - c) - r2;
        const double d = std::min(d1, d2);
        gt[i] = d <= 0.0 ? 1 : 0;
        const double soft = 1.0 / (1.0 + std::exp(1.5 * (d + 0.5)));
        const double noisy = soft + 0.15 * (rng.uniform() - 0.5);
        pred[i] = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
    }
    return {GrayVolume(shape, std::move(pred)), BinaryVolume(shape, std::move(gt))};
}

Json bench(const BenchOptions& options) {
    options.config.validate();
    if (options.runs < 1) throw Error(ErrorCode::invalid_argument, "runs must be >= 1");

    Json report;
    report["config"] = to_json(options.config);
    report["config"]["runs"] = options.runs;
    Json sizes = Json::array();
    for (const int size : options.sizes) {
        if (size < 1) throw Error(ErrorCode::invalid_argument, "sizes must be >= 1");
        const auto [pred, gt_mask] = synthetic_pair(size, options.config.seed);
        const GrayVolume gt = to_gray(gt_mask);

        std::vector<double> binarize_s, scan_s, curve_s, distance_s, total_s;
        for (int run = 0; run < options.runs; ++run) {
            const PhaseTimes t = time_pipeline(pred, gt, options.config);
            binarize_s.push_back(t.binarize);
            scan_s.push_back(t.cell_scan);
            curve_s.push_back(t.curve);
            distance_s.push_back(t.distance);
            total_s.push_back(t.binarize + t.cell_scan + t.curve + t.distance);
        }
        Json entry;
        entry["shape"] = {size, size, size};
        entry["binarize_s"] = median(binarize_s);
        entry["cell_scan_s"] = median(scan_s);
        entry["curve_s"] = median(curve_s);
        entry["distance_s"] = median(distance_s);
        entry["total_s"] = median(total_s);
        sizes.push_back(std::move(entry));
    }
    report["sizes"] = std::move(sizes);

    if (!options.sizes.empty()) {
        const int size = *std::max_element(options.sizes.begin(), options.sizes.end());
        const auto [pred, gt_mask] = synthetic_pair(size, options.config.seed);
        const BinaryVolume volume = binarize(pred, 0.5);
        const auto l = static_cast<std::size_t>(options.config.directions);
        const DirectionSet base = sample_directions(l, options.config.seed, options.config.direction_mode);
        const DirectionSet doubled =
            sample_directions(2 * l, options.config.seed, options.config.direction_mode);
        std::vector<double> t_base, t_doubled;
        for (int run = 0; run < options.runs; ++run) {
            t_base.push_back(time_transform(volume, base, options.config.steps));
            t_doubled.push_back(time_transform(volume, doubled, options.config.steps));
        }
        Json scaling;
        scaling["shape"] = {size, size, size};
        scaling["directions"] = l;
        scaling["transform_s"] = median(t_base);
        scaling["transform_doubled_s"] = median(t_doubled);
        scaling["ratio"] = median(t_doubled) / median(t_base);
        report["direction_scaling"] = std::move(scaling);
    }
    return report;
}

}  // namespace ect::cli
