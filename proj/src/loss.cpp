#include "ect/loss.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ect/parallel.hpp"

namespace ect {

void LossConfig::validate() const {
    if (thresholds < 1) throw Error(ErrorCode::invalid_argument, "thresholds must be >= 1");
    if (directions < 1) throw Error(ErrorCode::invalid_argument, "directions must be >= 1");
    if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be >= 1");
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw Error(ErrorCode::invalid_argument, "lambda must be finite and >= 0");
    }
}

std::size_t threshold_rank(std::size_t k, std::size_t m, std::size_t n) noexcept {
    const std::size_t rank = (k * m + n - 1) / n;
    return rank < 1 ? 1 : rank > m ? m : rank;
}

std::vector<float> select_thresholds(const GrayVolume& pred, const GrayVolume& gt, int n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "threshold count must be >= 1");
    const auto values = sorted_distinct_union(pred, gt);
    const std::size_t m = values.size();
    std::vector<float> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
        out.push_back(values[threshold_rank(k, m, static_cast<std::size_t>(n)) - 1]);
    }
    return out;
}

namespace {

// Sample-by-sample comparison used in complex range mode, where the two
// curves of a row sit on different height grids. Missing curves are zero.
double samplewise_distance_sq(const EctMatrix* a, const EctMatrix* b, std::size_t rows,
                              std::size_t samples) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        std::int64_t squares = 0;
        for (std::size_t j = 0; j < samples; ++j) {
            const std::int64_t va = a ? a->curves[i].samples[j] : 0;
            const std::int64_t vb = b ? b->curves[i].samples[j] : 0;
            squares += (va - vb) * (va - vb);
        }
        total += static_cast<double>(squares);
    }
    return total / static_cast<double>(rows);
}

}  // namespace

TopoLoss topo_loss(const GrayVolume& pred, const GrayVolume& gt, const LossConfig& cfg,
                   unsigned threads) {
    cfg.validate();
    const auto thresholds = select_thresholds(pred, gt, cfg.thresholds);
    const DirectionSet dirs = sample_directions(static_cast<std::size_t>(cfg.directions),
                                                cfg.seed, cfg.direction_mode);
    const std::size_t n = thresholds.size();

    std::vector<BinaryVolume> pred_bins;
    std::vector<BinaryVolume> gt_bins;
    pred_bins.reserve(n);
    gt_bins.reserve(n);
    for (const float tau : thresholds) {
        pred_bins.push_back(binarize(pred, tau));
        gt_bins.push_back(binarize(gt, tau));
    }

    // Thresholds are non-decreasing, so repeated binarizations are contiguous.
    // Each distinct binarization that takes part in a non-zero term gets one
    // ECT job; jobs run in parallel and land in fixed slots.
    struct Job {
        const BinaryVolume* volume = nullptr;
        std::unique_ptr<EctMatrix> result;
    };
    std::vector<Job> jobs;
    std::vector<std::ptrdiff_t> pred_job(n, -1);
    std::vector<std::ptrdiff_t> gt_job(n, -1);
    auto assign = [&](std::vector<BinaryVolume>& bins, std::vector<std::ptrdiff_t>& slot,
                      std::size_t k) {
        if (k > 0 && slot[k - 1] >= 0 && bins[k] == bins[k - 1]) {
            slot[k] = slot[k - 1];
            return;
        }
        slot[k] = static_cast<std::ptrdiff_t>(jobs.size());
        jobs.push_back({&bins[k], nullptr});
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (pred_bins[k] == gt_bins[k]) continue;
        assign(pred_bins, pred_job, k);
        assign(gt_bins, gt_job, k);
    }

    const bool complex_range = cfg.range_mode == RangeMode::complex;
    parallel_for(
        jobs.size(),
        [&](std::size_t i) {
            const CubicalComplex complex(*jobs[i].volume);
            if (complex_range && complex.empty()) return;
            jobs[i].result = std::make_unique<EctMatrix>(
                compute_ect(complex, dirs, cfg.steps, cfg.range_mode, 1));
        },
        threads);

    TopoLoss loss;
    loss.per_threshold.reserve(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double term = 0.0;
        if (pred_job[k] >= 0) {
            const EctMatrix* a = jobs[static_cast<std::size_t>(pred_job[k])].result.get();
            const EctMatrix* b = jobs[static_cast<std::size_t>(gt_job[k])].result.get();
            term = complex_range
                       ? samplewise_distance_sq(a, b, dirs.size(),
                                                static_cast<std::size_t>(cfg.steps) + 1)
                       : ect_distance_sq(*a, *b);
        }
        loss.per_threshold.push_back({thresholds[k], term});
        sum += term;
    }
    loss.topo = sum / static_cast<double>(n);
    return loss;
}

double dice_loss(const GrayVolume& pred, const GrayVolume& gt) {
    if (pred.shape() != gt.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
    double overlap = 0.0;
    double pred_sum = 0.0;
    double gt_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = pred[i];
        const double g = gt[i];
        if (p < 0.0 || p > 1.0 || g < 0.0 || g > 1.0) {
            throw Error(ErrorCode::invalid_value, "Dice loss needs values in [0, 1]");
        }
        overlap += p * g;
        pred_sum += p;
        gt_sum += g;
    }
    return 1.0 - (2.0 * overlap + kDiceEpsilon) / (pred_sum + gt_sum + kDiceEpsilon);
}

LossReport total_loss(const GrayVolume& pred, const GrayVolume& gt, const LossConfig& cfg,
                      unsigned threads) {
    cfg.validate();
    LossReport report;
    report.dice = dice_loss(pred, gt);
    TopoLoss topo = topo_loss(pred, gt, cfg, threads);
    report.topo = topo.topo;
    report.per_threshold = std::move(topo.per_threshold);
    report.total = report.dice + cfg.lambda * report.topo;
    return report;
}

}  // namespace ect
