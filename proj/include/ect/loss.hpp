#pragma once

#include <cstdint>
#include <vector>

#include "ect/transform.hpp"
#include "ect/volume.hpp"

namespace ect {

struct LossConfig {
    double lambda = 0.01;
    int thresholds = 40;   // n
    int directions = 100;  // l
    int steps = 30;        // M
    std::uint64_t seed = 0;
    DirectionMode direction_mode = DirectionMode::random;
    RangeMode range_mode = RangeMode::grid;

    // Throws invalid_argument when a count is < 1 or lambda is negative or not finite.
    void validate() const;
};

struct ThresholdTerm {
    double threshold = 0.0;
    double distance_sq = 0.0;

    friend bool operator==(const ThresholdTerm&, const ThresholdTerm&) = default;
};

struct TopoLoss {
    double topo = 0.0;  // sum of per-threshold terms divided by n
    std::vector<ThresholdTerm> per_threshold;
};

struct LossReport {
    double topo = 0.0;
    double dice = 0.0;
    double total = 0.0;  // dice + lambda * topo
    std::vector<ThresholdTerm> per_threshold;

    friend bool operator==(const LossReport&, const LossReport&) = default;
};

// 1-based index ceil(k*m/n) clamped to [1, m].
std::size_t threshold_rank(std::size_t k, std::size_t m, std::size_t n) noexcept;

// With R = sorted_distinct_union(pred, gt) and m = |R|, returns
// R[ceil(k*m/n)] for k = 1..n (1-based). The last entry is always max(R).
std::vector<float> select_thresholds(const GrayVolume& pred, const GrayVolume& gt, int n);

// Multi-threshold ECT loss. Both volumes are binarized at every selected
// threshold and compared through ECTs that share one direction set drawn
// from cfg.seed. In grid range mode each term is ect_distance_sq. In complex
// range mode the curves are compared sample by sample with unit weights and
// an empty binarization contributes an all-zero curve.
TopoLoss topo_loss(const GrayVolume& pred, const GrayVolume& gt, const LossConfig& cfg,
                   unsigned threads = 0);

// Soft Dice: 1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps), eps = 1e-6.
// Values must lie in [0, 1].
double dice_loss(const GrayVolume& pred, const GrayVolume& gt);
inline constexpr double kDiceEpsilon = 1e-6;

LossReport total_loss(const GrayVolume& pred, const GrayVolume& gt, const LossConfig& cfg,
                      unsigned threads = 0);

}  // namespace ect
