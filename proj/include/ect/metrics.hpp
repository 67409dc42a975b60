#pragma once

#include <cstddef>

#include "ect/volume.hpp"

namespace ect {

struct MetricsReport {
    double iou_error = 0.0;
    double volume_error = 0.0;
    double surface_error = 0.0;
    double otsu_threshold_used = 0.0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// 1 - |pred & gt| / |pred | gt|. Throws undefined_metric when both are empty.
double iou_error(const BinaryVolume& pred, const BinaryVolume& gt);

// |count(pred) - count(gt)| / count(gt). Throws undefined_metric for empty gt.
double volume_error(const BinaryVolume& pred, const BinaryVolume& gt);

// Foreground voxels with at least one background 6-neighbour; positions
// outside the grid count as background.
std::size_t surface_voxel_count(const BinaryVolume& volume);

// |S(pred) - S(gt)| / S(gt). Throws undefined_metric for empty gt.
double surface_error(const BinaryVolume& pred, const BinaryVolume& gt);

// Binarizes pred at its Otsu threshold and compares against gt.
MetricsReport evaluate(const GrayVolume& pred, const BinaryVolume& gt);

}  // namespace ect
