#include "ect/metrics.hpp"

#include <array>
#include <cstdint>

namespace ect {
namespace {

void require_same_shape(const BinaryVolume& a, const BinaryVolume& b) {
    if (a.shape() != b.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
}

double relative_count_error(std::size_t pred, std::size_t gt) {
    const std::size_t diff = pred > gt ? pred - gt : gt - pred;
    return static_cast<double>(diff) / static_cast<double>(gt);
}

}  // namespace

double iou_error(const BinaryVolume& pred, const BinaryVolume& gt) {
    require_same_shape(pred, gt);
    std::size_t both = 0;
    std::size_t either = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        both += (pred[i] && gt[i]) ? 1 : 0;
        either += (pred[i] || gt[i]) ? 1 : 0;
    }
    if (either == 0) throw Error(ErrorCode::undefined_metric, "IoU is undefined for two empty masks");
    return 1.0 - static_cast<double>(both) / static_cast<double>(either);
}

double volume_error(const BinaryVolume& pred, const BinaryVolume& gt) {
    require_same_shape(pred, gt);
    const std::size_t gt_count = gt.count();
    if (gt_count == 0) throw Error(ErrorCode::undefined_metric, "volume error needs non-empty ground truth");
    return relative_count_error(pred.count(), gt_count);
}

std::size_t surface_voxel_count(const BinaryVolume& volume) {
    static constexpr std::array<std::array<int, 3>, 6> kNeighbours{
        {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}}};
    const Shape& s = volume.shape();
    std::size_t surface = 0;
    for (int x = 0; x < s.nx; ++x) {
        for (int y = 0; y < s.ny; ++y) {
            for (int z = 0; z < s.nz; ++z) {
                if (!volume.at(x, y, z)) continue;
                for (const auto& d : kNeighbours) {
                    if (!volume.foreground(x + d[0], y + d[1], z + d[2])) {
                        ++surface;
                        break;
                    }
                }
            }
        }
    }
    return surface;
}

double surface_error(const BinaryVolume& pred, const BinaryVolume& gt) {
    require_same_shape(pred, gt);
    const std::size_t gt_surface = surface_voxel_count(gt);
    if (gt_surface == 0) throw Error(ErrorCode::undefined_metric, "surface error needs non-empty ground truth");
    return relative_count_error(surface_voxel_count(pred), gt_surface);
}

MetricsReport evaluate(const GrayVolume& pred, const BinaryVolume& gt) {
    if (pred.shape() != gt.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
    MetricsReport report;
    report.otsu_threshold_used = otsu_threshold(pred);
    const BinaryVolume mask = binarize(pred, report.otsu_threshold_used);
    report.iou_error = iou_error(mask, gt);
    report.volume_error = volume_error(mask, gt);
    report.surface_error = surface_error(mask, gt);
    return report;
}

}  // namespace ect
