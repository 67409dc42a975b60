#include "ect/report.hpp"

namespace ect {

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json to_json(const LossConfig& cfg) {
    Json j;
    j["lambda"] = cfg.lambda;
    j["thresholds"] = cfg.thresholds;
    j["directions"] = cfg.directions;
    j["steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["mode"] = std::string(to_string(cfg.direction_mode));
    j["range"] = std::string(to_string(cfg.range_mode));
    return j;
}

Json to_json(const CellCounts& counts) {
    Json j;
    j["counts"] = counts.counts;
    j["euler_characteristic"] = euler_characteristic(counts);
    return j;
}

Json to_json(const EulerCurve& curve) {
    Json j;
    j["h_min"] = curve.h_min;
    j["h_max"] = curve.h_max;
    j["dh"] = curve.dh;
    j["samples"] = curve.samples;
    return j;
}

Json to_json(const EctMatrix& matrix) {
    Json j;
    Json directions = Json::array();
    Json ranges = Json::array();
    Json curves = Json::array();
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        directions.push_back(to_json(matrix.directions[i]));
        ranges.push_back(Json::array({matrix.curves[i].h_min, matrix.curves[i].h_max}));
        curves.push_back(matrix.curves[i].samples);
    }
    j["directions"] = std::move(directions);
    j["h_range"] = std::move(ranges);
    j["curves"] = std::move(curves);
    return j;
}

Json to_json(const LossReport& report) {
    Json j;
    j["topo"] = report.topo;
    j["dice"] = report.dice;
    j["total"] = report.total;
    Json terms = Json::array();
    for (const auto& term : report.per_threshold) {
        Json t;
        t["threshold"] = term.threshold;
        t["distance_sq"] = term.distance_sq;
        terms.push_back(std::move(t));
    }
    j["per_threshold"] = std::move(terms);
    return j;
}

Json to_json(const MetricsReport& report) {
    Json j;
    j["iou_error"] = report.iou_error;
    j["volume_error"] = report.volume_error;
    j["surface_error"] = report.surface_error;
    j["otsu_threshold_used"] = report.otsu_threshold_used;
    return j;
}

}  // namespace ect
