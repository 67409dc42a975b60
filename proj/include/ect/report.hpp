#pragma once

#include <json.hpp>

#include "ect/cubical.hpp"
#include "ect/loss.hpp"
#include "ect/metrics.hpp"
#include "ect/transform.hpp"

// JSON views of the result types. Keys keep insertion order and doubles are
// written as shortest round-trip decimals, so equal results serialize to
// identical bytes.
namespace ect {

using Json = nlohmann::ordered_json;

Json to_json(const Vec3& v);
Json to_json(const LossConfig& cfg);
Json to_json(const CellCounts& counts);
Json to_json(const EulerCurve& curve);
Json to_json(const EctMatrix& matrix);
Json to_json(const LossReport& report);
Json to_json(const MetricsReport& report);

}  // namespace ect
