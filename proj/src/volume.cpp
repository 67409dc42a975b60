#include "ect/volume.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include <json.hpp>

namespace ect {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::io_failure: return "io_failure";
        case ErrorCode::bad_magic: return "bad_magic";
        case ErrorCode::malformed_header: return "malformed_header";
        case ErrorCode::unsupported_dtype: return "unsupported_dtype";
        case ErrorCode::truncated_payload: return "truncated_payload";
        case ErrorCode::trailing_data: return "trailing_data";
        case ErrorCode::shape_mismatch: return "shape_mismatch";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::invalid_value: return "invalid_value";
        case ErrorCode::empty_volume: return "empty_volume";
        case ErrorCode::range_mismatch: return "range_mismatch";
        case ErrorCode::undefined_metric: return "undefined_metric";
        case ErrorCode::out_of_bounds: return "out_of_bounds";
    }
    return "unknown";
}

namespace {

constexpr std::string_view kMagic = "VGRID1\n";
constexpr std::size_t kMaxHeaderBytes = 4096;

void check_shape(const Shape& shape) {
    if (shape.nx <= 0 || shape.ny <= 0 || shape.nz <= 0) {
        throw Error(ErrorCode::invalid_argument, "volume extents must be positive");
    }
}

Shape parse_shape(const nlohmann::json& header) {
    const auto it = header.find("shape");
    if (it == header.end() || !it->is_array() || it->size() != 3) {
        throw Error(ErrorCode::malformed_header, "header needs a 3-element \"shape\"");
    }
    std::array<int, 3> dims{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& d = (*it)[i];
        if (!d.is_number_integer() || d.get<long long>() <= 0 ||
            d.get<long long>() > std::numeric_limits<int>::max()) {
            throw Error(ErrorCode::malformed_header, "shape entries must be positive integers");
        }
        dims[i] = static_cast<int>(d.get<long long>());
    }
    return {dims[0], dims[1], dims[2]};
}

std::string header_line(std::string_view dtype, const Shape& shape) {
    nlohmann::ordered_json header;
    header["dtype"] = dtype;
    header["shape"] = {shape.nx, shape.ny, shape.nz};
    header["order"] = "x-slowest";
    return header.dump() + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& head,
                const char* payload, std::size_t bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_failure, "cannot open for writing: " + path.string());
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(payload, static_cast<std::streamsize>(bytes));
    out.flush();
    if (!out) throw Error(ErrorCode::io_failure, "write failed: " + path.string());
}

float read_f32_le(const unsigned char* p) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, p, sizeof(bits));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    return std::bit_cast<float>(bits);
}

void write_f32_le(float value, unsigned char* p) {
    auto bits = std::bit_cast<std::uint32_t>(value);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(p, &bits, sizeof(bits));
}

}  // namespace

GrayVolume::GrayVolume(Shape shape, float fill) : shape_(shape) {
    check_shape(shape_);
    if (!std::isfinite(fill)) throw Error(ErrorCode::invalid_value, "fill value must be finite");
    values_.assign(shape_.size(), fill);
}

GrayVolume::GrayVolume(Shape shape, std::vector<float> values)
    : shape_(shape), values_(std::move(values)) {
    check_shape(shape_);
    if (values_.size() != shape_.size()) {
        throw Error(ErrorCode::shape_mismatch, "value count does not match shape");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](float v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::invalid_value, "volume contains NaN or infinite values");
    }
}

BinaryVolume::BinaryVolume(Shape shape, bool fill) : shape_(shape) {
    check_shape(shape_);
    bits_.assign(shape_.size(), fill ? 1 : 0);
}

BinaryVolume::BinaryVolume(Shape shape, std::vector<std::uint8_t> bits)
    : shape_(shape), bits_(std::move(bits)) {
    check_shape(shape_);
    if (bits_.size() != shape_.size()) {
        throw Error(ErrorCode::shape_mismatch, "bit count does not match shape");
    }
    for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BinaryVolume::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

AnyVolume load_volume(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_failure, "cannot open: " + path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw Error(ErrorCode::io_failure, "read failed: " + path.string());

    if (bytes.compare(0, kMagic.size(), kMagic) != 0) {
        throw Error(ErrorCode::bad_magic, "missing VGRID1 magic: " + path.string());
    }
    const std::size_t header_end = bytes.find('\n', kMagic.size());
    if (header_end == std::string::npos || header_end - kMagic.size() > kMaxHeaderBytes) {
        throw Error(ErrorCode::malformed_header, "header line is unterminated or too long");
    }

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(kMagic.size()),
                                       bytes.begin() + static_cast<std::ptrdiff_t>(header_end));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_header, std::string("header is not JSON: ") + e.what());
    }
    if (!header.is_object()) throw Error(ErrorCode::malformed_header, "header must be an object");
    const auto order = header.find("order");
    if (order == header.end() || *order != "x-slowest") {
        throw Error(ErrorCode::malformed_header, "header order must be \"x-slowest\"");
    }
    const auto dtype_it = header.find("dtype");
    if (dtype_it == header.end() || !dtype_it->is_string()) {
        throw Error(ErrorCode::malformed_header, "header needs a string \"dtype\"");
    }
    const std::string dtype = dtype_it->get<std::string>();
    const Shape shape = parse_shape(header);

    std::size_t element_bytes = 0;
    if (dtype == "f32") {
        element_bytes = 4;
    } else if (dtype == "u8") {
        element_bytes = 1;
    } else {
        throw Error(ErrorCode::unsupported_dtype, "unsupported dtype \"" + dtype + "\"");
    }

    const std::size_t offset = header_end + 1;
    const std::size_t have = bytes.size() - offset;
    const std::size_t need = shape.size() * element_bytes;
    if (have < need) {
        throw Error(ErrorCode::truncated_payload,
                    "payload has " + std::to_string(have / element_bytes) + " of " +
                        std::to_string(shape.size()) + " voxels");
    }
    if (have > need) throw Error(ErrorCode::trailing_data, "payload is longer than the shape");

    const auto* payload = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
    if (dtype == "f32") {
        std::vector<float> values(shape.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = read_f32_le(payload + 4 * i);
        return GrayVolume(shape, std::move(values));
    }

    std::vector<std::uint8_t> raw(payload, payload + shape.size());
    if (std::all_of(raw.begin(), raw.end(), [](std::uint8_t v) { return v <= 1; })) {
        return BinaryVolume(shape, std::move(raw));
    }
    std::vector<float> values(raw.begin(), raw.end());
    return GrayVolume(shape, std::move(values));
}

void save_volume(const GrayVolume& volume, const std::filesystem::path& path) {
    std::vector<unsigned char> payload(volume.size() * 4);
    for (std::size_t i = 0; i < volume.size(); ++i) write_f32_le(volume[i], payload.data() + 4 * i);
    write_file(path, header_line("f32", volume.shape()),
               reinterpret_cast<const char*>(payload.data()), payload.size());
}

void save_volume(const BinaryVolume& volume, const std::filesystem::path& path) {
    write_file(path, header_line("u8", volume.shape()),
               reinterpret_cast<const char*>(volume.bits().data()), volume.size());
}

void save_volume(const AnyVolume& volume, const std::filesystem::path& path) {
    std::visit([&](const auto& v) { save_volume(v, path); }, volume);
}

GrayVolume to_gray(const BinaryVolume& volume) {
    std::vector<float> values(volume.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = volume[i] ? 1.0f : 0.0f;
    return GrayVolume(volume.shape(), std::move(values));
}

GrayVolume to_gray(const AnyVolume& volume) {
    if (const auto* gray = std::get_if<GrayVolume>(&volume)) return *gray;
    return to_gray(std::get<BinaryVolume>(volume));
}

BinaryVolume to_binary(const AnyVolume& volume) {
    if (const auto* binary = std::get_if<BinaryVolume>(&volume)) return *binary;
    const auto& gray = std::get<GrayVolume>(volume);
    std::vector<std::uint8_t> bits(gray.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const float v = gray[i];
        if (v != 0.0f && v != 1.0f) {
            throw Error(ErrorCode::invalid_value, "expected a {0,1}-valued volume");
        }
        bits[i] = v == 1.0f ? 1 : 0;
    }
    return BinaryVolume(gray.shape(), std::move(bits));
}

BinaryVolume binarize(const GrayVolume& volume, double threshold) {
    std::vector<std::uint8_t> bits(volume.size());
    const auto values = volume.values();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = static_cast<double>(values[i]) >= threshold ? 1 : 0;
    }
    return BinaryVolume(volume.shape(), std::move(bits));
}

std::vector<float> sorted_distinct_union(const GrayVolume& a, const GrayVolume& b) {
    if (a.shape() != b.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
    std::vector<float> values;
    values.reserve(a.size() + b.size());
    values.insert(values.end(), a.values().begin(), a.values().end());
    values.insert(values.end(), b.values().begin(), b.values().end());
    // -0.0f and 0.0f compare equal; normalise so the survivor is deterministic.
    for (auto& v : values) {
        if (v == 0.0f) v = 0.0f;
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

double otsu_threshold(const GrayVolume& volume) {
    constexpr int kBins = 256;
    const auto values = volume.values();
    if (values.empty()) throw Error(ErrorCode::empty_volume, "Otsu needs a non-empty volume");

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (lo == hi) return lo;

    // Bin b holds values v with edge[b] <= v < edge[b+1], so "bin >= k" and
    // "v >= edge[k]" select the same voxels.
    const double width = (hi - lo) / kBins;
    std::array<double, kBins> edges{};
    for (int b = 0; b < kBins; ++b) edges[b] = lo + b * width;

    std::array<std::size_t, kBins> counts{};
    std::array<double, kBins> sums{};
    for (const float v : values) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), static_cast<double>(v));
        const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
        ++counts[bin];
        sums[bin] += v;
    }

    const auto total = static_cast<double>(values.size());
    double total_sum = 0.0;
    for (const double s : sums) total_sum += s;

    double best_variance = -1.0;
    int best_cut = 1;
    std::size_t below_count = 0;
    double below_sum = 0.0;
    for (int cut = 1; cut < kBins; ++cut) {
        below_count += counts[cut - 1];
        below_sum += sums[cut - 1];
        const std::size_t above_count = values.size() - below_count;
        if (below_count == 0 || above_count == 0) continue;
        const double w0 = static_cast<double>(below_count) / total;
        const double w1 = static_cast<double>(above_count) / total;
        const double mu0 = below_sum / static_cast<double>(below_count);
        const double mu1 = (total_sum - below_sum) / static_cast<double>(above_count);
        const double variance = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (variance > best_variance) {
            best_variance = variance;
            best_cut = cut;
        }
    }
    return edges[best_cut];
}

}  // namespace ect
