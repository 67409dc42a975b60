#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ect/loss.hpp"
#include "ect/report.hpp"
#include "ect/volume.hpp"

namespace ect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `ect` executable. `args` excludes the program name.
// Returns 0 on success, 1 on a domain error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Deterministic prediction/ground-truth pair on a size^3 grid: ground truth is
// two balls, the prediction a noisy soft version of them with values in [0, 1].
std::pair<GrayVolume, BinaryVolume> synthetic_pair(int size, std::uint64_t seed);

struct BenchOptions {
    std::vector<int> sizes{8, 16, 32, 64};
    int runs = 5;
    LossConfig config;
};

// Median wall time per phase (binarize, cell scan, curve, distance) for each
// size, plus the transform-time ratio when the direction count doubles.
Json bench(const BenchOptions& options);

}  // namespace ect::cli
