#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ect/cubical.hpp"
#include "ect/metrics.hpp"
#include "ect/parallel.hpp"
#include "ect/random.hpp"
#include "ect/transform.hpp"
#include "ect/verify.hpp"

namespace ect::cli {
namespace {

// Reported as exit code 2 alongside CLI11's own parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, sep)) parts.push_back(part);
    return parts;
}

Vec3 parse_direction(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("--direction expects x,y,z");
    try {
        return normalized({std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])});
    } catch (const std::logic_error&) {
        throw UsageError("--direction expects three numbers");
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

Shape parse_shape(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("--shape expects nx,ny,nz");
    try {
        Shape s{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2])};
        if (s.nx < 1 || s.ny < 1 || s.nz < 1) throw UsageError("--shape extents must be >= 1");
        return s;
    } catch (const std::logic_error&) {
        throw UsageError("--shape expects three integers");
    }
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    try {
        for (const auto& part : split(text, ',')) sizes.push_back(std::stoi(part));
    } catch (const std::logic_error&) {
        throw UsageError("--sizes expects a comma-separated list of integers");
    }
    return sizes;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

Json verify_lemma1(int trials, const Shape& shape, std::uint64_t seed, bool& ok) {
    const auto summary = verify::run_lemma1_suite(trials, shape, seed);
    Json j;
    j["trials"] = summary.trials;
    j["passed"] = summary.passed;
    j["identical_pairs"] = summary.identical_pairs;
    ok = summary.passed == summary.trials;
    return j;
}

Json verify_lemma2(int max_extent, bool& ok) {
    int checked = 0;
    int passed = 0;
    int max_3d_interior = 0;
    int max_2d_interior = 0;
    int corner_3d = std::numeric_limits<int>::max();
    for (int nx = 1; nx <= max_extent; ++nx) {
        for (int ny = 1; ny <= max_extent; ++ny) {
            for (int nz = 1; nz <= max_extent; ++nz) {
                const auto check = verify::check_cube_count({nx, ny, nz});
                ++checked;
                if (check.pass) ++passed;
                if (check.dimension == 3) {
                    corner_3d = std::min(corner_3d, check.corner_count);
                    if (check.interior_voxels > 0) {
                        max_3d_interior = std::max(max_3d_interior, check.max_count);
                    }
                }
                if (nz == 1 && nx > 1 && ny > 1 && check.interior_voxels > 0) {
                    max_2d_interior = std::max(max_2d_interior, check.max_count);
                }
            }
        }
    }
    Json j;
    j["grids_checked"] = checked;
    j["passed"] = passed;
    j["max_3d_interior"] = max_3d_interior;
    j["max_2d_interior"] = max_2d_interior;
    j["corner_3d"] = corner_3d == std::numeric_limits<int>::max() ? 0 : corner_3d;
    ok = passed == checked;
    return j;
}

Json stability_summary(const std::vector<verify::StabilityTrial>& trials) {
    int passed = 0;
    int corollary_passed = 0;
    double worst = 0.0;
    double worst_corollary = 0.0;
    for (const auto& t : trials) {
        if (t.pass) ++passed;
        if (t.corollary_pass) ++corollary_passed;
        if (t.bound > 0.0) {
            worst = std::max(worst, t.measured / t.bound);
            worst_corollary = std::max(worst_corollary, t.corollary_measured / t.corollary_bound);
        }
    }
    Json j;
    j["shape"] = {trials.front().grid_shape.nx, trials.front().grid_shape.ny,
                  trials.front().grid_shape.nz};
    j["trials"] = trials.size();
    j["passed"] = passed;
    j["corollary_passed"] = corollary_passed;
    j["worst_slack_ratio"] = worst;
    j["worst_corollary_ratio"] = worst_corollary;
    return j;
}

Json verify_stability(int trials, const std::vector<Shape>& shapes, int k_max, std::uint64_t seed,
                      bool& ok) {
    Json grids = Json::array();
    int total = 0;
    int passed = 0;
    int corollary_passed = 0;
    ok = true;
    for (std::size_t g = 0; g < shapes.size(); ++g) {
        // Split the trial budget across grids; earlier grids take the remainder.
        const int share = trials / static_cast<int>(shapes.size()) +
                          (static_cast<int>(g) < trials % static_cast<int>(shapes.size()) ? 1 : 0);
        if (share == 0) continue;
        const auto results = verify::run_stability_suite(share, shapes[g], k_max, mix_seed(seed, g));
        Json summary = stability_summary(results);
        total += share;
        passed += summary["passed"].get<int>();
        corollary_passed += summary["corollary_passed"].get<int>();
        grids.push_back(std::move(summary));
    }
    ok = passed == total && corollary_passed == total;
    Json j;
    j["trials"] = total;
    j["passed"] = passed;
    j["corollary_passed"] = corollary_passed;
    j["grids"] = std::move(grids);
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euler Characteristic Transform tools for voxel volumes", "ect"};
    app.require_subcommand(1);

    LossConfig cfg;
    std::string mode = "random";
    std::string range;
    std::string output = "json";
    unsigned threads = 0;

    auto add_ect_flags = [&](CLI::App* sub) {
        sub->add_option("--directions", cfg.directions, "number of sampled directions (l)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--steps", cfg.steps, "curve steps (M); curves have M+1 samples")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "direction sampling seed");
        sub->add_option("--mode", mode, "direction sampling")
            ->check(CLI::IsMember({"random", "fibonacci"}));
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "worker threads (default: ECT_THREADS or all cores)");
        sub->add_option("--output", output, "output format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_range = [&](CLI::App* sub) {
        sub->add_option("--range", range, "height range: grid or complex")
            ->check(CLI::IsMember({"grid", "complex"}));
    };

    std::string input;
    std::string input_b;

    auto* cells = app.add_subcommand("cells", "cube counts and Euler characteristic");
    cells->add_option("input,--input", input, "volume file")->required()->check(CLI::ExistingFile);
    add_common(cells);

    std::string direction = "0,0,1";
    auto* curve = app.add_subcommand("curve", "Euler curve along one direction");
    curve->add_option("input,--input", input, "volume file")->required()->check(CLI::ExistingFile);
    curve->add_option("--direction", direction, "direction x,y,z (normalized)");
    curve->add_option("--steps", cfg.steps, "curve steps (M)")->check(CLI::PositiveNumber);
    add_range(curve);
    add_common(curve);

    auto* transform = app.add_subcommand("transform", "sampled Euler Characteristic Transform");
    transform->add_option("input,--input", input, "volume file")->required()->check(CLI::ExistingFile);
    add_ect_flags(transform);
    add_range(transform);
    add_common(transform);

    auto* distance = app.add_subcommand("distance", "squared ECT distance between two volumes");
    distance->add_option("a", input, "first volume")->required()->check(CLI::ExistingFile);
    distance->add_option("b", input_b, "second volume")->required()->check(CLI::ExistingFile);
    add_ect_flags(distance);
    add_range(distance);
    add_common(distance);

    auto* loss = app.add_subcommand("loss", "multi-threshold ECT loss plus Dice");
    loss->add_option("pred", input, "predicted volume")->required()->check(CLI::ExistingFile);
    loss->add_option("gt", input_b, "ground-truth volume")->required()->check(CLI::ExistingFile);
    loss->add_option("--lambda", cfg.lambda, "weight of the topological term")
        ->check(CLI::NonNegativeNumber);
    loss->add_option("--thresholds", cfg.thresholds, "number of thresholds (n)")
        ->check(CLI::PositiveNumber);
    add_ect_flags(loss);
    add_range(loss);
    add_common(loss);

    auto* metrics = app.add_subcommand("metrics", "Otsu-binarized IoU, volume and surface errors");
    metrics->add_option("pred", input, "predicted volume")->required()->check(CLI::ExistingFile);
    metrics->add_option("gt", input_b, "binary ground-truth volume")->required()->check(CLI::ExistingFile);
    add_common(metrics);

    std::string suite;
    int trials = 0;
    int k_max = 5;
    int max_extent = 6;
    std::string shape_text;
    std::uint64_t verify_seed = 0;
    auto* verify_cmd = app.add_subcommand("verify", "randomized checks of the theoretical results");
    verify_cmd->add_option("--suite", suite, "lemma1, lemma2 or stability")
        ->required()
        ->check(CLI::IsMember({"lemma1", "lemma2", "stability"}));
    verify_cmd->add_option("--trials", trials, "number of random trials")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", verify_seed, "suite seed");
    verify_cmd->add_option("--k-max", k_max, "largest number of flipped voxels (stability)")
        ->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--max-extent", max_extent, "largest grid extent (lemma2)")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--shape", shape_text, "grid nx,ny,nz (lemma1, stability)");
    add_common(verify_cmd);

    std::string sizes_text = "8,16,32,64";
    int runs = 5;
    auto* bench_cmd = app.add_subcommand("bench", "per-phase timings of the loss pipeline");
    bench_cmd->add_option("--sizes", sizes_text, "cube edge lengths, comma-separated");
    bench_cmd->add_option("--runs", runs, "repetitions per size (median reported)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--lambda", cfg.lambda, "weight of the topological term")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--thresholds", cfg.thresholds, "number of thresholds (n)")
        ->check(CLI::PositiveNumber);
    add_ect_flags(bench_cmd);
    add_common(bench_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (threads > 0) set_default_threads(threads);
        cfg.direction_mode = parse_direction_mode(mode);
        const bool csv = output == "csv";
        auto reject_csv = [&] {
            if (csv) throw UsageError("--output csv is only available for curve and transform");
        };
        auto command_config = [](std::string_view name) {
            Json c;
            c["command"] = name;
            return c;
        };

        if (cells->parsed()) {
            reject_csv();
            const BinaryVolume volume = to_binary(load_volume(input));
            Json j;
            j["config"] = command_config("cells");
            j["shape"] = {volume.shape().nx, volume.shape().ny, volume.shape().nz};
            j.update(to_json(cell_counts(volume)));
            write_json(out, j);
        } else if (curve->parsed()) {
            const RangeMode rm = parse_range_mode(range.empty() ? "complex" : range);
            const Vec3 u = parse_direction(direction);
            const BinaryVolume volume = to_binary(load_volume(input));
            const EulerCurve c = euler_curve(volume, u, cfg.steps, rm);
            if (csv) {
                out << "h,chi\n";
                for (int j = 0; j <= c.steps(); ++j) {
                    out << Json(c.height(j)).dump() << ',' << c.samples[static_cast<std::size_t>(j)] << '\n';
                }
            } else {
                Json j;
                j["config"] = command_config("curve");
                j["config"]["direction"] = to_json(u);
                j["config"]["steps"] = cfg.steps;
                j["config"]["range"] = std::string(to_string(rm));
                j.update(to_json(c));
                write_json(out, j);
            }
        } else if (transform->parsed()) {
            cfg.range_mode = parse_range_mode(range.empty() ? "complex" : range);
            const BinaryVolume volume = to_binary(load_volume(input));
            const DirectionSet dirs = sample_directions(static_cast<std::size_t>(cfg.directions),
                                                        cfg.seed, cfg.direction_mode);
            const EctMatrix m = compute_ect(volume, dirs, cfg.steps, cfg.range_mode);
            if (csv) {
                out << "direction,h,chi\n";
                for (std::size_t i = 0; i < m.rows(); ++i) {
                    const EulerCurve& c = m.curves[i];
                    for (int j = 0; j <= c.steps(); ++j) {
                        out << i << ',' << Json(c.height(j)).dump() << ','
                            << c.samples[static_cast<std::size_t>(j)] << '\n';
                    }
                }
            } else {
                Json j;
                j["config"] = command_config("transform");
                j["config"]["directions"] = cfg.directions;
                j["config"]["steps"] = cfg.steps;
                j["config"]["seed"] = cfg.seed;
                j["config"]["mode"] = mode;
                j["config"]["range"] = std::string(to_string(cfg.range_mode));
                j.update(to_json(m));
                write_json(out, j);
            }
        } else if (distance->parsed()) {
            reject_csv();
            cfg.range_mode = parse_range_mode(range.empty() ? "grid" : range);
            const BinaryVolume a = to_binary(load_volume(input));
            const BinaryVolume b = to_binary(load_volume(input_b));
            if (a.shape() != b.shape()) throw Error(ErrorCode::shape_mismatch, "volume shapes differ");
            const DirectionSet dirs = sample_directions(static_cast<std::size_t>(cfg.directions),
                                                        cfg.seed, cfg.direction_mode);
            const EctMatrix ma = compute_ect(a, dirs, cfg.steps, cfg.range_mode);
            const EctMatrix mb = compute_ect(b, dirs, cfg.steps, cfg.range_mode);
            const double d2 = ect_distance_sq(ma, mb);
            Json j;
            j["config"] = command_config("distance");
            j["config"]["directions"] = cfg.directions;
            j["config"]["steps"] = cfg.steps;
            j["config"]["seed"] = cfg.seed;
            j["config"]["mode"] = mode;
            j["config"]["range"] = std::string(to_string(cfg.range_mode));
            j["distance_sq"] = d2;
            j["distance"] = std::sqrt(d2);
            write_json(out, j);
        } else if (loss->parsed()) {
            reject_csv();
            cfg.range_mode = parse_range_mode(range.empty() ? "grid" : range);
            const GrayVolume pred = to_gray(load_volume(input));
            const GrayVolume gt = to_gray(load_volume(input_b));
            const LossReport report = total_loss(pred, gt, cfg);
            Json j;
            j["config"] = to_json(cfg);
            j.update(to_json(report));
            write_json(out, j);
        } else if (metrics->parsed()) {
            reject_csv();
            const GrayVolume pred = to_gray(load_volume(input));
            const BinaryVolume gt = to_binary(load_volume(input_b));
            Json j;
            j["config"] = command_config("metrics");
            j.update(to_json(evaluate(pred, gt)));
            write_json(out, j);
        } else if (verify_cmd->parsed()) {
            reject_csv();
            bool ok = false;
            Json j;
            j["config"] = command_config("verify");
            j["config"]["suite"] = suite;
            j["config"]["seed"] = verify_seed;
            if (suite == "lemma1") {
                const int n = trials > 0 ? trials : 1000;
                const Shape shape = shape_text.empty() ? Shape{4, 4, 4} : parse_shape(shape_text);
                j["config"]["trials"] = n;
                j["config"]["shape"] = {shape.nx, shape.ny, shape.nz};
                j["result"] = verify_lemma1(n, shape, verify_seed, ok);
            } else if (suite == "lemma2") {
                j["config"]["max_extent"] = max_extent;
                j["result"] = verify_lemma2(max_extent, ok);
            } else {
                const int n = trials > 0 ? trials : 500;
                const std::vector<Shape> shapes = shape_text.empty()
                                                      ? std::vector<Shape>{{4, 4, 4}, {5, 5, 1}}
                                                      : std::vector<Shape>{parse_shape(shape_text)};
                j["config"]["trials"] = n;
                j["config"]["k_max"] = k_max;
                j["result"] = verify_stability(n, shapes, k_max, verify_seed, ok);
            }
            j["pass"] = ok;
            write_json(out, j);
            return ok ? kExitOk : kExitDomain;
        } else if (bench_cmd->parsed()) {
            reject_csv();
            BenchOptions options;
            options.sizes = parse_sizes(sizes_text);
            options.runs = runs;
            options.config = cfg;
            write_json(out, bench(options));
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        Json j;
        j["error"] = std::string(to_string(e.code()));
        j["message"] = e.what();
        err << j.dump() << '\n';
        return kExitDomain;
    }
}

}  // namespace ect::cli
