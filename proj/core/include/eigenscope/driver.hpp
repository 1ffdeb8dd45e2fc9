#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenscope/geometry.hpp"

namespace eigenscope {

using json = nlohmann::ordered_json;

// Validated experiment description. Everything an experiment does is a
// deterministic function of this struct (randomness flows through the
// seed), which is what makes reruns byte-identical.
struct ExperimentConfig {
    json raw;
    std::string experiment;

    Manifold manifold = Manifold::sphere(2);
    std::string submanifold;  // catalog name, empty when unused
    std::optional<double> colatitude;
    std::optional<double> epsilon;
    std::string density = "default";  // "default" | "bump" | "uniform"

    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double lambda_step = 1.0;
    std::vector<double> lambdas;  // explicit list (sphase)
    int degree_min = 0;
    int degree_max = 0;
    bool has_degree_range = false;
    double band_width = 1.0;

    int samples = 1000;
    double T = 10.0;
    double tol = 1e-3;
    double t_min = 0.1;
    double dt = 0.01;
    std::uint64_t seed = 42;

    std::string phase_name;  // sphase test-phase catalog entry
    struct HessianSpec {
        std::string kind;  // "wave_phase" | "composition"
        int d = 1;
        int n = 2;
    };
    std::vector<HessianSpec> hessian_checks;

    std::string output;  // path prefix for <output>.csv / <output>.json
};

// Throws ConfigError on missing/invalid fields; unknown experiment
// names list the valid ones in the message.
ExperimentConfig parse_config(const json& raw);

// "key=value" with dotted paths into the raw JSON ("manifold.kind=torus");
// the value is parsed as JSON when possible, else taken as a string.
void apply_override(json& raw, const std::string& assignment);

struct RunArtifacts {
    std::string csv_path;   // empty when the experiment emits JSON only
    std::string json_path;
    json summary;
};

// Runs the experiment and writes its artifacts next to the output
// prefix. Experiment-specific CSV schemas are documented in FORMATS.md.
RunArtifacts run(const ExperimentConfig& cfg);

// Convenience wrapper: load file, apply overrides, parse, run.
RunArtifacts run_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

// Render a CSV produced by `run` as a single SVG; kind is "loglog"
// (with the fitted slope annotated) or "linear". Throws ConfigError on
// schema mismatch or an empty CSV.
void plot_csv(const std::string& csv_path, const std::string& kind, const std::string& out_svg);

}  // namespace eigenscope
