// eigenscope: experiment driver for eigenfunction integrals over
// submanifolds, geodesic loop statistics, and stationary-phase checks
// on the shipped model manifolds.
//
//   eigenscope run <config.json> [--set key=value ...]
//   eigenscope plot <data.csv> --kind loglog|linear -o out.svg
//
// Exit codes: 0 success, 2 configuration error, 3 resource cap, 1 other.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eigenscope/driver.hpp"
#include "eigenscope/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical experiments on Laplace eigenfunctions and geodesic flow"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config");
    run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
    run_cmd->add_option("--set", overrides, "override a config field, key=value (dotted paths ok)");

    std::string csv_path, kind = "loglog", out_svg;
    CLI::App* plot_cmd = app.add_subcommand("plot", "render an experiment CSV as an SVG");
    plot_cmd->add_option("csv", csv_path, "input CSV")->required();
    plot_cmd->add_option("--kind", kind, "loglog (fitted slope annotated) or linear");
    plot_cmd->add_option("-o,--output", out_svg, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            eigenscope::RunArtifacts art = eigenscope::run_config_file(config_path, overrides);
            std::printf("%s\n", art.summary.dump(2).c_str());
            if (!art.csv_path.empty()) std::fprintf(stderr, "wrote %s\n", art.csv_path.c_str());
            std::fprintf(stderr, "wrote %s\n", art.json_path.c_str());
        } else {
            if (out_svg.empty()) {
                out_svg = csv_path;
                auto dot = out_svg.rfind('.');
                if (dot != std::string::npos) out_svg.erase(dot);
                out_svg += ".svg";
            }
            eigenscope::plot_csv(csv_path, kind, out_svg);
            std::fprintf(stderr, "wrote %s\n", out_svg.c_str());
        }
    } catch (const eigenscope::ResourceError& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 3;
    } catch (const eigenscope::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const eigenscope::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
