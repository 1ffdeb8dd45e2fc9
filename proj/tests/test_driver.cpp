#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eigenscope/driver.hpp"
#include "eigenscope/errors.hpp"

using namespace eigenscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "eigenscope_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config(json{{"lambda_max", 3}}), ConfigError);

    try {
        parse_config(json{{"experiment", "frobnicate"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("spectrum") != std::string::npos);  // lists valid experiments
        CHECK(msg.find("loopscan") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config(json{{"experiment", "spectrum"}}), ConfigError);  // no lambda_max
    CHECK_THROWS_AS(parse_config(json{{"experiment", "sphase"}, {"phase", "cubic"}}), ConfigError);
    CHECK_THROWS_AS(
        parse_config(json{{"experiment", "weyl"}, {"manifold", {{"kind", "klein"}}}, {"lambda_max", 5}}),
        ConfigError);
}

TEST_CASE("spectrum experiment writes five levels") {
    std::string out = (scratch_dir() / "spec").string();
    ExperimentConfig cfg = parse_config(json{{"experiment", "spectrum"},
                                             {"manifold", {{"kind", "sphere"}, {"dim", 2}}},
                                             {"lambda_max", 5},
                                             {"output", out}});
    RunArtifacts art = run(cfg);
    CHECK(art.summary.at("levels").get<int>() == 5);
    std::string csv = slurp(art.csv_path);
    CHECK(count_lines(csv) == 6);  // header + 5 rows
    CHECK(csv.rfind("lambda,multiplicity,index_repr\n", 0) == 0);
}

TEST_CASE("loopscan experiment on the torus line") {
    std::string out = (scratch_dir() / "loop").string();
    ExperimentConfig cfg = parse_config(json{{"experiment", "loopscan"},
                                             {"manifold", {{"kind", "torus"}}},
                                             {"submanifold", "line"},
                                             {"T", 2},
                                             {"samples", 300},
                                             {"seed", 7},
                                             {"output", out}});
    RunArtifacts art = run(cfg);
    CHECK(art.summary.at("fraction").get<double>() == 1.0);
    CHECK(art.summary.at("t_return_max").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reruns are byte identical") {
    json base = {{"experiment", "loopscan"}, {"manifold", {{"kind", "torus"}}},
                 {"submanifold", "sine_arc"}, {"T", 4},
                 {"samples", 150},           {"seed", 7}};
    json a = base, b = base;
    a["output"] = (scratch_dir() / "det_a").string();
    b["output"] = (scratch_dir() / "det_b").string();
    RunArtifacts ra = run(parse_config(a));
    RunArtifacts rb = run(parse_config(b));
    CHECK(slurp(ra.csv_path) == slurp(rb.csv_path));
    CHECK(slurp(ra.json_path) == slurp(rb.json_path));
}

TEST_CASE("overrides reach nested fields") {
    json raw = {{"experiment", "spectrum"}, {"manifold", {{"kind", "sphere"}, {"dim", 2}}},
                {"lambda_max", 3}};
    apply_override(raw, "lambda_max=5");
    apply_override(raw, "manifold.kind=torus");
    apply_override(raw, "output=" + (scratch_dir() / "ov").string());
    ExperimentConfig cfg = parse_config(raw);
    CHECK(cfg.lambda_max == 5.0);
    CHECK(!cfg.manifold.is_sphere());
    CHECK_THROWS_AS(apply_override(raw, "novalue"), ConfigError);
}

TEST_CASE("scaling csv plots with a slope annotation") {
    std::string out = (scratch_dir() / "zonal").string();
    ExperimentConfig cfg = parse_config(json{{"experiment", "scaling"},
                                             {"manifold", {{"kind", "sphere"}, {"dim", 2}}},
                                             {"submanifold", "point"},
                                             {"degree_min", 2},
                                             {"degree_max", 60},
                                             {"output", out}});
    RunArtifacts art = run(cfg);
    double slope = art.summary.at("fit").at("slope").get<double>();
    CHECK(std::abs(slope - 0.5) <= 0.02);

    std::string svg_path = (scratch_dir() / "zonal.svg").string();
    plot_csv(art.csv_path, "loglog", svg_path);
    std::string svg = slurp(svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("slope 0.50") != std::string::npos);
}

TEST_CASE("weyl csv plots with slope near one") {
    std::string out = (scratch_dir() / "weyl").string();
    ExperimentConfig cfg = parse_config(json{{"experiment", "weyl"},
                                             {"manifold", {{"kind", "sphere"}, {"dim", 2}}},
                                             {"submanifold", "equator"},
                                             {"lambda_min", 10},
                                             {"lambda_max", 60},
                                             {"lambda_step", 1},
                                             {"output", out}});
    RunArtifacts art = run(cfg);
    std::string svg_path = (scratch_dir() / "weyl.svg").string();
    plot_csv(art.csv_path, "loglog", svg_path);
    CHECK(slurp(svg_path).find("slope 1.0") != std::string::npos);
}

TEST_CASE("plot rejects broken input") {
    fs::path empty = scratch_dir() / "empty.csv";
    std::ofstream(empty) << "lambda,value\n";
    CHECK_THROWS_AS(plot_csv(empty.string(), "loglog", (scratch_dir() / "e.svg").string()),
                    ConfigError);

    fs::path ragged = scratch_dir() / "ragged.csv";
    std::ofstream(ragged) << "a,b\n1,2\n3\n";
    CHECK_THROWS_AS(plot_csv(ragged.string(), "loglog", (scratch_dir() / "r.svg").string()),
                    ConfigError);

    fs::path text = scratch_dir() / "text.csv";
    std::ofstream(text) << "a,b\n1,two\n";
    CHECK_THROWS_AS(plot_csv(text.string(), "linear", (scratch_dir() / "t.svg").string()),
                    ConfigError);

    CHECK_THROWS_AS(plot_csv((scratch_dir() / "missing.csv").string(), "loglog",
                             (scratch_dir() / "m.svg").string()),
                    ConfigError);
}

TEST_CASE("hessian experiment emits JSON only") {
    std::string out = (scratch_dir() / "hess").string();
    ExperimentConfig cfg = parse_config(json{{"experiment", "hessian"}, {"output", out}});
    RunArtifacts art = run(cfg);
    CHECK(art.csv_path.empty());
    json summary = json::parse(slurp(art.json_path));
    REQUIRE(summary.at("checks").size() == 3);
    for (auto& c : summary.at("checks")) {
        CHECK(std::abs(std::abs(c.at("det").get<double>()) - 1.0) < 1e-8);
        CHECK(c.at("grad_residual").get<double>() < 1e-10);
    }
}

TEST_CASE("results do not depend on the thread count") {
    json base = {{"experiment", "loopscan"}, {"manifold", {{"kind", "torus"}}},
                 {"submanifold", "sine_arc"}, {"T", 5},
                 {"samples", 200},           {"seed", 13}};
    json a = base, b = base;
    a["output"] = (scratch_dir() / "thr_a").string();
    b["output"] = (scratch_dir() / "thr_b").string();
    setenv("EIGENSCOPE_THREADS", "1", 1);
    RunArtifacts ra = run(parse_config(a));
    unsetenv("EIGENSCOPE_THREADS");
    RunArtifacts rb = run(parse_config(b));
    CHECK(slurp(ra.csv_path) == slurp(rb.csv_path));
}

TEST_CASE("every shipped config parses") {
    const char* dir = std::getenv("EIGENSCOPE_CONFIG_DIR");
    if (!dir) return;  // only exercised under ctest
    int seen = 0;
    for (auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json raw = json::parse(in);
        CHECK_NOTHROW(parse_config(raw));
        ++seen;
    }
    CHECK(seen >= 13);
}

TEST_CASE("installed binary round trip") {
    const char* bin = std::getenv("EIGENSCOPE_BIN");
    if (!bin) return;  // only exercised under ctest
    fs::path cfg_path = scratch_dir() / "bin_cfg.json";
    std::string out = (scratch_dir() / "bin_spec").string();
    std::ofstream(cfg_path) << json{{"experiment", "spectrum"},
                                    {"manifold", {{"kind", "sphere"}, {"dim", 2}}},
                                    {"lambda_max", 5},
                                    {"output", out}}
                                   .dump();
    std::string cmd = std::string(bin) + " run " + cfg_path.string() + " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);

    // --set override flows through
    std::string cmd2 = std::string(bin) + " run " + cfg_path.string() +
                       " --set lambda_max=7 --set output=" + out + "2 > /dev/null 2>&1";
    CHECK(std::system(cmd2.c_str()) == 0);
    CHECK(fs::exists(out + "2.csv"));

    // config errors exit with 2
    fs::path bad = scratch_dir() / "bad_cfg.json";
    std::ofstream(bad) << "{\"experiment\": \"nope\"}";
    int rc = std::system((std::string(bin) + " run " + bad.string() + " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    fs::path missing = scratch_dir() / "missing_field.json";
    std::ofstream(missing) << "{\"lambda_max\": 4}";
    rc = std::system((std::string(bin) + " run " + missing.string() + " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    // blown enumeration cap exits with 3
    fs::path huge = scratch_dir() / "huge.json";
    std::ofstream(huge) << json{{"experiment", "spectrum"},
                                {"manifold", {{"kind", "torus"}}},
                                {"lambda_max", 1e6},
                                {"output", (scratch_dir() / "huge_out").string()}}
                               .dump();
    rc = std::system((std::string(bin) + " run " + huge.string() + " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 3);

    // plot subcommand end to end, and exit 2 on an empty csv
    rc = std::system((std::string(bin) + " plot " + out + ".csv --kind linear -o " + out +
                      ".svg > /dev/null 2>&1")
                         .c_str());
    CHECK(rc == 0);
    CHECK(fs::exists(out + ".svg"));
    fs::path empty = scratch_dir() / "empty2.csv";
    std::ofstream(empty) << "lambda,value\n";
    rc = std::system((std::string(bin) + " plot " + empty.string() + " --kind loglog -o " +
                      (scratch_dir() / "e2.svg").string() + " > /dev/null 2>&1")
                         .c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
