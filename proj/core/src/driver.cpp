#include "eigenscope/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "eigenscope/errors.hpp"
#include "eigenscope/flow.hpp"
#include "eigenscope/integrals.hpp"
#include "eigenscope/stationary_phase.hpp"
#include "eigenscope/util.hpp"

namespace eigenscope {

namespace {

const char* kExperiments[] = {"spectrum", "integrate", "bandsum", "weyl",
                              "scaling",  "loopscan",  "sphase",  "hessian"};

Manifold parse_manifold(const json& j) {
    if (!j.is_object()) throw ConfigError("manifold must be an object");
    std::string kind = j.value("kind", "sphere");
    if (kind == "sphere") {
        return Manifold::sphere(j.value("dim", 2));
    }
    if (kind == "torus") {
        if (j.contains("periods")) {
            std::vector<double> p = j.at("periods").get<std::vector<double>>();
            return Manifold::torus(p);
        }
        return Manifold::torus(j.value("dim", 2));
    }
    throw ConfigError("manifold.kind must be 'sphere' or 'torus'");
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError("missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

std::string level_repr(const EigenLevel& lv) {
    if (lv.indices.empty()) return "?";
    const SpectralIndex& first = lv.indices.front();
    if (first.kind == SpectralIndex::Kind::SphereReal)
        return "Y(j=" + std::to_string(first.degree) + ";m=-" + std::to_string(first.degree) +
               ".." + std::to_string(first.degree) + ")";
    if (lv.multiplicity > 1) return first.repr() + "x" + std::to_string(lv.multiplicity);
    return first.repr();
}

Submanifold make_submanifold(const ExperimentConfig& cfg, double lambda_cap) {
    if (cfg.submanifold.empty())
        throw ConfigError("experiment '" + cfg.experiment + "' requires a submanifold");
    Submanifold s = Submanifold::by_name(cfg.manifold, cfg.submanifold, lambda_cap,
                                         cfg.colatitude, cfg.epsilon);
    if (cfg.density != "default" && cfg.density != "uniform")
        throw ConfigError("density must be 'default' or 'uniform'");
    if (cfg.density == "uniform" && !s.closed() && s.dim() > 0)
        throw ConfigError("uniform density is only admissible on closed submanifolds");
    return s;
}

void write_text(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
}

struct CsvBuilder {
    std::string text;
    void header(const std::string& h) { text = h + "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ",";
            text += cells[i];
        }
        text += "\n";
    }
};

std::vector<double> lambda_grid(const ExperimentConfig& cfg) {
    if (!(cfg.lambda_max >= cfg.lambda_min)) throw ConfigError("lambda_max must be >= lambda_min");
    if (!(cfg.lambda_step > 0)) throw ConfigError("lambda_step must be positive");
    std::vector<double> grid;
    for (double l = cfg.lambda_min; l <= cfg.lambda_max + 1e-9; l += cfg.lambda_step)
        grid.push_back(l);
    return grid;
}

json fit_to_json(const ExponentFit& fit) {
    return json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"r2", fit.r2},
                {"used", fit.used},
                {"dropped", fit.dropped}};
}

// ----------------------------------------------------------------- spectrum

void run_spectrum(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    auto levels = enumerate_levels(cfg.manifold, cfg.lambda_max);
    csv.header("lambda,multiplicity,index_repr");
    long total = 0;
    for (auto& lv : levels) {
        csv.row({format_full(lv.lambda), std::to_string(lv.multiplicity), level_repr(lv)});
        total += lv.multiplicity;
    }
    summary["levels"] = levels.size();
    summary["indices"] = total;
}

// ---------------------------------------------------------------- integrate

void run_integrate(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    Submanifold sigma = make_submanifold(cfg, cfg.lambda_max);
    auto levels = enumerate_levels(cfg.manifold, cfg.lambda_max);
    csv.header("lambda,index_repr,value_re,value_im");
    long rows = 0;
    for (auto& lv : levels) {
        auto moments = eigenspace_moments(lv, sigma);
        for (std::size_t a = 0; a < moments.size(); ++a) {
            csv.row({format_full(lv.lambda), lv.indices[a].repr(),
                     format_full(moments[a].real()), format_full(moments[a].imag())});
            ++rows;
        }
    }
    summary["rows"] = rows;
    summary["mu_total"] = sigma.measure();
}

// ------------------------------------------------------------ bandsum, weyl

void run_bandsum(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    Submanifold sigma = make_submanifold(cfg, cfg.lambda_max + cfg.band_width);
    auto table = level_moment_table(cfg.manifold, sigma, cfg.lambda_max + cfg.band_width);
    auto grid = lambda_grid(cfg);
    csv.header("lambda,band_sum");
    int exponent = cfg.manifold.dim() - sigma.dim() - 1;
    std::vector<std::pair<double, double>> samples;
    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    double vmax = 0.0;
    for (double l : grid) {
        double v = 0.0;
        for (auto& lm : table)
            if (lm.lambda >= l && lm.lambda <= l + cfg.band_width) v += lm.sum_sq;
        csv.row({format_full(l), format_full(v)});
        samples.emplace_back(l, v);
        vmax = std::max(vmax, v);
    }
    int nonzero = 0;
    for (auto& [l, v] : samples) {
        if (l > 0 && v > 1e-12 * vmax) {
            double ratio = v / std::pow(l, exponent);
            ratio_min = std::min(ratio_min, ratio);
            ratio_max = std::max(ratio_max, ratio);
            ++nonzero;
        }
    }
    summary["bands"] = grid.size();
    summary["band_width"] = cfg.band_width;
    summary["exponent"] = exponent;
    summary["nonzero"] = nonzero;
    if (nonzero > 0) {
        summary["ratio_min"] = ratio_min;
        summary["ratio_max"] = ratio_max;
    }
    try {
        summary["fit"] = fit_to_json(fit_exponent(samples));
    } catch (const NumericError&) {
        summary["fit"] = nullptr;
    }
}

void run_weyl(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    Submanifold sigma = make_submanifold(cfg, cfg.lambda_max);
    auto table = level_moment_table(cfg.manifold, sigma, cfg.lambda_max);
    auto grid = lambda_grid(cfg);
    csv.header("lambda,weyl_sum");
    std::vector<std::pair<double, double>> samples;
    std::size_t next = 0;
    double acc = 0.0;
    for (double l : grid) {
        while (next < table.size() && table[next].lambda <= l) acc += table[next++].sum_sq;
        csv.row({format_full(l), format_full(acc)});
        samples.emplace_back(l, acc);
    }
    summary["points"] = grid.size();
    try {
        summary["fit"] = fit_to_json(fit_exponent(samples));
    } catch (const NumericError&) {
        summary["fit"] = nullptr;
    }
}

// ------------------------------------------------------------------ scaling

void run_scaling(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    double lambda_lo, lambda_hi;
    if (cfg.manifold.is_sphere()) {
        if (!cfg.has_degree_range)
            throw ConfigError("scaling on a sphere needs degree_min/degree_max");
        lambda_lo = sphere_eigenvalue(cfg.degree_min, cfg.manifold.dim());
        lambda_hi = sphere_eigenvalue(cfg.degree_max, cfg.manifold.dim());
    } else {
        lambda_lo = cfg.lambda_min;
        lambda_hi = cfg.lambda_max;
        if (!(lambda_hi > 0)) throw ConfigError("scaling on a torus needs lambda_min/lambda_max");
    }
    Submanifold sigma = make_submanifold(cfg, lambda_hi);
    auto table = level_moment_table(cfg.manifold, sigma, lambda_hi + 1e-9);
    csv.header("lambda,max_integral");
    std::vector<std::pair<double, double>> samples, mode_samples;
    double max_value = 0.0, max_moment = 0.0;
    for (auto& lm : table) {
        if (lm.lambda < lambda_lo - 1e-9) continue;
        csv.row({format_full(lm.lambda), format_full(lm.max_value)});
        samples.emplace_back(lm.lambda, lm.max_value);
        max_value = std::max(max_value, lm.max_value);
        if (lm.moments.size() > 0) {
            double mm = lm.moments.cwiseAbs().maxCoeff();
            mode_samples.emplace_back(lm.lambda, mm);
            max_moment = std::max(max_moment, mm);
        }
    }
    summary["levels"] = samples.size();
    summary["max_value"] = max_value;
    summary["max_moment_abs"] = max_moment;
    try {
        summary["fit"] = fit_to_json(fit_exponent(samples));
    } catch (const NumericError&) {
        summary["fit"] = nullptr;
    }
    // the same sweep maximized over single basis modes instead of the
    // whole eigenspace; the natural scale for saturation by one mode
    try {
        summary["fit_max_mode"] = fit_to_json(fit_exponent(mode_samples));
    } catch (const NumericError&) {
        summary["fit_max_mode"] = nullptr;
    }
}

// ----------------------------------------------------------------- loopscan

void run_loopscan(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    Submanifold sigma = make_submanifold(cfg, 1.0);
    LoopSettings ls;
    ls.t_min = cfg.t_min;
    ls.dt = cfg.dt;
    LoopingEstimate est =
        looping_fraction(cfg.manifold, sigma, cfg.T, cfg.samples, cfg.tol, cfg.seed, ls);
    csv.header("sample_id,loops,t_return");
    for (std::size_t i = 0; i < est.t_returns.size(); ++i) {
        bool hit = std::isfinite(est.t_returns[i]);
        csv.row({std::to_string(i), hit ? "1" : "0", format_full(est.t_returns[i])});
    }
    summary["fraction"] = est.fraction;
    summary["loops"] = est.loops;
    summary["samples"] = est.samples;
    summary["std_error"] = est.std_error;
    summary["T"] = est.T;
    summary["tol"] = est.tol;
    summary["seed"] = est.seed;
    if (est.loops > 0) {
        double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0, tsum = 0.0;
        for (double t : est.t_returns) {
            if (!std::isfinite(t)) continue;
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
            tsum += t;
        }
        summary["t_return_min"] = tmin;
        summary["t_return_max"] = tmax;
        summary["t_return_mean"] = tsum / est.loops;
    }
}

json hessian_to_json(const Eigen::MatrixXd& H) {
    json rows = json::array();
    for (int i = 0; i < H.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < H.cols(); ++j) row.push_back(H(i, j));
        rows.push_back(row);
    }
    return rows;
}

// ------------------------------------------------------------------- sphase

void run_sphase(const ExperimentConfig& cfg, CsvBuilder& csv, json& summary) {
    if (cfg.lambdas.empty()) throw ConfigError("sphase needs a 'lambdas' array");
    OscillatoryProblem prob = test_phase_problem(cfg.phase_name);
    Eigen::VectorXd x(0), guess = Eigen::VectorXd::Constant(prob.inner_dim, 0.1);
    CriticalPointData cp = find_critical_point(prob, x, guess);
    csv.header("lambda,quad_re,quad_im,lead_re,lead_im,remainder_abs");
    std::vector<std::pair<double, double>> rem_samples;
    int floored = 0;
    for (double lambda : cfg.lambdas) {
        QuadResult q = oscillatory_quadrature(prob, lambda, x);
        std::complex<double> lead = leading_term(prob, cp, lambda, x);
        double rem = std::abs(q.value - lead);
        csv.row({format_full(lambda), format_full(q.value.real()), format_full(q.value.imag()),
                 format_full(lead.real()), format_full(lead.imag()), format_full(rem)});
        rem_samples.emplace_back(lambda, rem);
        if (rem <= 50.0 * std::max(q.est_error, 1e-15)) ++floored;
    }
    summary["phase"] = cfg.phase_name;
    summary["inner_dim"] = prob.inner_dim;
    summary["expected_remainder_slope"] = -(0.5 * prob.inner_dim + 1.0);
    json cp_dump;
    cp_dump["y"] = std::vector<double>(cp.y.data(), cp.y.data() + cp.y.size());
    cp_dump["det"] = cp.det;
    cp_dump["signature"] = json::array({cp.n_pos, cp.n_neg});
    cp_dump["grad_norm"] = cp.grad_norm;
    cp_dump["phase_value"] = cp.phase_value;
    cp_dump["hessian"] = hessian_to_json(cp.hessian);
    summary["critical_point"] = cp_dump;
    summary["signature"] = json::array({cp.n_pos, cp.n_neg});
    summary["floor_limited"] = 2 * floored >= static_cast<int>(cfg.lambdas.size());
    bool decade = false;
    if (cfg.lambdas.size() >= 5) {
        double lo = *std::min_element(cfg.lambdas.begin(), cfg.lambdas.end());
        double hi = *std::max_element(cfg.lambdas.begin(), cfg.lambdas.end());
        decade = hi >= 10.0 * lo * (1.0 - 1e-9);
    }
    if (decade && !summary["floor_limited"].get<bool>()) {
        try {
            summary["remainder_fit"] = fit_to_json(fit_exponent(rem_samples));
        } catch (const NumericError&) {
            summary["remainder_fit"] = nullptr;
        }
    } else {
        summary["remainder_fit"] = nullptr;
    }
}

// ------------------------------------------------------------------ hessian

void run_hessian(const ExperimentConfig& cfg, json& summary) {
    json checks = json::array();
    for (auto& spec : cfg.hessian_checks) {
        json item;
        item["kind"] = spec.kind;
        item["d"] = spec.d;
        item["n"] = spec.n;
        if (spec.kind == "wave_phase") {
            OscillatoryProblem prob = wave_phase_problem(spec.d, spec.n);
            Eigen::VectorXd yp = Eigen::VectorXd::Constant(spec.d, 0.3);
            Eigen::VectorXd z = wave_phase_critical_point(spec.d, spec.n, yp);
            Eigen::VectorXd g = phase_gradient(prob, yp, z);
            Eigen::MatrixXd H = phase_hessian(prob, yp, z);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
            int pos = 0, neg = 0;
            for (int i = 0; i < es.eigenvalues().size(); ++i)
                (es.eigenvalues()[i] > 0 ? pos : neg)++;
            item["grad_residual"] = g.norm();
            item["det"] = H.determinant();
            item["signature"] = json::array({pos, neg});
            item["hessian"] = hessian_to_json(H);
        } else if (spec.kind == "composition") {
            HessianCheck chk = composition_hessian_check(spec.d, spec.n);
            item["grad_residual"] = chk.grad_residual;
            item["det"] = chk.det;
            item["signature"] = json::array({chk.n_pos, chk.n_neg});
            item["hessian"] = hessian_to_json(chk.hessian);
        } else {
            throw ConfigError("hessian check kind must be 'wave_phase' or 'composition'");
        }
        checks.push_back(item);
    }
    summary["checks"] = checks;
}

}  // namespace

// ---------------------------------------------------------------------------

void apply_override(json& raw, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    json* node = &raw;
    std::size_t pos = 0;
    for (;;) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("bad override path '" + path + "'");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        if (!node->is_object()) *node = json::object();
        pos = dot + 1;
    }
}

ExperimentConfig parse_config(const json& raw) {
    if (!raw.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.raw = raw;
    if (!raw.contains("experiment") || !raw.at("experiment").is_string())
        throw ConfigError("config is missing the 'experiment' field");
    cfg.experiment = raw.at("experiment").get<std::string>();
    bool known = false;
    for (const char* name : kExperiments) known = known || cfg.experiment == name;
    if (!known) {
        std::string valid;
        for (const char* name : kExperiments) valid += std::string(valid.empty() ? "" : ", ") + name;
        throw ConfigError("unknown experiment '" + cfg.experiment + "' (valid: " + valid + ")");
    }

    if (raw.contains("manifold")) cfg.manifold = parse_manifold(raw.at("manifold"));

    if (raw.contains("submanifold")) {
        const json& s = raw.at("submanifold");
        if (s.is_string()) {
            cfg.submanifold = s.get<std::string>();
        } else if (s.is_object()) {
            cfg.submanifold = s.value("name", "");
            if (s.contains("colatitude")) cfg.colatitude = s.at("colatitude").get<double>();
            if (s.contains("epsilon")) cfg.epsilon = s.at("epsilon").get<double>();
            if (s.contains("density")) cfg.density = s.at("density").get<std::string>();
        } else {
            throw ConfigError("submanifold must be a catalog name or an object");
        }
    }

    cfg.lambda_min = raw.value("lambda_min", 0.0);
    cfg.lambda_max = raw.value("lambda_max", 0.0);
    cfg.lambda_step = raw.value("lambda_step", 1.0);
    if (raw.contains("lambdas")) cfg.lambdas = raw.at("lambdas").get<std::vector<double>>();
    if (raw.contains("degree_min") || raw.contains("degree_max")) {
        cfg.degree_min = raw.value("degree_min", 0);
        cfg.degree_max = raw.value("degree_max", cfg.degree_min);
        cfg.has_degree_range = true;
        if (cfg.degree_min < 0 || cfg.degree_max < cfg.degree_min)
            throw ConfigError("bad degree range");
    }
    cfg.band_width = raw.value("band_width", 1.0);
    cfg.samples = raw.value("samples", 1000);
    cfg.T = raw.value("T", 10.0);
    cfg.tol = raw.value("tol", 1e-3);
    cfg.t_min = raw.value("t_min", 0.1);
    cfg.dt = raw.value("dt", 0.01);
    cfg.seed = raw.value("seed", static_cast<std::uint64_t>(42));
    cfg.phase_name = raw.value("phase", "");
    cfg.output = raw.value("output", cfg.experiment);

    if (raw.contains("checks")) {
        for (const json& c : raw.at("checks")) {
            ExperimentConfig::HessianSpec spec;
            spec.kind = c.value("kind", "wave_phase");
            spec.d = c.value("d", 1);
            spec.n = c.value("n", 2);
            cfg.hessian_checks.push_back(spec);
        }
    }
    if (cfg.experiment == "hessian" && cfg.hessian_checks.empty()) {
        cfg.hessian_checks = {{"wave_phase", 1, 2}, {"composition", 1, 2}, {"composition", 1, 3}};
    }

    // per-experiment required fields
    if (cfg.experiment == "spectrum" || cfg.experiment == "integrate") {
        if (!raw.contains("lambda_max")) throw ConfigError(cfg.experiment + " needs lambda_max");
    }
    if (cfg.experiment == "bandsum" || cfg.experiment == "weyl") {
        require_number(raw, "lambda_max");
    }
    if (cfg.experiment == "loopscan") {
        require_number(raw, "T");
    }
    if (cfg.experiment == "sphase") {
        if (cfg.phase_name.empty()) throw ConfigError("sphase needs a 'phase' name");
        if (cfg.lambdas.empty()) throw ConfigError("sphase needs a 'lambdas' array");
    }
    return cfg;
}

RunArtifacts run(const ExperimentConfig& cfg) {
    CsvBuilder csv;
    json summary;
    summary["experiment"] = cfg.experiment;
    summary["seed"] = cfg.seed;

    bool has_csv = cfg.experiment != "hessian";
    if (cfg.experiment == "spectrum") run_spectrum(cfg, csv, summary);
    else if (cfg.experiment == "integrate") run_integrate(cfg, csv, summary);
    else if (cfg.experiment == "bandsum") run_bandsum(cfg, csv, summary);
    else if (cfg.experiment == "weyl") run_weyl(cfg, csv, summary);
    else if (cfg.experiment == "scaling") run_scaling(cfg, csv, summary);
    else if (cfg.experiment == "loopscan") run_loopscan(cfg, csv, summary);
    else if (cfg.experiment == "sphase") run_sphase(cfg, csv, summary);
    else run_hessian(cfg, summary);

    RunArtifacts art;
    art.summary = summary;
    art.json_path = cfg.output + ".json";
    if (has_csv) {
        art.csv_path = cfg.output + ".csv";
        write_text(art.csv_path, csv.text);
    }
    write_text(art.json_path, summary.dump(2) + "\n");
    return art;
}

RunArtifacts run_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json raw = json::parse(in, nullptr, false);
    if (raw.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
    for (auto& kv : overrides) apply_override(raw, kv);
    return run(parse_config(raw));
}

}  // namespace eigenscope
