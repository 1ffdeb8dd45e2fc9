#include "eigenscope/integrals.hpp"

#include <cmath>

#include "eigenscope/errors.hpp"
#include "eigenscope/util.hpp"

namespace eigenscope {

namespace {

void check_resolution(double lambda, const Submanifold& sigma) {
    if (sigma.dim() == 0) return;
    int need = required_nodes_per_dim(lambda, sigma.param_diameter());
    if (sigma.nodes_per_dim() < need)
        throw ResolutionError("quadrature rule too coarse: " + std::to_string(sigma.nodes_per_dim()) +
                              " nodes per dim, need " + std::to_string(need) + " for lambda = " +
                              std::to_string(lambda));
}

// moments of all basis functions of a level in one sweep over the
// quadrature nodes (one Legendre row per node instead of one per index)
Eigen::VectorXcd level_moments_impl(const EigenLevel& level, const Submanifold& sigma) {
    const Manifold& m = sigma.manifold();
    const SurfaceRule& rule = sigma.rule();
    int nm = static_cast<int>(level.indices.size());
    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(nm);

    bool dense_sphere_level =
        m.is_sphere() && m.dim() == 2 && !level.indices.empty() &&
        level.indices.front().kind == SpectralIndex::Kind::SphereReal &&
        nm == 2 * level.indices.front().degree + 1;

    std::vector<Eigenfunction> basis;
    if (!dense_sphere_level) {
        basis.reserve(level.indices.size());
        for (auto& idx : level.indices) basis.emplace_back(m, idx);
    }

    for (int i = 0; i < rule.weights.size(); ++i) {
        Eigen::VectorXd t = rule.nodes.col(i);
        double wh = rule.weights[i] * sigma.density(t);
        if (wh == 0.0) continue;
        Point p = sigma.embed(t);
        if (dense_sphere_level) {
            Eigen::VectorXd row = real_harmonics_row(level.indices.front().degree, p);
            for (int a = 0; a < nm; ++a) mu[a] += wh * row[a];
        } else {
            for (int a = 0; a < nm; ++a) mu[a] += wh * basis[static_cast<std::size_t>(a)](p);
        }
    }
    return mu;
}

}  // namespace

std::complex<double> integrate_eigenfunction(const Eigenfunction& e, const Submanifold& sigma) {
    if (e.manifold().kind() != sigma.manifold().kind() || e.manifold().dim() != sigma.manifold().dim())
        throw DomainError("integrate_eigenfunction: eigenfunction and submanifold live on different models");
    check_resolution(e.lambda(), sigma);
    const SurfaceRule& rule = sigma.rule();
    std::complex<double> acc = 0.0;
    for (int i = 0; i < rule.weights.size(); ++i) {
        Eigen::VectorXd t = rule.nodes.col(i);
        double wh = rule.weights[i] * sigma.density(t);
        if (wh == 0.0) continue;
        acc += wh * e(sigma.embed(t));
    }
    return acc;
}

std::vector<std::complex<double>> eigenspace_moments(const EigenLevel& level, const Submanifold& sigma) {
    check_resolution(level.lambda, sigma);
    Eigen::VectorXcd mu = level_moments_impl(level, sigma);
    return {mu.data(), mu.data() + mu.size()};
}

MaximizerResult maximizer_from_moments(const Eigen::VectorXcd& moments) {
    MaximizerResult r;
    r.value = moments.norm();
    // moments at the quadrature roundoff floor count as exact zeros
    if (r.value <= 1e-12 || moments.size() == 0) {
        r.degenerate = true;
        r.value = 0.0;
        r.coeffs = Eigen::VectorXcd::Zero(std::max<Eigen::Index>(moments.size(), 1));
        r.coeffs[0] = 1.0;
        return r;
    }
    r.coeffs = moments.conjugate() / r.value;
    return r;
}

MaximizerResult eigenspace_maximizer(const EigenLevel& level, const Submanifold& sigma) {
    if (level.indices.empty()) throw DomainError("eigenspace_maximizer: empty level");
    return maximizer_from_moments(level_moments_impl(level, sigma));
}

std::vector<LevelMoments> level_moment_table(const Manifold& m, const Submanifold& sigma,
                                             double lambda_max) {
    check_resolution(lambda_max, sigma);
    std::vector<EigenLevel> levels = enumerate_levels(m, lambda_max);
    std::vector<LevelMoments> table(levels.size());
    parallel_for(levels.size(), [&](std::size_t i) {
        const EigenLevel& lv = levels[i];
        LevelMoments lm;
        lm.lambda = lv.lambda;
        lm.multiplicity = lv.multiplicity;
        lm.moments = level_moments_impl(lv, sigma);
        lm.sum_sq = lm.moments.squaredNorm();
        lm.max_value = std::sqrt(lm.sum_sq);
        table[i] = std::move(lm);
    });
    return table;
}

BandSum band_sum(const Manifold& m, const Submanifold& sigma, double lambda, double width) {
    if (lambda < 0) throw DomainError("band_sum: lambda must be >= 0");
    if (!(width > 0)) throw DomainError("band_sum: width must be > 0");
    BandSum bs;
    bs.lambda = lambda;
    bs.width = width;
    auto table = level_moment_table(m, sigma, lambda + width);
    for (auto& lm : table) {
        if (lm.lambda >= lambda && lm.lambda <= lambda + width) {
            bs.value += lm.sum_sq;
            bs.contributing.push_back({lm.lambda, lm.multiplicity, lm.sum_sq});
        }
    }
    return bs;
}

double weyl_sum(const Manifold& m, const Submanifold& sigma, double lambda) {
    if (lambda < 0) throw DomainError("weyl_sum: lambda must be >= 0");
    auto table = level_moment_table(m, sigma, lambda);
    double acc = 0.0;
    for (auto& lm : table)
        if (lm.lambda <= lambda) acc += lm.sum_sq;
    return acc;
}

}  // namespace eigenscope
