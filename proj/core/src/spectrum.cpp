#include "eigenscope/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "eigenscope/errors.hpp"

namespace eigenscope {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kFourPi = 12.5663706143591729539;
}  // namespace

std::string SpectralIndex::repr() const {
    switch (kind) {
        case Kind::SphereReal:
            return "Y(j=" + std::to_string(degree) + ";m=" + std::to_string(order) + ")";
        case Kind::SphereZonal:
            return "Z(j=" + std::to_string(degree) + ")";
        case Kind::TorusLattice: {
            // semicolon-joined so the repr stays a single CSV cell
            std::string s = "k=(";
            for (int i = 0; i < k.size(); ++i) {
                if (i) s += ";";
                s += std::to_string(k[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// normalized associated Legendre recurrence
//
// Pbar_m^m = sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1}^{m-1},
// Pbar_{m+1}^m = sqrt(2m+3) cos(theta) Pbar_m^m,
// Pbar_l^m  = a_l^m (cos(theta) Pbar_{l-1}^m - b_l^m Pbar_{l-2}^m),
//   a_l^m = sqrt((4l^2-1)/(l^2-m^2)),  b_l^m = sqrt(((l-1)^2-m^2)/(4(l-1)^2-1)),
// seeded with Pbar_0^0 = sqrt(1/(4 pi)). Values stay O(sqrt(l)), so the
// ascent is overflow-safe far past degree 200.
// ---------------------------------------------------------------------------

void normalized_legendre_row(int j, double ct, double st, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(j) + 1, 0.0);
    double pmm = std::sqrt(1.0 / kFourPi);
    for (int m = 0; m <= j; ++m) {
        if (m > 0) pmm *= st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        if (m == j) {
            out[static_cast<std::size_t>(m)] = pmm;
            break;
        }
        double p_prev = pmm;
        double p_cur = std::sqrt(2.0 * m + 3.0) * ct * pmm;
        for (int l = m + 2; l <= j; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
            double b = std::sqrt(((static_cast<double>(l) - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (static_cast<double>(l) - 1) * (l - 1) - 1.0));
            double p_next = a * (ct * p_cur - b * p_prev);
            p_prev = p_cur;
            p_cur = p_next;
        }
        out[static_cast<std::size_t>(m)] = p_cur;
    }
}

namespace {

// single-order variant of the row recurrence: O(j) per evaluation
double normalized_legendre_single(int j, int m, double ct, double st) {
    double pmm = std::sqrt(1.0 / kFourPi);
    for (int k = 1; k <= m; ++k) pmm *= st * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
    if (m == j) return pmm;
    double p_prev = pmm;
    double p_cur = std::sqrt(2.0 * m + 3.0) * ct * pmm;
    for (int l = m + 2; l <= j; ++l) {
        double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        double b = std::sqrt(((static_cast<double>(l) - 1) * (l - 1) - static_cast<double>(m) * m) /
                             (4.0 * (static_cast<double>(l) - 1) * (l - 1) - 1.0));
        double p_next = a * (ct * p_cur - b * p_prev);
        p_prev = p_cur;
        p_cur = p_next;
    }
    return p_cur;
}

}  // namespace

Eigen::VectorXd real_harmonics_row(int j, const Point& p) {
    double ct = std::clamp(p.x[2], -1.0, 1.0);
    double st = std::hypot(p.x[0], p.x[1]);
    double phi = std::atan2(p.x[1], p.x[0]);
    std::vector<double> pbar;
    normalized_legendre_row(j, ct, st, pbar);
    Eigen::VectorXd row(2 * j + 1);
    row[j] = pbar[0];
    const double sq2 = std::sqrt(2.0);
    for (int m = 1; m <= j; ++m) {
        row[j + m] = sq2 * pbar[static_cast<std::size_t>(m)] * std::cos(m * phi);
        row[j - m] = sq2 * pbar[static_cast<std::size_t>(m)] * std::sin(m * phi);
    }
    return row;
}

double normalized_gegenbauer(int j, double alpha, double t) {
    // R_j = C_j^alpha(t) / C_j^alpha(1), via the standard recurrence on
    // C and the exact ratio C_j(1)/C_{j-1}(1) = (j + 2 alpha - 1) / j
    if (j == 0) return 1.0;
    double r_prev = 1.0;             // R_0
    double r_cur = t;                // R_1 = C_1/(2 alpha) = t
    double c_prev = 1.0;             // C_0(1)
    double c_cur = 2.0 * alpha;      // C_1(1)
    for (int l = 2; l <= j; ++l) {
        double c_next = c_cur * (l + 2.0 * alpha - 1.0) / l;
        double r_next = (2.0 * (l + alpha - 1.0) * t * c_cur * r_cur -
                         (l + 2.0 * alpha - 2.0) * c_prev * r_prev) /
                        (l * c_next);
        c_prev = c_cur;
        c_cur = c_next;
        r_prev = r_cur;
        r_cur = r_next;
    }
    return r_cur;
}

double torus_frequency(const Manifold& m, const Eigen::VectorXi& k) {
    double s = 0.0;
    for (int i = 0; i < k.size(); ++i) {
        double q = k[i] / m.periods()[static_cast<std::size_t>(i)];
        s += q * q;
    }
    return kTwoPi * std::sqrt(s);
}

Eigenfunction::Eigenfunction(const Manifold& m, const SpectralIndex& idx)
    : manifold_(m), index_(idx) {
    if (m.is_sphere()) {
        if (idx.kind == SpectralIndex::Kind::TorusLattice)
            throw DomainError("lattice index on a sphere model");
        if (idx.kind == SpectralIndex::Kind::SphereReal && m.dim() != 2)
            throw DomainError("full real harmonics shipped for S^2 only");
        if (idx.kind == SpectralIndex::Kind::SphereReal && std::abs(idx.order) > idx.degree)
            throw DomainError("harmonic order exceeds degree");
        lambda_ = sphere_eigenvalue(idx.degree, m.dim());
    } else {
        if (idx.kind != SpectralIndex::Kind::TorusLattice)
            throw DomainError("torus model needs a lattice index");
        if (idx.k.size() != m.dim()) throw DomainError("lattice vector has wrong dimension");
        lambda_ = torus_frequency(m, idx.k);
    }
}

std::complex<double> Eigenfunction::operator()(const Point& p) const {
    switch (index_.kind) {
        case SpectralIndex::Kind::SphereReal: {
            int j = index_.degree, m = index_.order;
            double ct = std::clamp(p.x[2], -1.0, 1.0);
            double st = std::hypot(p.x[0], p.x[1]);
            double pbar = normalized_legendre_single(j, std::abs(m), ct, st);
            if (m == 0) return pbar;
            double phi = std::atan2(p.x[1], p.x[0]);
            double v = std::sqrt(2.0) * pbar;
            return v * (m > 0 ? std::cos(m * phi) : std::sin(-m * phi));
        }
        case SpectralIndex::Kind::SphereZonal: {
            int n = manifold_.dim();
            double t = std::clamp(p.x[n], -1.0, 1.0);  // cosine of distance to the north pole
            double amp = std::sqrt(sphere_multiplicity(index_.degree, n) / manifold_.volume());
            return amp * normalized_gegenbauer(index_.degree, 0.5 * (n - 1), t);
        }
        case SpectralIndex::Kind::TorusLattice: {
            double phase = 0.0;
            for (int i = 0; i < index_.k.size(); ++i)
                phase += index_.k[i] * p.x[i] / manifold_.periods()[static_cast<std::size_t>(i)];
            double norm = std::sqrt(manifold_.volume());
            return std::polar(1.0 / norm, kTwoPi * phase);
        }
    }
    return 0.0;
}

double zonal_at_base(const Manifold& sphere, int degree, const Point&) {
    if (!sphere.is_sphere()) throw DomainError("zonal_at_base: needs a sphere model");
    return std::sqrt(sphere_multiplicity(degree, sphere.dim()) / sphere.volume());
}

namespace {

std::vector<EigenLevel> enumerate_sphere(const Manifold& m, double lambda_max, std::size_t cap) {
    std::vector<EigenLevel> levels;
    std::size_t used = 0;
    for (int j = 0;; ++j) {
        double lam = sphere_eigenvalue(j, m.dim());
        if (lam > lambda_max) break;
        EigenLevel lv;
        lv.lambda = lam;
        if (m.dim() == 2) {
            for (int o = -j; o <= j; ++o)
                lv.indices.push_back({SpectralIndex::Kind::SphereReal, j, o, {}});
        } else {
            lv.indices.push_back({SpectralIndex::Kind::SphereZonal, j, 0, {}});
        }
        lv.multiplicity = static_cast<int>(lv.indices.size());
        used += lv.indices.size();
        if (used > cap) throw ResourceError("sphere level enumeration exceeds the index cap");
        levels.push_back(std::move(lv));
    }
    return levels;
}

std::vector<EigenLevel> enumerate_torus(const Manifold& m, double lambda_max, std::size_t cap) {
    int n = m.dim();
    std::vector<int> kmax(static_cast<std::size_t>(n));
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        kmax[static_cast<std::size_t>(i)] =
            static_cast<int>(std::floor(lambda_max * m.periods()[static_cast<std::size_t>(i)] / kTwoPi));
        count *= static_cast<std::size_t>(2 * kmax[static_cast<std::size_t>(i)] + 1);
        if (count > cap) throw ResourceError("torus lattice enumeration exceeds the index cap");
    }
    std::vector<std::pair<double, Eigen::VectorXi>> hits;
    Eigen::VectorXi k = Eigen::VectorXi::Zero(n);
    for (int i = 0; i < n; ++i) k[i] = -kmax[static_cast<std::size_t>(i)];
    for (;;) {
        double lam = torus_frequency(m, k);
        if (lam <= lambda_max) hits.emplace_back(lam, k);
        int axis = 0;
        while (axis < n) {
            if (k[axis] < kmax[static_cast<std::size_t>(axis)]) {
                ++k[axis];
                break;
            }
            k[axis] = -kmax[static_cast<std::size_t>(axis)];
            ++axis;
        }
        if (axis == n) break;
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::lexicographical_compare(a.second.data(), a.second.data() + a.second.size(),
                                            b.second.data(), b.second.data() + b.second.size());
    });
    std::vector<EigenLevel> levels;
    for (auto& [lam, kv] : hits) {
        // frequencies of equal |k / p| come out bit-identical (same
        // arithmetic), so the grouping tolerance only merges levels of
        // adversarial period ratios that coincide to 1e-9 relative
        if (levels.empty() || std::abs(lam - levels.back().lambda) > 1e-9 * (1.0 + lam)) {
            levels.push_back({lam, {}, 0});
        }
        levels.back().indices.push_back({SpectralIndex::Kind::TorusLattice, 0, 0, kv});
    }
    for (auto& lv : levels) lv.multiplicity = static_cast<int>(lv.indices.size());
    return levels;
}

}  // namespace

std::vector<EigenLevel> enumerate_levels(const Manifold& m, double lambda_max, std::size_t index_cap) {
    if (lambda_max < 0) throw DomainError("enumerate_levels: lambda_max must be >= 0");
    return m.is_sphere() ? enumerate_sphere(m, lambda_max, index_cap)
                         : enumerate_torus(m, lambda_max, index_cap);
}

}  // namespace eigenscope
