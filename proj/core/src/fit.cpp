#include "eigenscope/fit.hpp"

#include <cmath>

#include "eigenscope/errors.hpp"

namespace eigenscope {

LinearFit fit_linear(const std::vector<std::pair<double, double>>& xy) {
    std::size_t n = xy.size();
    if (n < 2) throw NumericError("fit_linear: need at least 2 points");
    double sx = 0, sy = 0;
    for (auto& [x, y] : xy) {
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw NumericError("fit_linear: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = syy - f.slope * sxy;
    // constant data fit exactly: report r2 = 1 rather than 0/0
    f.r2 = (syy > 1e-300) ? 1.0 - ss_res / syy : 1.0;
    if (f.r2 < 0.0) f.r2 = 0.0;
    return f;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples,
                         double zero_rel_threshold) {
    double vmax = 0.0;
    for (auto& [x, v] : samples) vmax = std::max(vmax, std::abs(v));
    double cut = zero_rel_threshold * vmax;

    ExponentFit fit;
    std::vector<std::pair<double, double>> logs;
    for (auto& [x, v] : samples) {
        if (x > 0.0 && std::abs(v) > cut && std::abs(v) > 0.0) {
            fit.samples.emplace_back(x, v);
            logs.emplace_back(std::log(x), std::log(std::abs(v)));
        } else {
            ++fit.dropped;
        }
    }
    fit.used = static_cast<int>(logs.size());
    if (fit.used < 3)
        throw NumericError("fit_exponent: fewer than 3 usable samples after thresholding");

    LinearFit lf = fit_linear(logs);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

}  // namespace eigenscope
