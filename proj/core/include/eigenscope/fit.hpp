#pragma once

#include <utility>
#include <vector>

namespace eigenscope {

// Least-squares power-law fit on log-log axes. Values below
// zero_rel_threshold * max(value) are dropped before taking logs
// (exact zeros from parity would otherwise destroy the fit); the
// number of dropped samples is reported.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int used = 0;
    int dropped = 0;
    std::vector<std::pair<double, double>> samples;  // the (x, value) pairs kept
};

// samples: (x, value) pairs with x > 0; throws NumericError if fewer
// than 3 usable samples remain after thresholding.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples,
                         double zero_rel_threshold = 1e-12);

// Plain linear least squares on the given (x, y) pairs.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit fit_linear(const std::vector<std::pair<double, double>>& xy);

}  // namespace eigenscope
