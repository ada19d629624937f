#pragma once

#include <span>
#include <vector>

namespace oilcast {

struct PolyFitResult {
    std::vector<double> coefficients; // ascending power, size degree + 1
    double r_squared = 0.0;           // clamped to [0, 1]
};

// Least-squares polynomial fit via the normal equations with column scaling.
// A scaled pivot below 1e-12 during elimination means the basis is rank
// deficient for this data and raises ErrorKind::fit. Callers are expected to
// pre-scale x into roughly [-1, 1]; degrees above ~8 are not supported well
// by the normal equations and are rejected upstream.
PolyFitResult fit_polynomial(std::span<const double> x, std::span<const double> y,
                             int degree);

// Horner evaluation of ascending-power coefficients.
double eval_polynomial(std::span<const double> coefficients, double x);

} // namespace oilcast
