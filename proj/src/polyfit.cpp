#include "oilcast/polyfit.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

constexpr double kPivotTolerance = 1e-12;

// Gaussian elimination with partial pivoting on an (n x n) system stored
// row-major. Throws Error(fit) when a pivot falls below the tolerance.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double candidate = std::abs(a[r * n + col]);
            if (candidate > pivot) {
                pivot = candidate;
                pivot_row = r;
            }
        }
        if (pivot < kPivotTolerance)
            throw Error(ErrorKind::fit,
                        "rank-deficient normal equations (pivot " +
                            std::to_string(pivot) + " at column " +
                            std::to_string(col) + ")");
        if (pivot_row != col) {
            for (std::size_t c = col; c < n; ++c)
                std::swap(a[col * n + c], a[pivot_row * n + c]);
            std::swap(b[col], b[pivot_row]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double factor = a[r * n + col] / a[col * n + col];
            if (factor == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t c = i + 1; c < n; ++c)
            sum -= a[i * n + c] * x[c];
        x[i] = sum / a[i * n + i];
    }
    return x;
}

} // namespace

PolyFitResult fit_polynomial(std::span<const double> x, std::span<const double> y,
                             int degree) {
    if (degree < 0)
        throw Error(ErrorKind::input, "polynomial degree must be >= 0");
    if (x.size() != y.size())
        throw Error(ErrorKind::input, "x and y lengths differ");
    const std::size_t n_coef = static_cast<std::size_t>(degree) + 1;
    const std::size_t n_pts = x.size();
    if (n_pts < n_coef)
        throw Error(ErrorKind::fit, "need at least " + std::to_string(n_coef) +
                                        " points for degree " +
                                        std::to_string(degree));

    // Vandermonde columns V_j = x^j, column-scaled by their Euclidean norm so
    // the normal equations stay conditioned for degrees up to ~8 on [-1, 1].
    std::vector<double> vander(n_pts * n_coef);
    for (std::size_t i = 0; i < n_pts; ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < n_coef; ++j) {
            vander[i * n_coef + j] = p;
            p *= x[i];
        }
    }
    std::vector<double> col_scale(n_coef, 1.0);
    for (std::size_t j = 0; j < n_coef; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n_pts; ++i)
            norm2 += vander[i * n_coef + j] * vander[i * n_coef + j];
        double norm = std::sqrt(norm2);
        if (norm > 0.0)
            col_scale[j] = norm;
    }

    std::vector<double> normal(n_coef * n_coef, 0.0);
    std::vector<double> rhs(n_coef, 0.0);
    for (std::size_t j = 0; j < n_coef; ++j) {
        for (std::size_t k = j; k < n_coef; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n_pts; ++i)
                sum += vander[i * n_coef + j] * vander[i * n_coef + k];
            double scaled = sum / (col_scale[j] * col_scale[k]);
            normal[j * n_coef + k] = scaled;
            normal[k * n_coef + j] = scaled;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n_pts; ++i)
            sum += vander[i * n_coef + j] * y[i];
        rhs[j] = sum / col_scale[j];
    }

    std::vector<double> scaled_coef = solve_dense(std::move(normal), std::move(rhs), n_coef);

    PolyFitResult result;
    result.coefficients.resize(n_coef);
    for (std::size_t j = 0; j < n_coef; ++j)
        result.coefficients[j] = scaled_coef[j] / col_scale[j];

    double mean = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i)
        mean += y[i];
    mean /= static_cast<double>(n_pts);

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i) {
        double fitted = eval_polynomial(result.coefficients, x[i]);
        ss_res += (y[i] - fitted) * (y[i] - fitted);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot <= 1e-30) {
        result.r_squared = ss_res <= 1e-30 ? 1.0 : 0.0;
    } else {
        result.r_squared = 1.0 - ss_res / ss_tot;
        if (result.r_squared < 0.0)
            result.r_squared = 0.0;
        if (result.r_squared > 1.0)
            result.r_squared = 1.0;
    }
    return result;
}

double eval_polynomial(std::span<const double> coefficients, double x) {
    double sum = 0.0;
    for (std::size_t i = coefficients.size(); i-- > 0;)
        sum = coefficients[i] + x * sum;
    return sum;
}

} // namespace oilcast
