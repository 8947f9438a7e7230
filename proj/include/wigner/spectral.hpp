#pragma once

#include "wigner/types.hpp"

namespace wigner {

/// Observed vs predicted singular-value count over one interval of the
/// normalized axis.
struct IntervalCount {
    double lo = 0.0;
    double hi = 0.0;
    Index observed = 0;
    double predicted = 0.0;
};

struct InterlacingReport {
    bool ok = true;
    double max_violation = 0.0;  // signed; positive means a violated inequality
};

enum class SvNormalization { raw, by_sqrt_n };

/// Normalized density of |eigenvalue| for a Wigner matrix scaled by sqrt(N):
/// (1/pi) sqrt(4 - x^2) on [0, 2], integrating to 1.
double quarter_circle_density(double x);

/// Integral of the quarter-circle density over [lo, hi] (clipped to [0, 2]),
/// by adaptive Simpson quadrature to 1e-9 absolute.
double quarter_circle_mass(double lo, double hi);

/// Counts singular values inside the closed interval [lo, hi]. With
/// by_sqrt_n the values are divided by sqrt(cols) first. predicted is
/// min(rows, cols) times the quarter-circle mass of the normalized interval.
/// Symmetric square inputs use an eigendecomposition of the matrix itself.
IntervalCount count_singular_values(const Matrix& a, double lo, double hi, SvNormalization norm);

/// Checks sigma_i(A) >= sigma_i(A') >= sigma_{i+1}(A) for A' = A with one row
/// removed, up to 1e-8 * sigma_1.
InterlacingReport interlacing_check(const Matrix& a, Index removed_row);

/// m * tr((PP^T)^{-1}) / N for an n x N matrix with m = N - n >= 1.
double trace_inverse_ratio(const Matrix& p);

}  // namespace wigner
