#pragma once

#include "wigner/ensembles.hpp"
#include "wigner/types.hpp"

namespace wigner {

/// The four pieces of the distance split under first-column removal:
///   dist^2 = truncated_term + error_numerator^2 / error_denominator.
struct DistanceDecomposition {
    double truncated_term = 0.0;     // x1 (I - P^T (PP^T)^{-1} P) x1^T
    double error_numerator = 0.0;    // a11 - z^T (PP^T)^{-1} P x1^T
    double error_denominator = 1.0;  // 1 + z^T (PP^T)^{-1} z, always >= 1
    double total = 0.0;

    double error_term() const { return error_numerator * error_numerator / error_denominator; }
};

/// Components of the closed form for a diagonal entry of (PP^T)^{-1} P.
struct DiagonalEntryBreakdown {
    double d_squared = 0.0;   // squared distance from the removed row to R's rowspace
    double a_coef = 0.0;      // numerator / d_squared
    double numerator = 0.0;   // x0 - y R^T (RR^T)^{-1} z
    double denominator = 0.0; // D1 = d^2 (1 + z^T (RR^T)^{-1} z) + numerator^2
    double value = 0.0;       // numerator / denominator
};

/// Diagonal-sum comparison between (PP^T)^{-1} P and the reduced (RR^T)^{-1} R
/// after removing one row/column pair, with the exact correction matrices and
/// the four-term bound on their diagonal sum.
struct TraceComparison {
    double diag_sum = 0.0;          // T  = sum_i ((PP^T)^{-1} P)_{ii}
    double diag_sum_reduced = 0.0;  // T_R = sum_i ((RR^T)^{-1} R)_{ii}
    double correction = 0.0;        // sum_i (M1' + M2)_{ii}
    double first_entry = 0.0;       // the removed diagonal entry ((PP^T)^{-1} P)_{kk}
    double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
    double identity_residual = 0.0; // |(T - first_entry) - (T_R - correction)|
};

struct ErrorTermReport {
    double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
    double trace_gap_scaled = 0.0;  // |T - T_R| * m / sqrt(N)
};

/// (G + z z^T)^{-1} from G^{-1} via the rank-one inverse update. Throws
/// DegeneracyError when 1 + z^T G^{-1} z <= 1e-12.
Matrix rank_one_inverse_update(const Matrix& g_inv, const Vector& z);

/// Inverse of the symmetric block matrix [[X, Y], [Y^T, Z]] assembled from
/// the two Schur complements. X and Z must be symmetric.
Matrix schur_block_inverse(const Matrix& x, const Matrix& y, const Matrix& z);

/// (QQ^T)^{-1} assembled from its four displayed blocks, where Q has first
/// row y and remaining rows R. Throws on degenerate d^2 (y in rowspace of R).
Matrix qq_inverse_via_schur(const Vector& y, const Matrix& r);

/// Builds B = rows 1..n of the square matrix (0-based), z its first column,
/// P the rest, x = row 0, and returns the distance split for dist(x, span B).
DistanceDecomposition decompose_distance(const Matrix& a, Index n);
DistanceDecomposition decompose_distance(const MatrixSample& sample, Index n);

/// Closed form for ((PP^T)^{-1} P)_{ii} (0-based i), computed by moving
/// row/column i to the front and evaluating the i = 0 formula.
DiagonalEntryBreakdown diagonal_entry_formula(const Matrix& p, Index i);

/// Full diagonal-sum comparison after removing row/column k (0-based).
TraceComparison trace_comparison(const Matrix& p, Index k);

ErrorTermReport error_term_magnitudes(const Matrix& p, Index k);

}  // namespace wigner
