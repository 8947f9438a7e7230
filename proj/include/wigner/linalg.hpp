#pragma once

#include "wigner/types.hpp"

namespace wigner {

/// Full SVD A = U diag(s) V^T with s sorted descending.
struct SvdResult {
    Vector singular_values;
    Matrix left;   // U
    Matrix right;  // V
};

/// Orthogonal projector onto the complement of a rowspace.
struct ProjectionReport {
    Matrix projector;      // I - B^T (B B^T)^{-1} B, symmetric idempotent
    Index codimension = 0; // ambient dimension minus numerical row rank
    double rank_tolerance = kRankTolerance;
};

enum class DistanceMethod {
    gram,              // x x^T - (Bx)^T (BB^T)^{-1} (Bx), Cholesky solve
    orthogonalization, // residual after projecting onto Q from a QR of B^T
    checked,           // both routes, cross-validated to 1e-8 relative
};

SvdResult svd(const Matrix& a);

/// Singular values only (descending), cheaper than a full SVD.
Vector singular_values(const Matrix& a);

/// Euclidean distance from x to the span of B's rows. The Gram route throws
/// DegeneracyError on rank-deficient B; checked falls back to the
/// orthogonalization result when the QR rank test reports deficiency.
double distance_to_rowspace(const Vector& x, const Matrix& b,
                            DistanceMethod method = DistanceMethod::checked);

double least_singular_value(const Matrix& a);

/// tr((P P^T)^{-1}) = sum sigma_i(P)^{-2}; cross-checked against
/// ||(P P^T)^{-1} P||_HS^2 which equals it identically.
double trace_inverse_gram(const Matrix& p);

double hs_norm(const Matrix& a);
double op_norm(const Matrix& a);

/// I - B^T (B B^T)^{-1} B together with the codimension it projects onto.
ProjectionReport projector_onto_complement(const Matrix& b);

/// Row rank with the sigma_min/sigma_max < tol_ratio cutoff.
Index numerical_row_rank(const Matrix& a, double tol_ratio = kRankTolerance);

}  // namespace wigner
