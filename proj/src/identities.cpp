#include "wigner/identities.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace wigner {

namespace {

Eigen::LLT<Matrix> gram_llt(const Matrix& m, const char* what) {
    Matrix g = m * m.transpose();
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-14)
        throw DegeneracyError(std::string(what) + ": Gram matrix is numerically singular");
    return llt;
}

void require_symmetric(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || relative_error(m, m.transpose().eval()) > 1e-10)
        throw std::invalid_argument(std::string(what) + ": matrix must be symmetric");
}

Matrix invert_or_throw(const Matrix& m, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw DegeneracyError(std::string(what) + ": singular block or complement");
    return lu.inverse();
}

// Copy with row `row` and column `col` moved to the front, preserving the
// relative order of all other rows and columns.
Matrix move_to_front(const Matrix& p, Index row, Index col) {
    Matrix out(p.rows(), p.cols());
    Index r = 0;
    auto place_row = [&](Index src) {
        out(r, 0) = p(src, col);
        Index c = 1;
        for (Index j = 0; j < p.cols(); ++j)
            if (j != col) out(r, c++) = p(src, j);
        ++r;
    };
    place_row(row);
    for (Index i = 0; i < p.rows(); ++i)
        if (i != row) place_row(i);
    return out;
}

}  // namespace

Matrix rank_one_inverse_update(const Matrix& g_inv, const Vector& z) {
    require_symmetric(g_inv, "rank_one_inverse_update");
    if (z.size() != g_inv.rows())
        throw std::invalid_argument("rank_one_inverse_update: dimension mismatch");
    Vector v = g_inv * z;
    double den = 1.0 + z.dot(v);
    if (den <= 1e-12)
        throw DegeneracyError("rank_one_inverse_update: 1 + z^T G^{-1} z is not positive");
    return g_inv - (v * v.transpose()) / den;
}

Matrix schur_block_inverse(const Matrix& x, const Matrix& y, const Matrix& z) {
    require_symmetric(x, "schur_block_inverse (X)");
    require_symmetric(z, "schur_block_inverse (Z)");
    if (y.rows() != x.rows() || y.cols() != z.rows())
        throw std::invalid_argument("schur_block_inverse: block dimensions do not match");

    Matrix x_inv = invert_or_throw(x, "schur_block_inverse (X)");
    Matrix z_inv = invert_or_throw(z, "schur_block_inverse (Z)");
    Matrix top_left = invert_or_throw(x - y * z_inv * y.transpose(), "schur_block_inverse");
    Matrix bottom_right = invert_or_throw(z - y.transpose() * x_inv * y, "schur_block_inverse");
    Matrix top_right = -x_inv * y * bottom_right;

    Index p = x.rows(), q = z.rows();
    Matrix out(p + q, p + q);
    out.topLeftCorner(p, p) = top_left;
    out.topRightCorner(p, q) = top_right;
    out.bottomLeftCorner(q, p) = top_right.transpose();
    out.bottomRightCorner(q, q) = bottom_right;
    return out;
}

Matrix qq_inverse_via_schur(const Vector& y, const Matrix& r) {
    if (r.cols() != y.size())
        throw std::invalid_argument("qq_inverse_via_schur: dimension mismatch");
    auto llt_r = gram_llt(r, "qq_inverse_via_schur");

    Vector ry = r * y;
    Vector s = llt_r.solve(ry);  // (RR^T)^{-1} R y
    double d2 = y.squaredNorm() - ry.dot(s);
    if (d2 <= 1e-8 * std::max(1.0, y.squaredNorm()))
        throw DegeneracyError("qq_inverse_via_schur: degenerate d^2 (y lies in rowspace of R)");

    Index k = r.rows();
    Matrix r_gram_inv = llt_r.solve(Matrix::Identity(k, k));
    Matrix out(k + 1, k + 1);
    out(0, 0) = 1.0 / d2;
    out.block(0, 1, 1, k) = -(s / d2).transpose();
    out.block(1, 0, k, 1) = -s / d2;
    out.bottomRightCorner(k, k) = r_gram_inv + (s * s.transpose()) / d2;
    return out;
}

DistanceDecomposition decompose_distance(const Matrix& a, Index n) {
    Index size = a.rows();
    if (a.cols() != size) throw std::invalid_argument("decompose_distance: matrix must be square");
    if (n < 1 || n > size - 1)
        throw std::invalid_argument("decompose_distance: need 1 <= n <= N-1");

    Vector x = a.row(0);
    Matrix b = a.middleRows(1, n);
    Vector z = b.col(0);
    Matrix p = b.rightCols(size - 1);
    Vector x1 = x.tail(size - 1);

    auto llt = gram_llt(p, "decompose_distance");
    Vector px1 = p * x1;
    Vector sol_px1 = llt.solve(px1);
    Vector sol_z = llt.solve(z);

    DistanceDecomposition out;
    out.truncated_term = x1.squaredNorm() - px1.dot(sol_px1);
    out.error_numerator = a(0, 0) - z.dot(sol_px1);
    out.error_denominator = 1.0 + z.dot(sol_z);
    out.total = out.truncated_term + out.error_term();
    return out;
}

DistanceDecomposition decompose_distance(const MatrixSample& sample, Index n) {
    return decompose_distance(sample.entries, n);
}

DiagonalEntryBreakdown diagonal_entry_formula(const Matrix& p, Index i) {
    if (p.rows() < 2 || p.cols() < 2)
        throw std::invalid_argument("diagonal_entry_formula: P must be at least 2x2");
    if (i < 0 || i >= p.rows())
        throw std::invalid_argument("diagonal_entry_formula: row index out of range");

    Matrix q = move_to_front(p, i, i);
    double x0 = q(0, 0);
    Vector y = q.row(0).tail(q.cols() - 1);
    Vector z = q.col(0).tail(q.rows() - 1);
    Matrix r = q.bottomRightCorner(q.rows() - 1, q.cols() - 1);

    auto llt_r = gram_llt(r, "diagonal_entry_formula");
    Vector ry = r * y;
    Vector s = llt_r.solve(ry);
    Vector u = llt_r.solve(z);

    DiagonalEntryBreakdown out;
    out.d_squared = y.squaredNorm() - ry.dot(s);
    if (out.d_squared <= 1e-8 * std::max(1.0, y.squaredNorm()))
        throw DegeneracyError("diagonal_entry_formula: degenerate d^2");
    out.numerator = x0 - ry.dot(u);
    out.a_coef = out.numerator / out.d_squared;
    out.denominator = out.d_squared * (1.0 + z.dot(u)) + out.numerator * out.numerator;
    out.value = out.numerator / out.denominator;
    return out;
}

TraceComparison trace_comparison(const Matrix& p, Index k) {
    if (p.rows() < 2 || p.cols() < 3)
        throw std::invalid_argument("trace_comparison: P must have >= 2 rows and >= 3 columns");
    if (k < 0 || k >= p.rows())
        throw std::invalid_argument("trace_comparison: removed index out of range");

    Matrix pp = move_to_front(p, k, k);
    Index n = pp.rows();
    double x0 = pp(0, 0);
    Vector y = pp.row(0).tail(pp.cols() - 1);
    Vector z = pp.col(0).tail(n - 1);
    Matrix r = pp.bottomRightCorner(n - 1, pp.cols() - 1);

    auto llt_p = gram_llt(pp, "trace_comparison (P)");
    auto llt_r = gram_llt(r, "trace_comparison (R)");

    Matrix w_p = llt_p.solve(pp);  // (PP^T)^{-1} P
    Matrix w_r = llt_r.solve(r);   // (RR^T)^{-1} R

    TraceComparison out;
    out.diag_sum = w_p.diagonal().sum();
    out.first_entry = w_p(0, 0);
    out.diag_sum_reduced = w_r.diagonal().sum();

    Vector ry = r * y;
    Vector s = llt_r.solve(ry);  // (RR^T)^{-1} R y
    Vector u = llt_r.solve(z);   // (RR^T)^{-1} z
    double d2 = y.squaredNorm() - ry.dot(s);
    if (d2 <= 1e-8 * std::max(1.0, y.squaredNorm()))
        throw DegeneracyError("trace_comparison: degenerate d^2");

    double num = x0 - ry.dot(u);
    double a = num / d2;
    double one_wqw = 1.0 + z.dot(u) + num * num / d2;  // 1 + w^T (QQ^T)^{-1} w

    Vector v = y - r.transpose() * s;     // row vector y (I - R^T (RR^T)^{-1} R)
    Vector rtu = r.transpose() * u;       // row vector z^T (RR^T)^{-1} R

    Matrix m1p = (s * v.transpose()) / d2;
    Matrix m2 = (-a * a * (s * v.transpose()) + a * (u * y.transpose()) +
                 u * rtu.transpose() - a * (s * rtu.transpose() + u * (r.transpose() * s).transpose())) /
                one_wqw;

    Index diag_len = n - 1;
    out.correction = (m1p + m2).diagonal().head(diag_len).sum();

    double f = 1.0 / (d2 * one_wqw);
    out.e1 = f * std::abs(num) * std::abs(u.dot(v.head(diag_len)));
    out.e2 = f * (1.0 + z.dot(u)) * std::abs(s.dot(v.head(diag_len)));
    out.e3 = f * y.dot(v) * std::abs(u.dot(rtu.head(diag_len)));
    out.e4 = f * std::abs(num) * std::abs(s.dot(rtu.head(diag_len)));

    out.identity_residual =
        std::abs((out.diag_sum - out.first_entry) - (out.diag_sum_reduced - out.correction));
    return out;
}

ErrorTermReport error_term_magnitudes(const Matrix& p, Index k) {
    TraceComparison cmp = trace_comparison(p, k);
    double n_cols = static_cast<double>(p.cols());
    double m = n_cols - static_cast<double>(p.rows());
    ErrorTermReport out;
    out.e1 = cmp.e1;
    out.e2 = cmp.e2;
    out.e3 = cmp.e3;
    out.e4 = cmp.e4;
    out.trace_gap_scaled = std::abs(cmp.diag_sum - cmp.diag_sum_reduced) * m / std::sqrt(n_cols);
    return out;
}

}  // namespace wigner
