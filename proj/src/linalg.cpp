#include "wigner/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <stdexcept>

namespace wigner {

namespace {

void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

Eigen::LLT<Matrix> gram_llt(const Matrix& b, const char* what) {
    Matrix g = b * b.transpose();
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-14)
        throw DegeneracyError(std::string(what) + ": Gram matrix is numerically singular");
    return llt;
}

}  // namespace

SvdResult svd(const Matrix& a) {
    require_finite(a, "svd");
    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return SvdResult{dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

Vector singular_values(const Matrix& a) {
    require_finite(a, "singular_values");
    Eigen::BDCSVD<Matrix> dec(a);
    return dec.singularValues();
}

Index numerical_row_rank(const Matrix& a, double tol_ratio) {
    Vector s = singular_values(a);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) / s(0) >= tol_ratio) ++rank;
    return rank;
}

namespace {

double distance_gram(const Vector& x, const Matrix& b) {
    auto llt = gram_llt(b, "distance_to_rowspace");
    Vector bx = b * x;
    double d2 = x.squaredNorm() - bx.dot(llt.solve(bx));
    return std::sqrt(std::max(0.0, d2));
}

double distance_orth(const Vector& x, const Matrix& b) {
    // QR of B^T; the residual beyond the numerical rank is the distance.
    Eigen::ColPivHouseholderQR<Matrix> qr(b.transpose());
    qr.setThreshold(kRankTolerance);
    Index rank = qr.rank();
    Vector qtx = qr.householderQ().transpose() * x;
    if (rank >= qtx.size()) return 0.0;
    return qtx.tail(qtx.size() - rank).norm();
}

}  // namespace

double distance_to_rowspace(const Vector& x, const Matrix& b, DistanceMethod method) {
    if (b.rows() < 1) throw std::invalid_argument("distance_to_rowspace: B must have rows");
    if (x.size() != b.cols())
        throw std::invalid_argument("distance_to_rowspace: dimension mismatch");
    require_finite(b, "distance_to_rowspace");
    if (!x.allFinite()) throw std::invalid_argument("distance_to_rowspace: non-finite x");

    switch (method) {
        case DistanceMethod::gram:
            return distance_gram(x, b);
        case DistanceMethod::orthogonalization:
            return distance_orth(x, b);
        case DistanceMethod::checked: {
            Eigen::ColPivHouseholderQR<Matrix> qr(b.transpose());
            qr.setThreshold(kRankTolerance);
            double orth = distance_orth(x, b);
            if (qr.rank() < b.rows()) return orth;  // rank-deficient: QR route only
            double gram = distance_gram(x, b);
            if (relative_error(gram, orth) > 1e-8)
                throw DegeneracyError("distance_to_rowspace: Gram and QR routes disagree");
            return gram;
        }
    }
    throw std::invalid_argument("distance_to_rowspace: unknown method");
}

double least_singular_value(const Matrix& a) {
    Vector s = singular_values(a);
    return s(s.size() - 1);
}

double trace_inverse_gram(const Matrix& p) {
    Vector s = singular_values(p);
    if (s(0) == 0.0 || s(s.size() - 1) / s(0) < kRankTolerance)
        throw DegeneracyError("trace_inverse_gram: singular Gram matrix");
    double from_svd = s.array().square().inverse().sum();

    auto llt = gram_llt(p, "trace_inverse_gram");
    double from_hs = llt.solve(p).squaredNorm();  // ||(PP^T)^{-1} P||_HS^2
    if (relative_error(from_hs, from_svd) > 1e-8)
        throw DegeneracyError("trace_inverse_gram: SVD and Gram routes disagree");
    return from_svd;
}

double hs_norm(const Matrix& a) { return a.norm(); }

double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Vector s = singular_values(a);
    return s(0);
}

ProjectionReport projector_onto_complement(const Matrix& b) {
    require_finite(b, "projector_onto_complement");
    Index rank = numerical_row_rank(b);
    if (rank < b.rows())
        throw DegeneracyError("projector_onto_complement: B is rank deficient");
    auto llt = gram_llt(b, "projector_onto_complement");
    Index n = b.cols();
    Matrix projector = Matrix::Identity(n, n) - b.transpose() * llt.solve(b);
    return ProjectionReport{std::move(projector), n - rank, kRankTolerance};
}

}  // namespace wigner
