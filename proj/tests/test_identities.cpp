#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include <cmath>

#include "wigner/ensembles.hpp"
#include "wigner/identities.hpp"
#include "wigner/linalg.hpp"

using namespace wigner;

namespace {

Matrix seeded_gaussian(Index rows, Index cols, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::standard_gaussian;
    return sample_iid(rows, cols, spec, seed, 0).entries;
}

Matrix seeded_wigner(Index n, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::standard_gaussian;
    spec.symmetric = true;
    spec.dimension = n;
    return sample_wigner(spec, seed, 0).entries;
}

// Direct distance oracle: x (I - B^T (BB^T)^{-1} B) x^T with an explicit inverse.
double direct_distance_squared(const Vector& x, const Matrix& b) {
    Matrix gram_inv = (b * b.transpose()).inverse();
    Matrix projector = Matrix::Identity(b.cols(), b.cols()) - b.transpose() * gram_inv * b;
    return x.dot(projector * x);
}

}  // namespace

TEST_CASE("rank-one inverse update") {
    CHECK((rank_one_inverse_update(Matrix::Identity(2, 2), Vector::Zero(2)) -
           Matrix::Identity(2, 2))
              .norm() == 0.0);

    // 1x1 closed form: (1 + 1)^{-1} = 1 - 1/(1+1) = 0.5
    Matrix g1 = Matrix::Identity(1, 1);
    Vector z1 = Vector::Ones(1);
    CHECK(rank_one_inverse_update(g1, z1)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));

    Matrix g_half = seeded_gaussian(5, 5, 1);
    Matrix g = g_half * g_half.transpose() + 0.5 * Matrix::Identity(5, 5);
    Vector z = seeded_gaussian(5, 1, 2).col(0);
    Matrix updated = rank_one_inverse_update(g.inverse(), z);
    Matrix direct = (g + z * z.transpose()).inverse();
    CHECK(relative_error(updated, direct) <= 1e-10);

    // denominator ~ 0: z such that 1 + z^T G^{-1} z <= 1e-12 requires negative
    // curvature; build it from a non-PSD symmetric G.
    Matrix neg = -Matrix::Identity(1, 1);
    Vector zz = Vector::Ones(1);
    CHECK_THROWS_AS(rank_one_inverse_update(neg, zz), DegeneracyError);
    CHECK_THROWS_AS(rank_one_inverse_update(seeded_gaussian(3, 3, 4), Vector::Zero(3)),
                    std::invalid_argument);  // not symmetric
}

TEST_CASE("schur block inverse") {
    Matrix id = schur_block_inverse(Matrix::Identity(1, 1), Matrix::Zero(1, 2),
                                    Matrix::Identity(2, 2));
    CHECK(relative_error(id, Matrix::Identity(3, 3)) <= 1e-14);

    Matrix x(1, 1), zblk(1, 1);
    x << 2;
    zblk << 4;
    Matrix diag = schur_block_inverse(x, Matrix::Zero(1, 1), zblk);
    CHECK(diag(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(diag(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(diag(0, 1) == doctest::Approx(0.0));

    Matrix half = seeded_gaussian(6, 6, 3);
    Matrix m = half * half.transpose() + Matrix::Identity(6, 6);
    Matrix split = schur_block_inverse(m.topLeftCorner(2, 2), m.topRightCorner(2, 4),
                                       m.bottomRightCorner(4, 4));
    CHECK(relative_error(split, m.inverse().eval()) <= 1e-10);

    CHECK_THROWS_AS(schur_block_inverse(Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                                        Matrix::Identity(2, 2)),
                    DegeneracyError);
}

TEST_CASE("(QQ^T)^{-1} via the block formula") {
    // Q = I_2: y = e1, R = (0 1)
    Matrix r(1, 2);
    r << 0, 1;
    Vector y = Vector::Unit(2, 0);
    CHECK(relative_error(qq_inverse_via_schur(y, r), Matrix::Identity(2, 2)) <= 1e-14);

    // y orthogonal to rowspace(R), unit norm: top-left block is 1
    Matrix r2(2, 4);
    r2 << 0, 1, 0, 0, 0, 0, 1, 0;
    Vector y2 = Vector::Unit(4, 3);
    Matrix qq = qq_inverse_via_schur(y2, r2);
    CHECK(qq(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix q = seeded_gaussian(10, 20, 8);
    Matrix assembled = qq_inverse_via_schur(q.row(0), q.bottomRows(9));
    Matrix direct = (q * q.transpose()).inverse();
    CHECK(relative_error(assembled, direct) <= 1e-8);

    // y inside the rowspace of R: degenerate d^2
    Matrix r3(1, 3);
    r3 << 1, 0, 0;
    Vector y3 = Vector::Unit(3, 0) * 2.0;
    CHECK_THROWS_AS(qq_inverse_via_schur(y3, r3), DegeneracyError);
}

TEST_CASE("distance decomposition: z = 0 kills both z-terms") {
    Matrix a = seeded_gaussian(12, 12, 13);
    for (Index i = 1; i <= 8; ++i) a(i, 0) = 0.0;  // zero the B column
    DistanceDecomposition dec = decompose_distance(a, 8);
    CHECK(dec.error_denominator == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dec.error_numerator == doctest::Approx(a(0, 0)).epsilon(1e-12));
    CHECK(dec.error_term() == doctest::Approx(a(0, 0) * a(0, 0)).epsilon(1e-12));
}

TEST_CASE("distance decomposition matches the direct projection formula") {
    Matrix a = seeded_wigner(30, 4);
    DistanceDecomposition dec = decompose_distance(a, 20);

    Vector x = a.row(0);
    Matrix b = a.middleRows(1, 20);
    CHECK(relative_error(dec.total, direct_distance_squared(x, b)) <= 1e-8);

    // the truncated term is the squared distance in the reduced space
    Matrix p = b.rightCols(29);
    Vector x1 = x.tail(29);
    double oracle = distance_to_rowspace(x1, p, DistanceMethod::orthogonalization);
    CHECK(relative_error(dec.truncated_term, oracle * oracle) <= 1e-8);

    // structural invariants
    CHECK(dec.error_denominator >= 1.0);
    CHECK(dec.total >= dec.truncated_term);
    CHECK(relative_error(dec.total, dec.truncated_term + dec.error_term()) <= 1e-12);

    CHECK_THROWS_AS(decompose_distance(a, 0), std::invalid_argument);
    CHECK_THROWS_AS(decompose_distance(a, 30), std::invalid_argument);
}

TEST_CASE("diagonal entry formula equals the direct matrix product") {
    Matrix p = seeded_gaussian(10, 25, 21);
    Matrix w = (p * p.transpose()).inverse() * p;
    for (Index i = 0; i < 10; ++i) {
        DiagonalEntryBreakdown entry = diagonal_entry_formula(p, i);
        CHECK(relative_error(entry.value, w(i, i)) <= 1e-8);
        CHECK(entry.d_squared >= -1e-8);
        CHECK(relative_error(entry.value, entry.numerator / entry.denominator) <= 1e-12);
        // AM-GM bound: |value| <= 1 / (2 sqrt(d^2 (1 + z^T (RR^T)^{-1} z)))
        double d2_times_1c = entry.denominator - entry.numerator * entry.numerator;
        CHECK(std::abs(entry.value) <= 1.0 / (2.0 * std::sqrt(d2_times_1c)) + 1e-10);
    }
}

TEST_CASE("diagonal entry formula: zero truncated column closed form") {
    Matrix p = seeded_gaussian(6, 14, 30);
    for (Index i = 1; i < 6; ++i) p(i, 0) = 0.0;  // col_1(P)^{[1]} = 0
    DiagonalEntryBreakdown entry = diagonal_entry_formula(p, 0);
    double x0 = p(0, 0);
    CHECK(entry.numerator == doctest::Approx(x0).epsilon(1e-12));
    CHECK(entry.value ==
          doctest::Approx(x0 / (entry.d_squared + x0 * x0)).epsilon(1e-10));
}

TEST_CASE("trace comparison identity and E-split bound") {
    Matrix p = seeded_gaussian(12, 30, 33);
    TraceComparison cmp = trace_comparison(p, 0);
    CHECK(cmp.identity_residual <= 1e-8 * std::max(1.0, std::abs(cmp.diag_sum_reduced)));
    CHECK(std::abs(cmp.correction) <= cmp.e1 + cmp.e2 + cmp.e3 + cmp.e4 + 1e-8);
    CHECK(cmp.e1 >= 0.0);
    CHECK(cmp.e2 >= 0.0);
    CHECK(cmp.e3 >= 0.0);
    CHECK(cmp.e4 >= 0.0);

    // direct check of T and the removed entry
    Matrix w = (p * p.transpose()).inverse() * p;
    CHECK(relative_error(cmp.diag_sum, w.diagonal().sum()) <= 1e-10);
    CHECK(relative_error(cmp.first_entry, w(0, 0)) <= 1e-10);

    // removing index k: first_entry must match the k-th diagonal entry
    TraceComparison cmp3 = trace_comparison(p, 3);
    CHECK(relative_error(cmp3.first_entry, w(3, 3)) <= 1e-10);
    CHECK(cmp3.identity_residual <= 1e-8 * std::max(1.0, std::abs(cmp3.diag_sum_reduced)));
}

TEST_CASE("trace comparison with w = 0 (zeroed removed column)") {
    Matrix p = seeded_gaussian(9, 22, 41);
    for (Index i = 0; i < 9; ++i) p(i, 0) = 0.0;
    TraceComparison cmp = trace_comparison(p, 0);
    CHECK(cmp.identity_residual <= 1e-8 * std::max(1.0, std::abs(cmp.diag_sum_reduced)));
    CHECK(std::abs(cmp.correction) <= cmp.e1 + cmp.e2 + cmp.e3 + cmp.e4 + 1e-8);
}

TEST_CASE("error term magnitudes") {
    CHECK_THROWS_AS(error_term_magnitudes(Matrix::Zero(5, 8), 0), DegeneracyError);

    std::vector<double> stats;
    for (int t = 0; t < 100; ++t) {
        Matrix p = seeded_gaussian(150, 200, 5000 + t);
        ErrorTermReport rep = error_term_magnitudes(p, 0);
        CHECK(rep.e1 >= 0.0);
        CHECK(rep.e2 >= 0.0);
        CHECK(rep.e3 >= 0.0);
        CHECK(rep.e4 >= 0.0);
        stats.push_back(rep.trace_gap_scaled);
    }
    std::sort(stats.begin(), stats.end());
    double median = 0.5 * (stats[49] + stats[50]);
    CHECK(median <= 20.0);  // constant-factor property; exact constants unspecified
}
