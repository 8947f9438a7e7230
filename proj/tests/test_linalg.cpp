#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wigner/ensembles.hpp"
#include "wigner/linalg.hpp"

using namespace wigner;

namespace {

Matrix seeded_gaussian(Index rows, Index cols, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::standard_gaussian;
    return sample_iid(rows, cols, spec, seed, 0).entries;
}

}  // namespace

TEST_CASE("svd of simple matrices") {
    SvdResult id3 = svd(Matrix::Identity(3, 3));
    for (Index i = 0; i < 3; ++i) CHECK(id3.singular_values(i) == doctest::Approx(1.0));

    Matrix d(2, 2);
    d << 3, 0, 0, 0;
    SvdResult dd = svd(d);
    CHECK(dd.singular_values(0) == doctest::Approx(3.0));
    CHECK(dd.singular_values(1) == doctest::Approx(0.0));

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(bad), std::invalid_argument);
}

TEST_CASE("svd reconstruction and ordering on a seeded 8x5 matrix") {
    Matrix a = seeded_gaussian(8, 5, 21);
    SvdResult r = svd(a);
    Matrix rebuilt = r.left.leftCols(5) * r.singular_values.asDiagonal() * r.right.transpose();
    CHECK((a - rebuilt).norm() / a.norm() <= 1e-10);
    for (Index i = 1; i < r.singular_values.size(); ++i)
        CHECK(r.singular_values(i - 1) >= r.singular_values(i));
}

TEST_CASE("distance to rowspace: axis-aligned cases") {
    Matrix b(2, 4);
    b << 0, 1, 0, 0, 0, 0, 1, 0;
    Vector x = Vector::Unit(4, 0);
    CHECK(distance_to_rowspace(x, b) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix row(1, 3);
    row << 0, 0, 1;
    Vector v(3);
    v << 3, 4, 0;
    CHECK(distance_to_rowspace(v, row) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("distance routes agree on 200 seeded well-conditioned instances") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Index n = 4 + static_cast<Index>(seed % 13);
        Index cols = n + 3 + static_cast<Index>(seed % 7);
        Matrix b = seeded_gaussian(n, cols, 1000 + seed);
        Vector x = seeded_gaussian(1, cols, 2000 + seed).row(0);
        double gram = distance_to_rowspace(x, b, DistanceMethod::gram);
        double orth = distance_to_rowspace(x, b, DistanceMethod::orthogonalization);
        CHECK(relative_error(gram, orth) <= 1e-8);
    }
    // tighter agreement on the documented 20x12 instance
    Matrix b = seeded_gaussian(12, 20, 5);
    Vector x = seeded_gaussian(1, 20, 6).row(0);
    CHECK(relative_error(distance_to_rowspace(x, b, DistanceMethod::gram),
                         distance_to_rowspace(x, b, DistanceMethod::orthogonalization)) <= 1e-10);
}

TEST_CASE("rank-deficient B: gram errors, orthogonalization falls back") {
    Matrix b(3, 4);
    b << 1, 0, 0, 0,
         1, 0, 0, 0,
         2, 0, 0, 0;  // one direction repeated
    Vector x(4);
    x << 0, 3, 0, 4;
    CHECK_THROWS_AS(distance_to_rowspace(x, b, DistanceMethod::gram), DegeneracyError);
    CHECK(distance_to_rowspace(x, b, DistanceMethod::orthogonalization) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(distance_to_rowspace(x, b, DistanceMethod::checked) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("least singular value") {
    CHECK(least_singular_value(Matrix::Identity(4, 4)) == doctest::Approx(1.0));
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 2;
    diag(1, 1) = 1;
    CHECK(least_singular_value(diag) == 0.0);

    Matrix a = seeded_gaussian(50, 40, 9);
    Vector s = singular_values(a);
    CHECK(least_singular_value(a) == s(s.size() - 1));
}

TEST_CASE("trace of inverse Gram matrix") {
    CHECK(trace_inverse_gram(Matrix::Identity(3, 3)) == doctest::Approx(3.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 1;
    CHECK(trace_inverse_gram(d) == doctest::Approx(1.25).epsilon(1e-12));

    Matrix p = seeded_gaussian(30, 60, 31);
    Vector s = singular_values(p);
    double direct = s.array().square().inverse().sum();
    CHECK(relative_error(trace_inverse_gram(p), direct) <= 1e-8);

    // the HS-norm identity is cross-checked internally; a singular input throws
    Matrix sing = Matrix::Zero(2, 3);
    sing(0, 0) = 1;
    CHECK_THROWS_AS(trace_inverse_gram(sing), DegeneracyError);
}

TEST_CASE("norms") {
    CHECK(hs_norm(Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(op_norm(Matrix::Identity(2, 2)) == doctest::Approx(1.0));
    CHECK(hs_norm(Matrix::Zero(3, 3)) == 0.0);
    CHECK(op_norm(Matrix::Zero(3, 3)) == 0.0);

    Matrix a = seeded_gaussian(5, 7, 77);
    Vector s = singular_values(a);
    CHECK(relative_error(hs_norm(a) * hs_norm(a), s.squaredNorm()) <= 1e-10);
    CHECK(op_norm(a) == doctest::Approx(s(0)));
}

TEST_CASE("projector onto complement") {
    Matrix b(1, 3);
    b << 1, 0, 0;
    ProjectionReport rep = projector_onto_complement(b);
    Matrix expected = Matrix::Zero(3, 3);
    expected(1, 1) = 1;
    expected(2, 2) = 1;
    CHECK((rep.projector - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(rep.codimension == 2);
    CHECK(rep.projector.trace() == doctest::Approx(2.0).epsilon(1e-10));

    ProjectionReport full = projector_onto_complement(Matrix::Identity(4, 4));
    CHECK(full.projector.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(full.codimension == 0);

    Matrix wide = seeded_gaussian(25, 40, 55);
    ProjectionReport r = projector_onto_complement(wide);
    CHECK(std::abs(r.projector.trace() - 15.0) <= 1e-6);
    CHECK(r.codimension == 15);
    // idempotence and symmetry
    CHECK((r.projector * r.projector - r.projector).norm() <=
          1e-8 * std::max(1.0, r.projector.norm()));
    CHECK((r.projector - r.projector.transpose()).norm() <= 1e-10);

    Matrix rankdef(2, 3);
    rankdef << 1, 2, 3, 2, 4, 6;
    CHECK_THROWS_AS(projector_onto_complement(rankdef), DegeneracyError);
}

TEST_CASE("numerical row rank") {
    CHECK(numerical_row_rank(Matrix::Identity(5, 5)) == 5);
    Matrix rankdef(2, 3);
    rankdef << 1, 2, 3, 2, 4, 6;
    CHECK(numerical_row_rank(rankdef) == 1);
}
