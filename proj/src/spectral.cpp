#include "wigner/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wigner/linalg.hpp"

namespace wigner {

double quarter_circle_density(double x) {
    if (x < 0.0 || x > 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / M_PI;
}

namespace {

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = quarter_circle_density(lm), frm = quarter_circle_density(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

Vector singular_values_fast(const Matrix& a) {
    // Symmetric square matrices: singular values are |eigenvalues|.
    if (a.rows() == a.cols() && a.rows() > 0 && a == a.transpose()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        Vector s = es.eigenvalues().cwiseAbs();
        std::sort(s.data(), s.data() + s.size(), std::greater<double>());
        return s;
    }
    return singular_values(a);
}

}  // namespace

double quarter_circle_mass(double lo, double hi) {
    lo = std::clamp(lo, 0.0, 2.0);
    hi = std::clamp(hi, 0.0, 2.0);
    if (hi <= lo) return 0.0;
    double fa = quarter_circle_density(lo);
    double fb = quarter_circle_density(hi);
    double fm = quarter_circle_density(0.5 * (lo + hi));
    double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(lo, hi, fa, fm, fb, whole, 1e-9, 48);
}

IntervalCount count_singular_values(const Matrix& a, double lo, double hi, SvNormalization norm) {
    if (a.size() == 0) throw std::invalid_argument("count_singular_values: empty matrix");
    if (!(lo < hi)) throw std::invalid_argument("count_singular_values: need lo < hi");

    double scale = norm == SvNormalization::by_sqrt_n
                       ? std::sqrt(static_cast<double>(a.cols()))
                       : 1.0;
    Vector s = singular_values_fast(a);

    IntervalCount out;
    out.lo = lo;
    out.hi = hi;
    for (Index i = 0; i < s.size(); ++i) {
        double v = s(i) / scale;
        if (v >= lo && v <= hi) ++out.observed;
    }
    double count_dim = static_cast<double>(std::min(a.rows(), a.cols()));
    // Prediction lives on the normalized axis; a raw interval is rescaled to it.
    double plo = norm == SvNormalization::by_sqrt_n ? lo : lo / std::sqrt(double(a.cols()));
    double phi = norm == SvNormalization::by_sqrt_n ? hi : hi / std::sqrt(double(a.cols()));
    out.predicted = count_dim * quarter_circle_mass(plo, phi);
    return out;
}

InterlacingReport interlacing_check(const Matrix& a, Index removed_row) {
    if (a.rows() < 2) throw std::invalid_argument("interlacing_check: need >= 2 rows");
    if (removed_row < 0 || removed_row >= a.rows())
        throw std::invalid_argument("interlacing_check: row index out of range");

    Matrix reduced(a.rows() - 1, a.cols());
    Index r = 0;
    for (Index i = 0; i < a.rows(); ++i)
        if (i != removed_row) reduced.row(r++) = a.row(i);

    Vector s_full = singular_values(a);
    Vector s_red = singular_values(reduced);

    InterlacingReport out;
    out.max_violation = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < s_red.size(); ++i) {
        out.max_violation = std::max(out.max_violation, s_red(i) - s_full(i));
        out.max_violation = std::max(out.max_violation, s_full(i + 1) - s_red(i));
    }
    out.ok = out.max_violation <= 1e-8 * s_full(0);
    return out;
}

double trace_inverse_ratio(const Matrix& p) {
    Index n = p.rows();
    Index cols = p.cols();
    if (cols - n < 1)
        throw std::invalid_argument("trace_inverse_ratio: need m = cols - rows >= 1");
    return static_cast<double>(cols - n) * trace_inverse_gram(p) / static_cast<double>(cols);
}

}  // namespace wigner
