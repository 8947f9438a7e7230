#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace wigner {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Singular-value ratio below which a matrix is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// Raised when a Gram matrix, a denominator, or a removal chain is too close
/// to singular for the requested formula. The events the theory excludes with
/// high probability have to be handled explicitly at runtime.
struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a theoretical bound is evaluated outside its applicability
/// range (e.g. a small-ball radius below the structure threshold).
struct NotApplicableError : std::domain_error {
    explicit NotApplicableError(const std::string& what) : std::domain_error(what) {}
};

// Relative error scaled by max(1, |reference|) so values near zero do not
// produce spurious failures.
inline double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline double relative_error(const Matrix& value, const Matrix& reference) {
    return (value - reference).norm() / std::max(1.0, reference.norm());
}

}  // namespace wigner
