#pragma once

#include <cstdint>
#include <vector>

#include "wigner/ensembles.hpp"
#include "wigner/types.hpp"

namespace wigner {

/// Accuracy parameters of the lattice-approximation condition
/// dist(theta x, Z^N) < min(gamma ||theta x||_2, alpha).
struct LcdParams {
    double alpha = 1.0;
    double gamma = 0.5;
};

/// Outcome of a least-common-denominator search. `value` is the smallest
/// feasible scaling found; not finding one below `search_bound` is a regular
/// result (found = false, value = +inf), not an error.
struct LcdResult {
    double value = std::numeric_limits<double>::infinity();
    bool found = false;
    double witness_theta = std::numeric_limits<double>::quiet_NaN();
    Vector witness_vector;  // multi / subspace searches: the argmin direction
    double search_bound = 0.0;
    double resolution = 0.0;  // scan step; windows narrower than this can be missed
    bool exhaustive = true;   // false for sampled searches (estimates only)
};

struct CompressibilityReport {
    double c0 = 0.0;
    double c1 = 0.0;
    double sparse_distance = 0.0;  // norm of all but the ceil(c0 n) largest coordinates
    bool compressible = false;
    std::vector<Index> spread_set;  // k with c1/sqrt(2n) <= |x_k| <= 1/sqrt(c0 n)
};

enum class SmallBallMethod { exact_enumeration, monte_carlo };

struct SmallBallEstimate {
    double radius = 0.0;
    double estimate = 0.0;  // sup_u P(|S - u| <= radius)
    SmallBallMethod method = SmallBallMethod::exact_enumeration;
    double std_error = 0.0;  // 0 for the exact method
    double theory_bound = std::numeric_limits<double>::quiet_NaN();
};

enum class LcdMultiMode { exhaustive, randomized };
enum class SubsetSearch { automatic, exhaustive, sampled };

struct RegularizedLcdResult {
    LcdResult result;
    std::vector<Index> chosen;  // the maximizing index set I(x)
    bool exhaustive = true;     // false when only a sample of subsets was searched
};

/// Euclidean distance from v to the nearest integer lattice point.
double lattice_distance(const Vector& v);

/// Whether theta satisfies the essential-LCD condition for x.
bool lcd_feasible(const Vector& x, double theta, const LcdParams& params);

/// Grid scan of theta over (0, search_bound] followed by local bisection to
/// 1e-9. grid_step <= 0 selects the default 1e-5 * search_bound.
LcdResult lcd(const Vector& x, const LcdParams& params, double search_bound,
              double grid_step = 0.0);

/// Multi-dimensional LCD: minimal ||Theta|| with (<Theta,y_1>,...,<Theta,y_N>)
/// close to the lattice, searched over a polar grid of the radius-bound ball.
/// Exhaustive mode is capped at m <= 3; randomized mode samples directions
/// and is flagged non-exhaustive.
LcdResult lcd_multi(const std::vector<Vector>& xs, const LcdParams& params, double search_bound,
                    double grid_step = 0.0, LcdMultiMode mode = LcdMultiMode::exhaustive);

/// Upper estimate of inf over unit y in H of lcd(y), minimized over a
/// deterministic sample of directions plus local refinement. Rows of `basis`
/// must be orthonormal.
LcdResult lcd_subspace(const Matrix& basis, const LcdParams& params, double search_bound,
                       Index sample_count);

/// Max of lcd(x_I / ||x_I||) over subsets I of spread(x) with |I| =
/// ceil(lambda N); exhaustive when |spread(x)| <= 20, otherwise a
/// deterministic sample of subsets (flagged as a lower estimate).
RegularizedLcdResult regularized_lcd(const Vector& x, double lambda, const LcdParams& params,
                                     double c0, double c1, double search_bound,
                                     SubsetSearch mode = SubsetSearch::automatic,
                                     double grid_step = 0.0);

/// Distance to the set of ceil(c0 n)-sparse vectors and the spread set of
/// the (internally normalized) input.
CompressibilityReport classify_compressibility(const Vector& x, double c0, double c1);

/// Levy concentration sup_u P(|S - u| <= radius) of S = sum_i a_i x_i.
/// Exact mode enumerates all 2^N Rademacher sign patterns (N <= 20) and
/// maximizes a sliding window over the sorted sums; Monte-Carlo mode does the
/// same over sampled sums and reports the binomial standard error.
SmallBallEstimate levy_concentration(const Vector& x, EnsembleKind kind, double radius,
                                     SmallBallMethod method, Index mc_trials = 100000,
                                     std::uint64_t seed = 0);

/// c0_constant * (eps / gamma + exp(-2 alpha^2)), the one-dimensional
/// small-ball bound shape with a caller-supplied constant.
double small_ball_bound_1d(double eps, const LcdParams& params, double c0_constant);

/// (C eps / (gamma sqrt(b)))^m + C^m exp(-2 b alpha^2). Throws
/// NotApplicableError when eps < sqrt(m) / lcd_value.
double small_ball_bound_multi(double lcd_value, int m, double eps, const LcdParams& params,
                              double b, double c_constant);

}  // namespace wigner
