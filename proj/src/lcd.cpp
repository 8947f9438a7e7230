#include "wigner/lcd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wigner/rng.hpp"

namespace wigner {

double lattice_distance(const Vector& v) {
    double acc = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
        double r = v(i) - std::round(v(i));
        acc += r * r;
    }
    return std::sqrt(acc);
}

namespace {

void validate_params(const LcdParams& p) {
    if (!(p.alpha > 0.0)) throw std::invalid_argument("LcdParams: alpha must be positive");
    if (!(p.gamma > 0.0 && p.gamma < 1.0))
        throw std::invalid_argument("LcdParams: gamma must be in (0,1)");
}

// Squared lattice distance of theta*x with early exit above `cap2`.
double lattice_distance2_capped(const Vector& x, double theta, double cap2) {
    double acc = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
        double v = theta * x(i);
        double r = v - std::round(v);
        acc += r * r;
        if (acc >= cap2) return acc;
    }
    return acc;
}

bool feasible_at(const Vector& x, double x_norm, double theta, const LcdParams& p) {
    if (!(theta > 0.0)) return false;
    double cap = std::min(p.gamma * theta * x_norm, p.alpha);
    if (cap <= 0.0) return false;
    return lattice_distance2_capped(x, theta, cap * cap) < cap * cap;
}

// Scan (0, bound] at `step`, bisect the first feasible grid interval down to
// 1e-9, and return the refined boundary.
LcdResult scan_ray(const Vector& x, double x_norm, const LcdParams& p, double bound,
                   double step) {
    LcdResult out;
    out.search_bound = bound;
    out.resolution = step;

    auto steps = static_cast<long long>(std::ceil(bound / step));
    for (long long k = 1; k <= steps; ++k) {
        double theta = std::min(static_cast<double>(k) * step, bound);
        if (!feasible_at(x, x_norm, theta, p)) continue;
        double lo = static_cast<double>(k - 1) * step;
        double hi = theta;
        for (int iter = 0; iter < 60 && hi - lo > 1e-9; ++iter) {
            double mid = 0.5 * (lo + hi);
            if (feasible_at(x, x_norm, mid, p))
                hi = mid;
            else
                lo = mid;
        }
        out.value = hi;
        out.found = true;
        out.witness_theta = hi;
        return out;
    }
    return out;
}

}  // namespace

bool lcd_feasible(const Vector& x, double theta, const LcdParams& params) {
    validate_params(params);
    return feasible_at(x, x.norm(), theta, params);
}

LcdResult lcd(const Vector& x, const LcdParams& params, double search_bound, double grid_step) {
    validate_params(params);
    double x_norm = x.norm();
    if (x_norm == 0.0) throw std::invalid_argument("lcd: zero vector");
    if (!(search_bound > 0.0) || !std::isfinite(search_bound))
        throw std::invalid_argument("lcd: search_bound must be positive and finite");
    double step = grid_step > 0.0 ? grid_step : 1e-5 * search_bound;
    return scan_ray(x, x_norm, params, search_bound, step);
}

namespace {

std::vector<Vector> direction_grid(int m) {
    std::vector<Vector> dirs;
    if (m == 2) {
        // Half circle; theta -> -theta is a symmetry of the condition.
        const int count = 2048;
        dirs.reserve(count);
        for (int k = 0; k < count; ++k) {
            double phi = M_PI * static_cast<double>(k) / count;
            Vector u(2);
            u << std::cos(phi), std::sin(phi);
            dirs.push_back(u);
        }
    } else {
        // Fibonacci lattice on the upper half sphere plus the coordinate axes.
        const int count = 4096;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        dirs.reserve(count + 3);
        for (int k = 0; k < count; ++k) {
            double zc = (k + 0.5) / count;
            double rad = std::sqrt(std::max(0.0, 1.0 - zc * zc));
            double phi = golden * k;
            Vector u(3);
            u << rad * std::cos(phi), rad * std::sin(phi), zc;
            dirs.push_back(u);
        }
        for (int j = 0; j < 3; ++j) dirs.push_back(Vector::Unit(3, j));
    }
    return dirs;
}

struct RayProblem {
    Matrix coeffs;  // m x N, rows are the input vectors

    Vector along(const Vector& u) const { return coeffs.transpose() * u; }
};

// Improve (value, direction) by a tangent-space pattern search: a neighbor
// direction only wins if its ray becomes feasible strictly below the current
// value.
void refine_direction(const RayProblem& problem, const LcdParams& params, double fine_step,
                      Vector& u, double& value, double& witness) {
    int m = static_cast<int>(u.size());
    double delta = 0.25;
    for (int round = 0; round < 24; ++round, delta *= 0.5) {
        bool improved = false;
        for (int j = 0; j < m; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Vector cand = u + sgn * delta * Vector::Unit(m, j);
                cand.normalize();
                Vector y = problem.along(cand);
                double y_norm = y.norm();
                if (y_norm == 0.0) continue;
                LcdResult r = scan_ray(y, y_norm, params, value, fine_step);
                if (r.found && r.value < value) {
                    value = r.value;
                    witness = r.witness_theta;
                    u = cand;
                    improved = true;
                }
            }
        }
        if (!improved && delta < 1e-9) break;
    }
}

}  // namespace

LcdResult lcd_multi(const std::vector<Vector>& xs, const LcdParams& params, double search_bound,
                    double grid_step, LcdMultiMode mode) {
    validate_params(params);
    if (xs.empty()) throw std::invalid_argument("lcd_multi: no input vectors");
    const int m = static_cast<int>(xs.size());
    const Index n = xs[0].size();
    for (const auto& x : xs) {
        if (x.size() != n) throw std::invalid_argument("lcd_multi: inconsistent dimensions");
        if (x.norm() == 0.0) throw std::invalid_argument("lcd_multi: zero vector");
    }
    if (!(search_bound > 0.0) || !std::isfinite(search_bound))
        throw std::invalid_argument("lcd_multi: search_bound must be positive and finite");

    if (m == 1) {
        LcdResult r = lcd(xs[0], params, search_bound, grid_step);
        r.witness_vector = Vector::Constant(1, r.found ? r.witness_theta : 0.0);
        return r;
    }
    if (mode == LcdMultiMode::exhaustive && m > 3)
        throw std::invalid_argument("lcd_multi: exhaustive search is capped at m <= 3");

    RayProblem problem;
    problem.coeffs.resize(m, n);
    for (int i = 0; i < m; ++i) problem.coeffs.row(i) = xs[i];

    double step = grid_step > 0.0 ? grid_step : 1e-3 * search_bound;

    std::vector<Vector> dirs;
    if (mode == LcdMultiMode::exhaustive) {
        dirs = direction_grid(m);
    } else {
        CounterRng rng(0x6d756c7469ULL, static_cast<std::uint64_t>(m) << 32 |
                                            static_cast<std::uint64_t>(n));
        const int count = 4096;
        dirs.reserve(count + m);
        for (int k = 0; k < count; ++k) {
            Vector u(m);
            for (int j = 0; j < m; ++j)
                u(j) = rng.normal_at(static_cast<std::uint64_t>(k) * m + j);
            double nn = u.norm();
            if (nn > 0) dirs.push_back(u / nn);
        }
        for (int j = 0; j < m; ++j) dirs.push_back(Vector::Unit(m, j));
    }

    LcdResult best;
    best.search_bound = search_bound;
    best.resolution = step;
    best.exhaustive = mode == LcdMultiMode::exhaustive;
    Vector best_u;
    for (const auto& u : dirs) {
        Vector y = problem.along(u);
        double y_norm = y.norm();
        if (y_norm == 0.0) continue;
        double cap = best.found ? best.value : search_bound;
        LcdResult r = scan_ray(y, y_norm, params, cap, step);
        if (r.found && r.value < (best.found ? best.value : search_bound + 1.0)) {
            best.value = r.value;
            best.found = true;
            best.witness_theta = r.value;
            best_u = u;
        }
    }

    if (best.found) {
        double fine = std::min(step, 1e-5 * search_bound);
        refine_direction(problem, params, fine, best_u, best.value, best.witness_theta);
        best.witness_theta = best.value;
        best.witness_vector = best.value * best_u;
    }
    return best;
}

LcdResult lcd_subspace(const Matrix& basis, const LcdParams& params, double search_bound,
                       Index sample_count) {
    validate_params(params);
    const Index k = basis.rows();
    const Index n = basis.cols();
    if (k < 1) throw std::invalid_argument("lcd_subspace: empty basis");
    if (sample_count < 1) throw std::invalid_argument("lcd_subspace: need sample_count >= 1");
    Matrix gram = basis * basis.transpose();
    if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("lcd_subspace: basis rows must be orthonormal");

    if (k == 1) {
        LcdResult r = lcd(basis.row(0), params, search_bound);
        r.witness_vector = Vector::Constant(1, 1.0);
        return r;
    }

    RayProblem problem;
    problem.coeffs = basis;

    const double coarse = 1e-4 * search_bound;
    CounterRng rng(0x73756273ULL, (static_cast<std::uint64_t>(k) << 32) ^
                                      static_cast<std::uint64_t>(n) ^
                                      static_cast<std::uint64_t>(sample_count));

    LcdResult best;
    best.search_bound = search_bound;
    best.resolution = coarse;
    best.exhaustive = false;  // an upper estimate of the infimum over H
    Vector best_u;
    for (Index i = 0; i < sample_count + k; ++i) {
        Vector u(k);
        if (i < k) {
            u = Vector::Unit(k, i);
        } else {
            for (Index j = 0; j < k; ++j)
                u(j) = rng.normal_at(static_cast<std::uint64_t>(i) * k + j);
            double nn = u.norm();
            if (nn == 0.0) continue;
            u /= nn;
        }
        Vector y = problem.along(u);
        double cap = best.found ? best.value : search_bound;
        LcdResult r = scan_ray(y, y.norm(), params, cap, coarse);
        if (r.found && (!best.found || r.value < best.value)) {
            best.value = r.value;
            best.found = true;
            best_u = u;
        }
    }

    if (best.found) {
        double fine = 1e-5 * search_bound;
        refine_direction(problem, params, fine, best_u, best.value, best.witness_theta);
        best.witness_theta = best.value;
        best.witness_vector = best_u;
        best.resolution = fine;
    }
    return best;
}

CompressibilityReport classify_compressibility(const Vector& x_in, double c0, double c1) {
    if (!(c0 > 0.0 && c0 < 1.0) || !(c1 > 0.0 && c1 < 1.0))
        throw std::invalid_argument("classify_compressibility: c0, c1 must be in (0,1)");
    double norm = x_in.norm();
    if (norm == 0.0) throw std::invalid_argument("classify_compressibility: zero vector");
    Vector x = x_in / norm;
    const Index n = x.size();

    Vector mags = x.cwiseAbs();
    std::vector<double> sorted(mags.data(), mags.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    auto keep = static_cast<Index>(std::ceil(c0 * static_cast<double>(n)));

    double tail2 = 0.0;
    for (Index i = keep; i < n; ++i) tail2 += sorted[i] * sorted[i];

    CompressibilityReport out;
    out.c0 = c0;
    out.c1 = c1;
    out.sparse_distance = std::sqrt(tail2);
    out.compressible = out.sparse_distance <= c1;
    double lo = c1 / std::sqrt(2.0 * static_cast<double>(n));
    double hi = 1.0 / std::sqrt(c0 * static_cast<double>(n));
    for (Index kk = 0; kk < n; ++kk)
        if (mags(kk) >= lo && mags(kk) <= hi) out.spread_set.push_back(kk);
    return out;
}

namespace {

std::vector<std::vector<Index>> all_subsets(const std::vector<Index>& pool, Index k) {
    std::vector<std::vector<Index>> out;
    std::vector<Index> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    const Index n = static_cast<Index>(pool.size());
    while (true) {
        std::vector<Index> subset(k);
        for (Index i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        out.push_back(std::move(subset));
        Index i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<std::vector<Index>> sampled_subsets(const std::vector<Index>& pool, Index k,
                                                Index count) {
    std::vector<std::vector<Index>> out;
    CounterRng rng(0x737562736574ULL, static_cast<std::uint64_t>(pool.size()) << 32 |
                                          static_cast<std::uint64_t>(k));
    std::uint64_t ctr = 0;
    for (Index s = 0; s < count; ++s) {
        std::vector<Index> copy = pool;
        // partial Fisher-Yates
        for (Index i = 0; i < k; ++i) {
            auto j = i + static_cast<Index>(rng.bits_at(ctr++) %
                                            static_cast<std::uint64_t>(copy.size() - i));
            std::swap(copy[i], copy[j]);
        }
        std::vector<Index> subset(copy.begin(), copy.begin() + k);
        std::sort(subset.begin(), subset.end());
        out.push_back(std::move(subset));
    }
    return out;
}

}  // namespace

RegularizedLcdResult regularized_lcd(const Vector& x_in, double lambda, const LcdParams& params,
                                     double c0, double c1, double search_bound, SubsetSearch mode,
                                     double grid_step) {
    validate_params(params);
    CompressibilityReport report = classify_compressibility(x_in, c0, c1);
    if (report.compressible)
        throw std::invalid_argument("regularized_lcd: input vector is compressible");
    double c_star = c0 * c1 * c1 / 2.0;
    if (!(lambda > 0.0 && lambda < c_star))
        throw std::invalid_argument("regularized_lcd: lambda out of (0, c*)");

    Vector x = x_in / x_in.norm();
    const Index n = x.size();
    auto subset_size = static_cast<Index>(std::ceil(lambda * static_cast<double>(n)));
    const auto& spread = report.spread_set;
    if (subset_size > static_cast<Index>(spread.size()))
        throw std::invalid_argument("regularized_lcd: ceil(lambda N) exceeds |spread(x)|");

    bool exhaustive;
    switch (mode) {
        case SubsetSearch::exhaustive:
            if (spread.size() > 20)
                throw std::invalid_argument("regularized_lcd: spread too large for exhaustive mode");
            exhaustive = true;
            break;
        case SubsetSearch::sampled:
            exhaustive = false;
            break;
        case SubsetSearch::automatic:
        default:
            exhaustive = spread.size() <= 20;
            break;
    }
    auto subsets = exhaustive ? all_subsets(spread, subset_size)
                              : sampled_subsets(spread, subset_size, 200);

    double step = grid_step > 0.0 ? grid_step : 1e-4 * search_bound;

    RegularizedLcdResult out;
    out.exhaustive = exhaustive;
    bool have = false;
    for (const auto& subset : subsets) {
        Vector xi(subset_size);
        for (Index i = 0; i < subset_size; ++i) xi(i) = x(subset[i]);
        xi /= xi.norm();
        LcdResult r = lcd(xi, params, search_bound, step);
        double v = r.found ? r.value : std::numeric_limits<double>::infinity();
        double cur = out.result.found ? out.result.value
                                      : (have ? std::numeric_limits<double>::infinity() : -1.0);
        if (!have || v > cur) {
            out.result = r;
            out.chosen = subset;
            have = true;
            if (!r.found) break;  // the max is already above the search bound
        }
    }
    out.result.exhaustive = exhaustive;
    return out;
}

SmallBallEstimate levy_concentration(const Vector& x, EnsembleKind kind, double radius,
                                     SmallBallMethod method, Index mc_trials, std::uint64_t seed) {
    if (radius < 0.0) throw std::invalid_argument("levy_concentration: radius must be >= 0");
    const Index n = x.size();
    if (n < 1) throw std::invalid_argument("levy_concentration: empty weight vector");

    std::vector<double> sums;
    SmallBallEstimate out;
    out.radius = radius;
    out.method = method;

    if (method == SmallBallMethod::exact_enumeration) {
        if (kind != EnsembleKind::rademacher)
            throw std::invalid_argument("levy_concentration: exact mode requires rademacher");
        if (n > 20)
            throw std::invalid_argument("levy_concentration: exact mode requires N <= 20");
        const std::uint64_t total = 1ULL << n;
        sums.resize(total);
        double s = -x.sum();  // all signs -1
        sums[0] = s;
        for (std::uint64_t i = 1; i < total; ++i) {
            int bit = std::countr_zero(i);
            std::uint64_t gray = i ^ (i >> 1);
            s += ((gray >> bit) & 1ULL) ? 2.0 * x(bit) : -2.0 * x(bit);
            sums[i] = s;
        }
    } else {
        if (mc_trials < 1) throw std::invalid_argument("levy_concentration: mc_trials must be >= 1");
        EnsembleSpec spec;
        spec.kind = kind;
        sums.resize(static_cast<std::size_t>(mc_trials));
        for (Index t = 0; t < mc_trials; ++t) {
            MatrixSample row = sample_iid(1, n, spec, seed, t);
            sums[static_cast<std::size_t>(t)] = row.entries.row(0).dot(x);
        }
    }

    std::sort(sums.begin(), sums.end());
    // Sliding window of width 2r over the sorted sums: the exact maximizer of
    // the empirical measure over all centers u.
    std::size_t best = 0, lo = 0;
    for (std::size_t hi = 0; hi < sums.size(); ++hi) {
        while (sums[hi] - sums[lo] > 2.0 * radius) ++lo;
        best = std::max(best, hi - lo + 1);
    }
    out.estimate = static_cast<double>(best) / static_cast<double>(sums.size());
    if (method == SmallBallMethod::monte_carlo)
        out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) /
                                  static_cast<double>(sums.size()));
    return out;
}

double small_ball_bound_1d(double eps, const LcdParams& params, double c0_constant) {
    validate_params(params);
    if (eps < 0.0) throw std::invalid_argument("small_ball_bound_1d: eps must be >= 0");
    return c0_constant * (eps / params.gamma + std::exp(-2.0 * params.alpha * params.alpha));
}

double small_ball_bound_multi(double lcd_value, int m, double eps, const LcdParams& params,
                              double b, double c_constant) {
    validate_params(params);
    if (m < 1) throw std::invalid_argument("small_ball_bound_multi: m must be >= 1");
    if (!(b > 0.0)) throw std::invalid_argument("small_ball_bound_multi: b must be positive");
    if (eps < std::sqrt(static_cast<double>(m)) / lcd_value)
        throw NotApplicableError("small_ball_bound_multi: eps below sqrt(m)/LCD threshold");
    double md = static_cast<double>(m);
    return std::pow(c_constant * eps / (params.gamma * std::sqrt(b)), md) +
           std::pow(c_constant, md) * std::exp(-2.0 * b * params.alpha * params.alpha);
}

}  // namespace wigner
