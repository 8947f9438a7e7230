#include "wigner/experiments.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wigner/linalg.hpp"

namespace wigner {

namespace {

// Runs fn(t) for t in [0, trials) on `workers` threads. Each trial writes only
// its own slot, so results are identical for every worker count.
template <typename Fn>
void parallel_for_trials(Index trials, int workers, Fn&& fn) {
    workers = std::clamp(workers, 1, 256);
    if (workers == 1 || trials <= 1) {
        for (Index t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            Index t = next.fetch_add(1);
            if (t >= trials) break;
            try {
                fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers - 1; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void validate_common(const ExperimentConfig& config, bool needs_rows) {
    if (config.size() < 1) throw std::invalid_argument("experiment: N must be >= 1");
    if (config.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (needs_rows && (config.n < 1 || config.n > config.size() - 1))
        throw std::invalid_argument("experiment: need 1 <= n <= N-1");
}

std::vector<double> adjusted_log_probs(const TailCurve& curve) {
    std::vector<double> out;
    out.reserve(curve.points.size());
    for (const auto& pt : curve.points) {
        double p = (static_cast<double>(pt.exceed_count) + 0.5) /
                   (static_cast<double>(curve.trials) + 1.0);
        out.push_back(std::log(p));
    }
    return out;
}

TailCurve tail_curve(const std::vector<double>& grid, const std::vector<double>& stats,
                     Index trials, bool exceed_above) {
    TailCurve curve;
    curve.trials = trials;
    for (double t : grid) {
        TailPoint pt;
        pt.t = t;
        for (double s : stats)
            if (exceed_above ? s >= t : s <= t) ++pt.exceed_count;
        pt.probability = trials > 0
                             ? static_cast<double>(pt.exceed_count) / static_cast<double>(trials)
                             : 0.0;
        WilsonInterval wi = wilson_interval(pt.exceed_count, trials);
        pt.wilson_lo = wi.lo;
        pt.wilson_hi = wi.hi;
        pt.wilson_halfwidth = wi.halfwidth;
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace

WilsonInterval wilson_interval(Index successes, Index trials, double z) {
    WilsonInterval out;
    if (trials <= 0) return out;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double hw = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    out.lo = std::max(0.0, center - hw);
    out.hi = std::min(1.0, center + hw);
    out.halfwidth = hw;
    return out;
}

HistogramSummary build_histogram(const std::vector<double>& values, Index bins) {
    if (bins < 1) throw std::invalid_argument("build_histogram: bins must be >= 1");
    HistogramSummary out;
    out.counts.assign(static_cast<std::size_t>(bins), 0);
    out.total = static_cast<Index>(values.size());
    if (values.empty()) return out;

    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    out.lo = *mn;
    out.hi = *mx;
    if (out.lo == out.hi) {
        out.lo -= 0.5;
        out.hi += 0.5;
    }
    double width = (out.hi - out.lo) / static_cast<double>(bins);
    double sum = 0.0, sum2 = 0.0;
    for (double v : values) {
        auto b = static_cast<Index>((v - out.lo) / width);
        b = std::clamp<Index>(b, 0, bins - 1);
        ++out.counts[static_cast<std::size_t>(b)];
        sum += v;
    }
    out.mean = sum / static_cast<double>(values.size());
    for (double v : values) sum2 += (v - out.mean) * (v - out.mean);
    out.variance = values.size() > 1 ? sum2 / static_cast<double>(values.size() - 1) : 0.0;
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

bool is_unimodal(const std::vector<Index>& counts, int smooth_window) {
    if (counts.empty()) return false;
    const int n = static_cast<int>(counts.size());
    std::vector<double> smooth(counts.size());
    int half = std::max(0, smooth_window / 2);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        int cnt = 0;
        for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j) {
            acc += static_cast<double>(counts[static_cast<std::size_t>(j)]);
            ++cnt;
        }
        smooth[static_cast<std::size_t>(i)] = acc / cnt;
    }
    int peak = static_cast<int>(std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
    double tol = 0.02 * smooth[static_cast<std::size_t>(peak)];
    for (int i = 0; i < peak; ++i)
        if (smooth[static_cast<std::size_t>(i)] > smooth[static_cast<std::size_t>(i + 1)] + tol)
            return false;
    for (int i = peak; i + 1 < n; ++i)
        if (smooth[static_cast<std::size_t>(i + 1)] > smooth[static_cast<std::size_t>(i)] + tol)
            return false;
    return true;
}

double inverse_entry_ratio(const Matrix& a_inverse) {
    double hs = a_inverse.norm();
    if (hs == 0.0) throw std::invalid_argument("inverse_entry_ratio: zero matrix");
    return a_inverse.cwiseAbs().maxCoeff() / hs;
}

int exit_code_for_degeneracy(Index degenerate, Index total) {
    return (total > 0 && 2 * degenerate > total) ? 2 : 0;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

DistanceHistResult run_distance_experiment(const ExperimentConfig& config) {
    validate_common(config, true);
    if (!config.ensemble.symmetric)
        throw std::invalid_argument("run_distance_experiment: symmetric ensemble required");

    DistanceHistResult out;
    out.config = config;
    out.records.resize(static_cast<std::size_t>(config.trials));
    const double m = static_cast<double>(config.m());

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        TrialRecord rec;
        rec.trial_index = t;
        try {
            MatrixSample a = sample_wigner(config.ensemble, config.master_seed, t);
            Vector x = a.entries.row(0);
            Matrix b = a.entries.middleRows(1, config.n);
            rec.dist = distance_to_rowspace(x, b, DistanceMethod::gram);
            rec.normalized = (rec.dist * rec.dist - m) / std::sqrt(m);
            if (config.with_sigma_min) rec.sigma_min = least_singular_value(b);
            if (config.with_decomposition) {
                rec.decomposition = decompose_distance(a.entries, config.n);
                rec.has_decomposition = true;
            }
        } catch (const DegeneracyError&) {
            rec.degenerate = true;
        }
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> normalized;
    Index lower_tail = 0;
    for (const auto& rec : out.records) {
        if (rec.degenerate) {
            ++out.degenerate_count;
            continue;
        }
        normalized.push_back(rec.normalized);
        if (rec.dist <= std::sqrt(m) - 3.0) ++lower_tail;
    }
    out.histogram = build_histogram(normalized, config.histogram_bins);
    out.mean_normalized = out.histogram.mean;
    out.var_normalized = out.histogram.variance;
    out.lower_tail_p3 = normalized.empty()
                            ? 0.0
                            : static_cast<double>(lower_tail) / static_cast<double>(normalized.size());
    return out;
}

IndependentTailResult run_independent_distance_experiment(const ExperimentConfig& config) {
    validate_common(config, true);

    IndependentTailResult out;
    out.config = config;
    out.records.resize(static_cast<std::size_t>(config.trials));
    const double sqrt_m = std::sqrt(static_cast<double>(config.m()));
    EnsembleSpec iid_spec = config.ensemble;
    iid_spec.symmetric = false;
    if (iid_spec.kind == EnsembleKind::goe) iid_spec.kind = EnsembleKind::standard_gaussian;

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        ScalarTrialRecord rec;
        rec.trial_index = t;
        try {
            // One iid (n+1) x N sample per trial: row 0 is x, the rest is B.
            MatrixSample s = sample_iid(config.n + 1, config.size(), iid_spec, config.master_seed, t);
            Vector x = s.entries.row(0);
            Matrix b = s.entries.middleRows(1, config.n);
            rec.value = distance_to_rowspace(x, b, DistanceMethod::gram);
            rec.scaled = rec.value - sqrt_m;
        } catch (const DegeneracyError&) {
            rec.degenerate = true;
        }
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> deviations;
    for (const auto& rec : out.records) {
        if (rec.degenerate) {
            ++out.degenerate_count;
            continue;
        }
        deviations.push_back(std::abs(rec.scaled));
    }
    out.curve = tail_curve(config.t_grid, deviations, static_cast<Index>(deviations.size()), true);
    if (out.curve.points.size() >= 2) {
        std::vector<double> xs;
        for (const auto& pt : out.curve.points) xs.push_back(pt.t * pt.t);
        LineFit fit = fit_line(xs, adjusted_log_probs(out.curve));
        out.curve.fitted_slope = fit.slope;
        out.curve.fitted_rate = fit.slope < 0 ? -1.0 / fit.slope
                                              : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

SvTailResult run_sv_tail_experiment(const ExperimentConfig& config, SvTailMode mode,
                                    const std::vector<double>& eps_grid) {
    validate_common(config, mode == SvTailMode::rectangular);
    if (!config.ensemble.symmetric)
        throw std::invalid_argument("run_sv_tail_experiment: symmetric ensemble required");

    SvTailResult out;
    out.config = config;
    out.mode = mode;
    out.eps_grid = eps_grid;
    const double n_dim = static_cast<double>(config.size());
    out.scale = mode == SvTailMode::square
                    ? 1.0 / std::sqrt(n_dim)
                    : static_cast<double>(config.m()) / std::sqrt(n_dim);
    out.records.resize(static_cast<std::size_t>(config.trials));

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        ScalarTrialRecord rec;
        rec.trial_index = t;
        MatrixSample a = sample_wigner(config.ensemble, config.master_seed, t);
        if (mode == SvTailMode::square) {
            rec.value = least_singular_value(a.entries);
        } else {
            rec.value = least_singular_value(a.entries.topRows(config.n));
        }
        rec.scaled = rec.value / out.scale;
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> scaled;
    for (const auto& rec : out.records) scaled.push_back(rec.scaled);
    out.median_scaled = median_of(scaled);
    out.curve = tail_curve(eps_grid, scaled, config.trials, false);
    if (out.curve.points.size() >= 2) {
        std::vector<double> xs;
        for (const auto& pt : out.curve.points) xs.push_back(std::log(pt.t));
        LineFit fit = fit_line(xs, adjusted_log_probs(out.curve));
        out.curve.fitted_slope = fit.slope;
        out.curve.fitted_rate = fit.slope;  // tail exponent in P ~ eps^rate
    }
    return out;
}

HansonWrightResult run_hanson_wright_check(const ExperimentConfig& config, HwMatrixKind kind) {
    validate_common(config, false);

    HansonWrightResult out;
    out.config = config;
    out.matrix_kind = kind;
    const Index m_dim = config.size();
    EnsembleSpec iid_spec = config.ensemble;
    iid_spec.symmetric = false;
    if (iid_spec.kind == EnsembleKind::goe) iid_spec.kind = EnsembleKind::standard_gaussian;

    // Fixed test matrix drawn from a reserved stream (trial index -1).
    Matrix a;
    switch (kind) {
        case HwMatrixKind::identity:
            a = Matrix::Identity(m_dim, m_dim);
            break;
        case HwMatrixKind::projection: {
            Index rank = std::max<Index>(1, m_dim / 2);
            Matrix g = sample_iid(m_dim, rank, iid_spec, config.master_seed, -1).entries;
            Eigen::HouseholderQR<Matrix> qr(g);
            Matrix q = qr.householderQ() * Matrix::Identity(m_dim, rank);
            a = q * q.transpose();
            break;
        }
        case HwMatrixKind::spd: {
            Matrix g = sample_iid(m_dim, m_dim, iid_spec, config.master_seed, -1).entries;
            a = g * g.transpose() / static_cast<double>(m_dim);
            break;
        }
        case HwMatrixKind::zero:
            a = Matrix::Zero(m_dim, m_dim);
            break;
    }

    const double trace = a.trace();
    const double hs = a.norm();
    const double op = hs == 0.0 ? 0.0 : op_norm(a);
    out.records.resize(static_cast<std::size_t>(config.trials));

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        HwTrialRecord rec;
        rec.trial_index = t;
        Vector x = sample_iid(1, m_dim, iid_spec, config.master_seed, t).entries.row(0);
        double quad = x.dot(a * x);
        rec.quad_stat = hs == 0.0 ? 0.0 : std::abs(quad - trace) / hs;
        rec.norm_stat = op == 0.0 ? 0.0 : std::abs((a * x).norm() - hs) / op;
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> quad_stats, norm_stats;
    for (const auto& rec : out.records) {
        quad_stats.push_back(rec.quad_stat);
        norm_stats.push_back(rec.norm_stat);
    }
    out.quad_curve = tail_curve(config.t_grid, quad_stats, config.trials, true);
    out.norm_curve = tail_curve(config.t_grid, norm_stats, config.trials, true);
    if (config.t_grid.size() >= 2) {
        std::vector<double> xs_t(config.t_grid), xs_t2;
        for (double t : config.t_grid) xs_t2.push_back(t * t);
        LineFit quad_fit = fit_line(xs_t, adjusted_log_probs(out.quad_curve));
        out.quad_curve.fitted_slope = quad_fit.slope;
        out.quad_curve.fitted_rate = -quad_fit.slope;
        LineFit norm_fit = fit_line(xs_t2, adjusted_log_probs(out.norm_curve));
        out.norm_curve.fitted_slope = norm_fit.slope;
        out.norm_curve.fitted_rate = -norm_fit.slope;
    }
    return out;
}

DelocalizationResult run_delocalization_experiment(const ExperimentConfig& config) {
    validate_common(config, false);
    if (!config.ensemble.symmetric)
        throw std::invalid_argument("run_delocalization_experiment: symmetric ensemble required");
    const Index n_dim = config.size();
    if (n_dim < 2) throw std::invalid_argument("run_delocalization_experiment: N must be >= 2");

    DelocalizationResult out;
    out.config = config;
    out.records.resize(static_cast<std::size_t>(config.trials));
    const double norm_factor =
        std::sqrt(static_cast<double>(n_dim)) / std::pow(std::log(static_cast<double>(n_dim)), 1.5);

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        ScalarTrialRecord rec;
        rec.trial_index = t;
        MatrixSample a = sample_wigner(config.ensemble, config.master_seed, t);
        Matrix b = a.entries.bottomRows(n_dim - 1);
        // Unit normal vector of span(rows 2..N): the right singular vector of
        // the smallest singular value.
        Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s(0) == 0.0 || s(s.size() - 1) / s(0) < kRankTolerance) {
            rec.degenerate = true;  // kernel dimension exceeds 1
        } else {
            Vector x = svd.matrixV().col(n_dim - 1);
            rec.value = x.cwiseAbs().maxCoeff();
            rec.scaled = rec.value * norm_factor;
        }
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> stats;
    for (const auto& rec : out.records) {
        if (rec.degenerate) {
            ++out.degenerate_count;
            continue;
        }
        stats.push_back(rec.scaled);
    }
    if (!stats.empty()) {
        out.max_statistic = *std::max_element(stats.begin(), stats.end());
        out.median_statistic = median_of(stats);
    }
    return out;
}

InverseEntryResult run_inverse_entry_experiment(const ExperimentConfig& config) {
    validate_common(config, false);
    if (!config.ensemble.symmetric)
        throw std::invalid_argument("run_inverse_entry_experiment: symmetric ensemble required");
    const Index n_dim = config.size();

    InverseEntryResult out;
    out.config = config;
    out.records.resize(static_cast<std::size_t>(config.trials));
    const double log3 = std::pow(std::log(static_cast<double>(n_dim)), 3.0);

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        ScalarTrialRecord rec;
        rec.trial_index = t;
        MatrixSample a = sample_wigner(config.ensemble, config.master_seed, t);
        Eigen::PartialPivLU<Matrix> lu(a.entries);
        if (lu.rcond() < 1e-14) {
            rec.degenerate = true;
        } else {
            Matrix inv = lu.inverse();
            rec.value = inverse_entry_ratio(inv);
            rec.scaled = rec.value * static_cast<double>(n_dim) / log3;
        }
        out.records[static_cast<std::size_t>(t)] = rec;
    });

    std::vector<double> ratios, scaled;
    for (const auto& rec : out.records) {
        if (rec.degenerate) {
            ++out.degenerate_count;
            continue;
        }
        ratios.push_back(rec.value);
        scaled.push_back(rec.scaled);
    }
    if (!ratios.empty()) {
        out.max_ratio = *std::max_element(ratios.begin(), ratios.end());
        out.median_scaled = median_of(scaled);
    }
    return out;
}

IntervalCountResult run_interval_count_experiment(const ExperimentConfig& config, double lo,
                                                  double hi, Index intervals) {
    validate_common(config, false);
    if (!(lo < hi) || intervals < 1)
        throw std::invalid_argument("run_interval_count_experiment: bad interval partition");
    if (!config.ensemble.symmetric)
        throw std::invalid_argument("run_interval_count_experiment: symmetric ensemble required");

    IntervalCountResult out;
    out.config = config;
    out.lo = lo;
    out.hi = hi;
    out.intervals = intervals;
    out.trials.resize(static_cast<std::size_t>(config.trials));
    const double width = (hi - lo) / static_cast<double>(intervals);

    parallel_for_trials(config.trials, config.workers, [&](Index t) {
        IntervalCountTrial trial;
        trial.trial_index = t;
        MatrixSample a = sample_wigner(config.ensemble, config.master_seed, t);
        Index within = 0;
        for (Index k = 0; k < intervals; ++k) {
            double a_lo = lo + width * static_cast<double>(k);
            double a_hi = k + 1 == intervals ? hi : lo + width * static_cast<double>(k + 1);
            IntervalCount count =
                count_singular_values(a.entries, a_lo, a_hi, SvNormalization::by_sqrt_n);
            if (std::abs(static_cast<double>(count.observed) - count.predicted) <=
                0.1 * count.predicted)
                ++within;
            trial.counts.push_back(count);
        }
        trial.within_fraction = static_cast<double>(within) / static_cast<double>(intervals);
        out.trials[static_cast<std::size_t>(t)] = trial;
    });
    return out;
}

IdentitySuiteResult run_identity_suite(const IdentitySuiteConfig& config) {
    IdentitySuiteResult out;
    out.config = config;
    if (config.instances == 0) {
        out.vacuous = true;
        return out;
    }
    out.records.resize(static_cast<std::size_t>(config.instances));

    EnsembleSpec spec;
    spec.kind = EnsembleKind::standard_gaussian;
    spec.symmetric = true;

    parallel_for_trials(config.instances, config.workers, [&](Index i) {
        IdentityInstanceRecord rec;
        rec.instance = i;
        // Deterministic sweep over N in [10, 60] and m in {2, N/4, N/2}.
        const Index n_dim = 10 + (i * 7) % 51;
        Index m;
        switch (i % 3) {
            case 0: m = 2; break;
            case 1: m = (n_dim + 3) / 4; break;
            default: m = (n_dim + 1) / 2; break;
        }
        rec.size = n_dim;
        rec.m = m;
        const Index n_rows = n_dim - m;

        EnsembleSpec inst = spec;
        inst.dimension = n_dim;
        try {
            Matrix a = sample_wigner(inst, config.master_seed, i).entries;
            Vector x = a.row(0);
            Matrix b = a.middleRows(1, n_rows);
            Matrix p = b.rightCols(n_dim - 1);
            Vector x1 = x.tail(n_dim - 1);

            // distance split vs the direct projector formula for dist^2
            DistanceDecomposition dec = decompose_distance(a, n_rows);
            if (config.fault == FaultInjection::perturb_decomposition) {
                dec.truncated_term += 1e-4;
                dec.total = dec.truncated_term + dec.error_term();
            }
            Matrix proj = projector_onto_complement(b).projector;
            double direct = x.dot(proj * x);
            rec.decomposition_err = relative_error(dec.total, direct);

            double trunc_oracle =
                distance_to_rowspace(x1, p, DistanceMethod::orthogonalization);
            rec.truncated_err =
                relative_error(dec.truncated_term, trunc_oracle * trunc_oracle);

            // Rank-one inverse update: (BB^T)^{-1} from (PP^T)^{-1} and z.
            Vector z = b.col(0);
            Matrix pp_inv = (p * p.transpose()).llt().solve(Matrix::Identity(n_rows, n_rows));
            Matrix bb_inv_direct =
                (b * b.transpose()).llt().solve(Matrix::Identity(n_rows, n_rows));
            rec.rank_one_err =
                relative_error(rank_one_inverse_update(pp_inv, z), bb_inv_direct);

            // Schur block inverse of the SPD Gram matrix split 2 + (n-2).
            if (n_rows >= 3) {
                Matrix gram = b * b.transpose();
                Matrix split = schur_block_inverse(gram.topLeftCorner(2, 2),
                                                   gram.topRightCorner(2, n_rows - 2),
                                                   gram.bottomRightCorner(n_rows - 2, n_rows - 2));
                rec.schur_err = relative_error(split, bb_inv_direct);
            }

            // (QQ^T)^{-1} block formula with Q = P.
            Matrix qq = qq_inverse_via_schur(p.row(0), p.bottomRows(n_rows - 1));
            rec.qq_err = relative_error(qq, pp_inv);

            // Diagonal-entry formula vs the direct product.
            Matrix w = pp_inv * p;
            std::vector<Index> picks;
            if (n_rows <= 12)
                for (Index k = 0; k < n_rows; ++k) picks.push_back(k);
            else
                picks = {0, n_rows / 2, n_rows - 1};
            for (Index k : picks) {
                DiagonalEntryBreakdown entry = diagonal_entry_formula(p, k);
                rec.diagonal_err =
                    std::max(rec.diagonal_err, relative_error(entry.value, w(k, k)));
            }

            // trace identity under row/column removal and the E-term split bound
            TraceComparison cmp = trace_comparison(p, 0);
            rec.trace_residual = cmp.identity_residual / std::max(1.0, std::abs(cmp.diag_sum_reduced));
            rec.e_split_ok =
                std::abs(cmp.correction) <= cmp.e1 + cmp.e2 + cmp.e3 + cmp.e4 + 1e-8;

            rec.ok = rec.decomposition_err <= 1e-8 && rec.truncated_err <= 1e-8 &&
                     rec.rank_one_err <= 1e-10 && rec.schur_err <= 1e-10 &&
                     rec.qq_err <= 1e-8 && rec.diagonal_err <= 1e-8 &&
                     rec.trace_residual <= 1e-8 && rec.e_split_ok;
        } catch (const DegeneracyError&) {
            rec.skipped_degenerate = true;
        }
        out.records[static_cast<std::size_t>(i)] = rec;
    });

    for (const auto& rec : out.records) {
        if (rec.skipped_degenerate) {
            ++out.degenerate_skips;
            continue;
        }
        if (!rec.ok) {
            ++out.violations;
            if (out.first_offending_instance < 0) out.first_offending_instance = rec.instance;
        }
    }
    return out;
}

}  // namespace wigner
