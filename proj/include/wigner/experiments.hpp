#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wigner/ensembles.hpp"
#include "wigner/identities.hpp"
#include "wigner/spectral.hpp"
#include "wigner/types.hpp"

namespace wigner {

/// Shared knobs for the Monte-Carlo experiments. The ensemble's dimension is
/// the matrix size N; m = N - n.
struct ExperimentConfig {
    EnsembleSpec ensemble;
    Index n = 0;  // subspace rows
    Index trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<double> t_grid;
    int workers = 1;
    Index histogram_bins = 40;
    bool with_decomposition = false;
    bool with_sigma_min = false;

    Index size() const { return ensemble.dimension; }
    Index m() const { return ensemble.dimension - n; }
};

struct TrialRecord {
    Index trial_index = 0;
    double dist = std::numeric_limits<double>::quiet_NaN();
    double normalized = std::numeric_limits<double>::quiet_NaN();  // (dist^2 - m)/sqrt(m)
    double sigma_min = std::numeric_limits<double>::quiet_NaN();
    bool has_decomposition = false;
    DistanceDecomposition decomposition;
    bool degenerate = false;
};

struct ScalarTrialRecord {
    Index trial_index = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    double scaled = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
};

struct HwTrialRecord {
    Index trial_index = 0;
    double quad_stat = std::numeric_limits<double>::quiet_NaN();
    double norm_stat = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
};

struct HistogramSummary {
    double lo = 0.0, hi = 0.0;
    std::vector<Index> counts;
    Index total = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double variance = std::numeric_limits<double>::quiet_NaN();
};

struct WilsonInterval {
    double lo = 0.0, hi = 1.0, halfwidth = 0.5;
};

struct TailPoint {
    double t = 0.0;
    Index exceed_count = 0;
    double probability = 0.0;
    double wilson_lo = 0.0, wilson_hi = 1.0, wilson_halfwidth = 0.5;
};

/// Empirical exceedance curve; nonincreasing in t by construction. The fit is
/// least squares of log p against the experiment's abscissa (t, t^2, or
/// log eps), with the continuity adjustment (k + 1/2)/(trials + 1) so zero
/// counts stay finite.
struct TailCurve {
    std::vector<TailPoint> points;
    Index trials = 0;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();
};

struct DistanceHistResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    HistogramSummary histogram;  // of the normalized statistic over clean trials
    Index degenerate_count = 0;
    double mean_normalized = std::numeric_limits<double>::quiet_NaN();
    double var_normalized = std::numeric_limits<double>::quiet_NaN();
    double lower_tail_p3 = 0.0;  // P(dist <= sqrt(m) - 3)
};

struct IndependentTailResult {
    ExperimentConfig config;
    std::vector<ScalarTrialRecord> records;  // value = dist, scaled = dist - sqrt(m)
    TailCurve curve;                         // P(|dist - sqrt m| >= t); fit vs t^2; rate = K
    Index degenerate_count = 0;
};

enum class SvTailMode { square, rectangular };

struct SvTailResult {
    ExperimentConfig config;
    SvTailMode mode = SvTailMode::square;
    double scale = 0.0;  // N^{-1/2} (square) or m N^{-1/2} (rectangular)
    std::vector<double> eps_grid;
    std::vector<ScalarTrialRecord> records;  // value = sigma_min, scaled = value/scale
    TailCurve curve;                         // P(sigma_min <= eps scale); fit vs log eps
    double median_scaled = std::numeric_limits<double>::quiet_NaN();
    Index degenerate_count = 0;
};

enum class HwMatrixKind { identity, projection, spd, zero };

struct HansonWrightResult {
    ExperimentConfig config;
    HwMatrixKind matrix_kind = HwMatrixKind::identity;
    std::vector<HwTrialRecord> records;
    TailCurve quad_curve;  // P(|x^T A x - tr A| > t ||A||_HS); fit vs t; rate = C
    TailCurve norm_curve;  // P(| ||Ax|| - ||A||_HS | > t ||A||_2); fit vs t^2; rate = C
    Index degenerate_count = 0;
};

struct DelocalizationResult {
    ExperimentConfig config;
    std::vector<ScalarTrialRecord> records;  // value = linf, scaled = linf sqrt(N)/log^1.5 N
    double max_statistic = std::numeric_limits<double>::quiet_NaN();
    double median_statistic = std::numeric_limits<double>::quiet_NaN();
    Index degenerate_count = 0;
};

struct InverseEntryResult {
    ExperimentConfig config;
    std::vector<ScalarTrialRecord> records;  // value = ratio, scaled = ratio N/log^3 N
    double max_ratio = std::numeric_limits<double>::quiet_NaN();
    double median_scaled = std::numeric_limits<double>::quiet_NaN();
    Index degenerate_count = 0;
};

struct IntervalCountTrial {
    Index trial_index = 0;
    std::vector<IntervalCount> counts;
    double within_fraction = 0.0;  // fraction of intervals within 10% of prediction
};

struct IntervalCountResult {
    ExperimentConfig config;
    double lo = 0.0, hi = 0.0;
    Index intervals = 0;
    std::vector<IntervalCountTrial> trials;
};

enum class FaultInjection { none, perturb_decomposition };

struct IdentitySuiteConfig {
    Index instances = 200;
    std::uint64_t master_seed = 0;
    int workers = 1;
    FaultInjection fault = FaultInjection::none;
};

struct IdentityInstanceRecord {
    Index instance = 0;
    Index size = 0;   // N
    Index m = 0;
    double decomposition_err = 0.0;  // Lemma split total vs direct projector distance
    double truncated_err = 0.0;      // truncated term vs orthogonalization oracle
    double rank_one_err = 0.0;
    double schur_err = 0.0;
    double qq_err = 0.0;
    double diagonal_err = 0.0;
    double trace_residual = 0.0;
    bool e_split_ok = true;
    bool skipped_degenerate = false;
    bool ok = true;
};

struct IdentitySuiteResult {
    IdentitySuiteConfig config;
    std::vector<IdentityInstanceRecord> records;
    Index violations = 0;
    Index degenerate_skips = 0;
    bool vacuous = false;  // zero instances requested
    Index first_offending_instance = -1;
};

DistanceHistResult run_distance_experiment(const ExperimentConfig& config);
IndependentTailResult run_independent_distance_experiment(const ExperimentConfig& config);
SvTailResult run_sv_tail_experiment(const ExperimentConfig& config, SvTailMode mode,
                                    const std::vector<double>& eps_grid);
HansonWrightResult run_hanson_wright_check(const ExperimentConfig& config, HwMatrixKind kind);
DelocalizationResult run_delocalization_experiment(const ExperimentConfig& config);
InverseEntryResult run_inverse_entry_experiment(const ExperimentConfig& config);
IntervalCountResult run_interval_count_experiment(const ExperimentConfig& config, double lo,
                                                  double hi, Index intervals);
IdentitySuiteResult run_identity_suite(const IdentitySuiteConfig& config);

WilsonInterval wilson_interval(Index successes, Index trials, double z = 1.959963984540054);
HistogramSummary build_histogram(const std::vector<double>& values, Index bins);
double median_of(std::vector<double> values);
bool is_unimodal(const std::vector<Index>& counts, int smooth_window = 3);
double inverse_entry_ratio(const Matrix& a_inverse);  // sup |entry| / HS norm

/// Exit code policy: 2 when flagged trials dominate (> 50%), else 0.
int exit_code_for_degeneracy(Index degenerate, Index total);

struct LineFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace wigner
