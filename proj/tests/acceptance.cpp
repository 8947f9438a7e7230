// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wigner/ensembles.hpp"
#include "wigner/experiments.hpp"
#include "wigner/lcd.hpp"
#include "wigner/linalg.hpp"
#include "wigner/output.hpp"
#include "wigner/spectral.hpp"

using namespace wigner;

namespace {

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome& outcome;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            outcome.pass = false;
            if (!outcome.detail.empty()) outcome.detail += "; ";
            outcome.detail += "FAILED: " + what;
        }
    }
    void note(const std::string& what) {
        if (!outcome.detail.empty()) outcome.detail += "; ";
        outcome.detail += what;
    }
};

ExperimentConfig sym_config(EnsembleKind kind, Index n_dim, Index rows, Index trials,
                            std::uint64_t seed) {
    ExperimentConfig config;
    config.ensemble.kind = kind;
    config.ensemble.symmetric = true;
    config.ensemble.dimension = n_dim;
    config.n = rows;
    config.trials = trials;
    config.master_seed = seed;
    config.workers = default_workers();
    config.histogram_bins = 15;
    return config;
}

std::string fmt(double v) { return format_double(v); }

// ---- criterion implementations -------------------------------------------

Outcome criterion_identity_suite() {
    Outcome out;
    Check check{out};
    auto start = std::chrono::steady_clock::now();

    IdentitySuiteConfig config;
    config.instances = 200;
    config.master_seed = 1;
    config.workers = default_workers();
    IdentitySuiteResult result = run_identity_suite(config);

    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(result.violations == 0,
                  "violations=" + std::to_string(result.violations) + " first=" +
                      std::to_string(result.first_offending_instance));
    check.require(result.degenerate_skips == 0,
                  "degenerate skips=" + std::to_string(result.degenerate_skips));
    check.require(seconds < 120.0, "runtime " + fmt(seconds) + "s >= 120s");

    double worst = 0.0;
    for (const auto& rec : result.records) {
        worst = std::max({worst, rec.decomposition_err, rec.qq_err, rec.diagonal_err,
                          rec.trace_residual});
    }
    check.note("200 instances clean, worst 1e-8-class error " + fmt(worst) + ", " +
               fmt(seconds) + "s");
    return out;
}

void check_figure_run(Check& check, const DistanceHistResult& result, const std::string& label) {
    check.require(is_unimodal(result.histogram.counts),
                  label + " histogram not unimodal");
    check.require(std::abs(result.mean_normalized) <= 0.25,
                  label + " |mean|=" + fmt(std::abs(result.mean_normalized)) + " > 0.25");
    check.require(result.var_normalized >= 1.0 && result.var_normalized <= 3.5,
                  label + " var=" + fmt(result.var_normalized) + " outside [1.0, 3.5]");
    check.note(label + ": mean=" + fmt(result.mean_normalized) +
               " var=" + fmt(result.var_normalized));
}

Outcome criterion_figure_histograms() {
    Outcome out;
    Check check{out};

    auto start = std::chrono::steady_clock::now();
    for (EnsembleKind kind : {EnsembleKind::goe, EnsembleKind::rademacher}) {
        DistanceHistResult reduced = run_distance_experiment(sym_config(kind, 400, 360, 2000, 1));
        check_figure_run(check, reduced, "reduced/" + to_string(kind));
    }
    double reduced_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(reduced_seconds < 300.0,
                  "reduced runtime " + fmt(reduced_seconds) + "s >= 300s");

    start = std::chrono::steady_clock::now();
    for (EnsembleKind kind : {EnsembleKind::goe, EnsembleKind::rademacher}) {
        DistanceHistResult full = run_distance_experiment(sym_config(kind, 1000, 900, 1000, 1));
        check_figure_run(check, full, "full/" + to_string(kind));
    }
    double full_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(full_seconds < 1800.0, "full-scale runtime " + fmt(full_seconds) + "s >= 30min");
    check.note("runtimes " + fmt(reduced_seconds) + "s reduced, " + fmt(full_seconds) +
               "s full scale");
    return out;
}

Outcome criterion_independent_tail() {
    Outcome out;
    Check check{out};

    ExperimentConfig config = sym_config(EnsembleKind::standard_gaussian, 400, 360, 2000, 1);
    config.ensemble.symmetric = false;
    config.t_grid = {1.0, 2.0, 3.0};
    IndependentTailResult result = run_independent_distance_experiment(config);

    check.require(result.curve.fitted_slope < 0.0,
                  "fitted slope " + fmt(result.curve.fitted_slope) + " not negative");
    double k_fit = result.curve.fitted_rate;
    check.require(std::isfinite(k_fit) && k_fit > 0.0, "fitted K not positive");
    const TailPoint& p3 = result.curve.points.back();
    double bound = std::exp(-9.0 / k_fit);
    check.require(p3.wilson_lo <= bound,
                  "Wilson lower bound " + fmt(p3.wilson_lo) + " above exp(-9/K)=" + fmt(bound));
    check.note("fitted K=" + fmt(k_fit) + ", p(3)=" + fmt(p3.probability) +
               ", exp(-9/K)=" + fmt(bound));
    return out;
}

Outcome criterion_lower_tail() {
    Outcome out;
    Check check{out};
    DistanceHistResult result =
        run_distance_experiment(sym_config(EnsembleKind::goe, 400, 360, 2000, 1));
    check.require(result.lower_tail_p3 <= 0.05,
                  "P(dist <= sqrt(m) - 3) = " + fmt(result.lower_tail_p3) + " > 5%");
    check.note("P(dist <= sqrt(m)-3) = " + fmt(result.lower_tail_p3));
    return out;
}

Outcome criterion_sv_scaling() {
    Outcome out;
    Check check{out};
    std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.5, 1.0};

    // medians of sigma_n / (m N^{-1/2}) at m = N/4 across sizes
    std::vector<double> medians;
    for (Index n_dim : {100, 200, 400}) {
        ExperimentConfig config =
            sym_config(EnsembleKind::standard_gaussian, n_dim, 3 * n_dim / 4, 300, 1);
        SvTailResult result = run_sv_tail_experiment(config, SvTailMode::rectangular, eps_grid);
        for (std::size_t i = 1; i < result.curve.points.size(); ++i)
            check.require(result.curve.points[i].probability >=
                              result.curve.points[i - 1].probability,
                          "tail not nondecreasing in eps at N=" + std::to_string(n_dim));
        medians.push_back(result.median_scaled);
    }
    double lo = *std::min_element(medians.begin(), medians.end());
    double hi = *std::max_element(medians.begin(), medians.end());
    check.require(hi <= 2.0 * lo, "medians spread beyond factor 2: [" + fmt(lo) + ", " + fmt(hi) +
                                      "]");
    check.note("medians " + fmt(medians[0]) + ", " + fmt(medians[1]) + ", " + fmt(medians[2]));

    // at fixed eps = 0.1, the lower tail must not grow as m grows (N = 200)
    double prev = std::numeric_limits<double>::infinity();
    std::string tail_note = "P(sigma_n <= 0.1 scale) by m:";
    for (Index m : {25, 50, 100}) {
        ExperimentConfig config =
            sym_config(EnsembleKind::standard_gaussian, 200, 200 - m, 300, 1);
        SvTailResult result = run_sv_tail_experiment(config, SvTailMode::rectangular, {0.1});
        double p = result.curve.points[0].probability;
        check.require(p <= prev, "tail at eps=0.1 increased when m grew to " + std::to_string(m));
        prev = p;
        tail_note += " " + fmt(p);
    }
    check.note(tail_note);
    return out;
}

Outcome criterion_quarter_circle() {
    Outcome out;
    Check check{out};
    ExperimentConfig config = sym_config(EnsembleKind::standard_gaussian, 1000, 0, 20, 1);
    IntervalCountResult result = run_interval_count_experiment(config, 0.1, 1.1, 10);
    double worst = 1.0;
    for (const auto& trial : result.trials) {
        worst = std::min(worst, trial.within_fraction);
        check.require(trial.within_fraction >= 0.9,
                      "trial " + std::to_string(trial.trial_index) + " within fraction " +
                          fmt(trial.within_fraction) + " < 0.9");
    }
    check.note("20 trials, worst within-10% fraction " + fmt(worst));
    return out;
}

Outcome criterion_interlacing() {
    Outcome out;
    Check check{out};
    EnsembleSpec spec;
    spec.kind = EnsembleKind::standard_gaussian;
    spec.symmetric = true;
    spec.dimension = 40;
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 40; ++t) {
        Matrix a = sample_wigner(spec, 1, t).entries;
        for (Index row = 0; row < 40; ++row) {
            InterlacingReport rep = interlacing_check(a, row);
            worst = std::max(worst, rep.max_violation);
            check.require(rep.ok, "violation at trial " + std::to_string(t) + " row " +
                                      std::to_string(row) + ": " + fmt(rep.max_violation));
        }
    }
    check.note("1600 removals, max signed violation " + fmt(worst));
    return out;
}

Outcome criterion_delocalization() {
    Outcome out;
    Check check{out};
    double prev_median = std::numeric_limits<double>::infinity();
    std::string medians = "medians:";
    for (Index n_dim : {200, 400, 800}) {
        ExperimentConfig config = sym_config(EnsembleKind::standard_gaussian, n_dim, 0, 200, 1);
        DelocalizationResult result = run_delocalization_experiment(config);
        check.require(result.degenerate_count == 0,
                      "degenerate kernels at N=" + std::to_string(n_dim));
        check.require(result.max_statistic <= 10.0,
                      "max statistic " + fmt(result.max_statistic) + " > 10 at N=" +
                          std::to_string(n_dim));
        check.require(result.median_statistic <= prev_median + 1e-12,
                      "median increased at N=" + std::to_string(n_dim));
        prev_median = result.median_statistic;
        medians += " " + fmt(result.median_statistic);
    }
    check.note(medians);
    return out;
}

Outcome criterion_inverse_entries() {
    Outcome out;
    Check check{out};
    ExperimentConfig c200 = sym_config(EnsembleKind::standard_gaussian, 200, 0, 200, 1);
    ExperimentConfig c400 = sym_config(EnsembleKind::standard_gaussian, 400, 0, 200, 1);
    InverseEntryResult r200 = run_inverse_entry_experiment(c200);
    InverseEntryResult r400 = run_inverse_entry_experiment(c400);
    check.require(r400.median_scaled < r200.median_scaled,
                  "median scaled ratio did not decrease: " + fmt(r200.median_scaled) + " -> " +
                      fmt(r400.median_scaled));
    check.note("median N/log^3 N ratio: " + fmt(r200.median_scaled) + " (N=200) -> " +
               fmt(r400.median_scaled) + " (N=400)");
    return out;
}

Outcome criterion_lcd_smallball() {
    Outcome out;
    Check check{out};

    // grid-vs-refined agreement on 50 vectors of dimension <= 6
    LcdParams params{0.3, 0.5};
    EnsembleSpec gauss;
    gauss.kind = EnsembleKind::standard_gaussian;
    int found_count = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Index n = 2 + static_cast<Index>(seed % 5);
        Vector x = sample_iid(1, n, gauss, 500 + seed, 0).entries.row(0);
        x /= x.norm();
        double bound = 10.0 * std::sqrt(static_cast<double>(n));
        LcdResult r = lcd(x, params, bound);
        // independent dense scan at the same step
        double oracle = std::numeric_limits<double>::infinity();
        for (long long k = 1;; ++k) {
            double theta = static_cast<double>(k) * r.resolution;
            if (theta > bound) break;
            if (lcd_feasible(x, theta, params)) {
                oracle = theta;
                break;
            }
        }
        if (!r.found) {
            check.require(std::isinf(oracle),
                          "scan found a value the search missed at seed " + std::to_string(seed));
            continue;
        }
        ++found_count;
        check.require(std::abs(r.value - oracle) <= r.resolution + 1e-9,
                      "grid/refined disagreement at seed " + std::to_string(seed));
    }
    check.require(found_count > 0, "no LCD found on any test vector");

    // exact enumeration value for the flat quarter vector
    Vector quarters = Vector::Constant(4, 0.5);
    SmallBallEstimate exact = levy_concentration(quarters, EnsembleKind::rademacher, 0.1,
                                                 SmallBallMethod::exact_enumeration);
    check.require(exact.estimate == 0.375,
                  "exact enumeration gave " + fmt(exact.estimate) + " instead of 0.375");

    // structure bound with a fitted constant on 20 exhaustive instances
    LcdParams bound_params{2.0, 0.5};
    double fitted_c0 = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Index n = 8 + static_cast<Index>(seed % 7);  // 8..14
        Vector x = sample_iid(1, n, gauss, 900 + seed, 0).entries.row(0);
        x /= x.norm();
        LcdResult d = lcd(x, bound_params, 50.0);
        double eps = std::max(d.found ? 1.0 / d.value : 0.0, 0.02);
        SmallBallEstimate est = levy_concentration(x, EnsembleKind::rademacher, eps,
                                                   SmallBallMethod::exact_enumeration);
        double shape = eps / bound_params.gamma +
                       std::exp(-2.0 * bound_params.alpha * bound_params.alpha);
        fitted_c0 = std::max(fitted_c0, est.estimate / shape);
    }
    check.require(fitted_c0 <= 50.0, "fitted C0 " + fmt(fitted_c0) + " > 50");
    check.note("50 LCD vectors (" + std::to_string(found_count) + " found), fitted C0 = " +
               fmt(fitted_c0));
    return out;
}

Outcome criterion_determinism() {
    Outcome out;
    Check check{out};

    auto distance_bytes = [&](int workers) {
        ExperimentConfig config = sym_config(EnsembleKind::goe, 80, 60, 50, 9);
        config.workers = workers;
        std::ostringstream os;
        write_distance_csv(run_distance_experiment(config), os);
        return os.str();
    };
    auto sv_bytes = [&](int workers) {
        ExperimentConfig config = sym_config(EnsembleKind::rademacher, 40, 30, 20, 9);
        config.workers = workers;
        std::ostringstream os;
        SvTailResult r = run_sv_tail_experiment(config, SvTailMode::rectangular,
                                                {0.1, 0.5, 1.0});
        write_scalar_csv(r.records, "sigma_min", "scaled", os);
        return os.str();
    };
    auto deloc_bytes = [&](int workers) {
        ExperimentConfig config = sym_config(EnsembleKind::standard_gaussian, 30, 0, 10, 9);
        config.workers = workers;
        std::ostringstream os;
        DelocalizationResult r = run_delocalization_experiment(config);
        write_scalar_csv(r.records, "linf", "statistic", os);
        return os.str();
    };

    for (auto [name, runner] :
         std::vector<std::pair<std::string, std::function<std::string(int)>>>{
             {"dist-hist", distance_bytes}, {"sv-tail", sv_bytes}, {"deloc", deloc_bytes}}) {
        std::string w1 = runner(1);
        check.require(runner(4) == w1, name + " differs at 4 workers");
        check.require(runner(8) == w1, name + " differs at 8 workers");
    }
    check.note("dist-hist, sv-tail, deloc byte-identical at workers {1,4,8}");
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "identity suite at machine precision", criterion_identity_suite},
        {2, "distance histogram reproduction (full + reduced scale)",
         criterion_figure_histograms},
        {3, "independent-model distance tail", criterion_independent_tail},
        {4, "symmetric-model lower tail", criterion_lower_tail},
        {5, "least singular value scaling", criterion_sv_scaling},
        {6, "quarter-circle interval counting", criterion_quarter_circle},
        {7, "interlacing under row removal", criterion_interlacing},
        {8, "normal-vector delocalization", criterion_delocalization},
        {9, "inverse-entry ratio decay", criterion_inverse_entries},
        {10, "LCD and small-ball structure", criterion_lcd_smallball},
        {11, "worker-count determinism", criterion_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  criterion %2d: %s (%.1fs)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                    criterion.id, criterion.name, seconds, outcome.detail.empty() ? "" : " -- ",
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
