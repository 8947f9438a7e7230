#include "wigner/output.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace wigner {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

const char* bool_str(bool b) { return b ? "1" : "0"; }

}  // namespace

void write_distance_csv(const DistanceHistResult& result, std::ostream& os) {
    os << "trial,dist,normalized,sigma_min,truncated_term,error_numerator,error_denominator,"
          "total,degenerate\n";
    for (const auto& rec : result.records) {
        os << rec.trial_index << ',' << format_double(rec.dist) << ','
           << format_double(rec.normalized) << ',' << format_double(rec.sigma_min) << ',';
        if (rec.has_decomposition) {
            os << format_double(rec.decomposition.truncated_term) << ','
               << format_double(rec.decomposition.error_numerator) << ','
               << format_double(rec.decomposition.error_denominator) << ','
               << format_double(rec.decomposition.total) << ',';
        } else {
            os << "nan,nan,nan,nan,";
        }
        os << bool_str(rec.degenerate) << '\n';
    }
}

void write_scalar_csv(const std::vector<ScalarTrialRecord>& records, const std::string& value_name,
                      const std::string& scaled_name, std::ostream& os) {
    os << "trial," << value_name << ',' << scaled_name << ",degenerate\n";
    for (const auto& rec : records)
        os << rec.trial_index << ',' << format_double(rec.value) << ','
           << format_double(rec.scaled) << ',' << bool_str(rec.degenerate) << '\n';
}

void write_hanson_wright_csv(const HansonWrightResult& result, std::ostream& os) {
    os << "trial,quad_stat,norm_stat,degenerate\n";
    for (const auto& rec : result.records)
        os << rec.trial_index << ',' << format_double(rec.quad_stat) << ','
           << format_double(rec.norm_stat) << ',' << bool_str(rec.degenerate) << '\n';
}

void write_interval_csv(const IntervalCountResult& result, std::ostream& os) {
    os << "lo,hi,observed,predicted\n";
    for (const auto& trial : result.trials)
        for (const auto& count : trial.counts)
            os << format_double(count.lo) << ',' << format_double(count.hi) << ','
               << count.observed << ',' << format_double(count.predicted) << '\n';
}

void write_identity_csv(const IdentitySuiteResult& result, std::ostream& os) {
    os << "instance,N,m,decomposition_err,truncated_err,rank_one_err,schur_err,qq_err,"
          "diagonal_err,trace_residual,e_split_ok,degenerate,ok\n";
    for (const auto& rec : result.records)
        os << rec.instance << ',' << rec.size << ',' << rec.m << ','
           << format_double(rec.decomposition_err) << ',' << format_double(rec.truncated_err)
           << ',' << format_double(rec.rank_one_err) << ',' << format_double(rec.schur_err) << ','
           << format_double(rec.qq_err) << ',' << format_double(rec.diagonal_err) << ','
           << format_double(rec.trace_residual) << ',' << bool_str(rec.e_split_ok) << ','
           << bool_str(rec.skipped_degenerate) << ',' << bool_str(rec.ok) << '\n';
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    return nlohmann::json{{"ensemble", ensemble_to_json(config.ensemble, config.master_seed)},
                          {"n", config.n},
                          {"trials", config.trials},
                          {"master_seed", config.master_seed},
                          {"t_grid", config.t_grid},
                          {"workers", config.workers},
                          {"histogram_bins", config.histogram_bins},
                          {"with_decomposition", config.with_decomposition},
                          {"with_sigma_min", config.with_sigma_min}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    config.ensemble = ensemble_from_json(j.at("ensemble"));
    config.n = j.value("n", Index{0});
    config.trials = j.value("trials", Index{1});
    config.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("t_grid")) config.t_grid = j.at("t_grid").get<std::vector<double>>();
    config.workers = j.value("workers", 1);
    config.histogram_bins = j.value("histogram_bins", Index{40});
    config.with_decomposition = j.value("with_decomposition", false);
    config.with_sigma_min = j.value("with_sigma_min", false);
    return config;
}

nlohmann::json tail_curve_to_json(const TailCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : curve.points)
        points.push_back({{"t", pt.t},
                          {"exceed_count", pt.exceed_count},
                          {"probability", pt.probability},
                          {"wilson_lo", pt.wilson_lo},
                          {"wilson_hi", pt.wilson_hi}});
    return nlohmann::json{{"points", points},
                          {"trials", curve.trials},
                          {"fitted_slope", curve.fitted_slope},
                          {"fitted_rate", curve.fitted_rate}};
}

nlohmann::json histogram_to_json(const HistogramSummary& histogram) {
    return nlohmann::json{{"lo", histogram.lo},
                          {"hi", histogram.hi},
                          {"counts", histogram.counts},
                          {"total", histogram.total},
                          {"mean", histogram.mean},
                          {"variance", histogram.variance}};
}

nlohmann::json summary_json(const DistanceHistResult& result) {
    return nlohmann::json{{"experiment", "dist-hist"},
                          {"config", config_to_json(result.config)},
                          {"model", to_string(result.config.ensemble.kind)},
                          {"histogram", histogram_to_json(result.histogram)},
                          {"mean_normalized", result.mean_normalized},
                          {"var_normalized", result.var_normalized},
                          {"lower_tail_p3", result.lower_tail_p3},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const IndependentTailResult& result) {
    return nlohmann::json{{"experiment", "dist-tail"},
                          {"config", config_to_json(result.config)},
                          {"curve", tail_curve_to_json(result.curve)},
                          {"fitted_k", result.curve.fitted_rate},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const SvTailResult& result) {
    return nlohmann::json{{"experiment", "sv-tail"},
                          {"config", config_to_json(result.config)},
                          {"mode", result.mode == SvTailMode::square ? "square" : "rect"},
                          {"scale", result.scale},
                          {"eps_grid", result.eps_grid},
                          {"curve", tail_curve_to_json(result.curve)},
                          {"median_scaled", result.median_scaled},
                          {"fitted_exponent", result.curve.fitted_rate},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const HansonWrightResult& result) {
    const char* kind = "spd";
    switch (result.matrix_kind) {
        case HwMatrixKind::identity: kind = "identity"; break;
        case HwMatrixKind::projection: kind = "projection"; break;
        case HwMatrixKind::spd: kind = "spd"; break;
        case HwMatrixKind::zero: kind = "zero"; break;
    }
    return nlohmann::json{{"experiment", "hw-check"},
                          {"config", config_to_json(result.config)},
                          {"matrix_kind", kind},
                          {"quad_curve", tail_curve_to_json(result.quad_curve)},
                          {"norm_curve", tail_curve_to_json(result.norm_curve)},
                          {"fitted_c_quad", result.quad_curve.fitted_rate},
                          {"fitted_c_norm", result.norm_curve.fitted_rate},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const DelocalizationResult& result) {
    return nlohmann::json{{"experiment", "deloc"},
                          {"config", config_to_json(result.config)},
                          {"max_statistic", result.max_statistic},
                          {"median_statistic", result.median_statistic},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const InverseEntryResult& result) {
    return nlohmann::json{{"experiment", "inv-entry"},
                          {"config", config_to_json(result.config)},
                          {"max_ratio", result.max_ratio},
                          {"median_scaled", result.median_scaled},
                          {"degenerate_count", result.degenerate_count}};
}

nlohmann::json summary_json(const IntervalCountResult& result) {
    std::vector<double> fractions;
    for (const auto& trial : result.trials) fractions.push_back(trial.within_fraction);
    return nlohmann::json{{"experiment", "spectral-count"},
                          {"config", config_to_json(result.config)},
                          {"lo", result.lo},
                          {"hi", result.hi},
                          {"intervals", result.intervals},
                          {"within_fraction_per_trial", fractions}};
}

nlohmann::json summary_json(const IdentitySuiteResult& result) {
    return nlohmann::json{{"experiment", "identities"},
                          {"instances", result.config.instances},
                          {"master_seed", result.config.master_seed},
                          {"violations", result.violations},
                          {"degenerate_skips", result.degenerate_skips},
                          {"vacuous", result.vacuous},
                          {"first_offending_instance", result.first_offending_instance}};
}

void write_svg_histogram(const HistogramSummary& histogram, const std::string& title,
                         const std::string& x_label, std::ostream& os) {
    const int width = 640, height = 420;
    const int left = 60, right = 20, top = 40, bottom = 50;
    const int plot_w = width - left - right;
    const int plot_h = height - top - bottom;

    Index max_count = 1;
    for (Index c : histogram.counts) max_count = std::max(max_count, c);
    const auto bins = static_cast<int>(histogram.counts.size());

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
          "font-family=\"sans-serif\">"
       << title << "</text>\n";

    for (int b = 0; b < bins; ++b) {
        double frac = static_cast<double>(histogram.counts[static_cast<std::size_t>(b)]) /
                      static_cast<double>(max_count);
        double bar_h = frac * plot_h;
        double x = left + static_cast<double>(b) / bins * plot_w;
        double bw = static_cast<double>(plot_w) / bins;
        os << "<rect x=\"" << format_double(x) << "\" y=\""
           << format_double(top + plot_h - bar_h) << "\" width=\"" << format_double(bw * 0.92)
           << "\" height=\"" << format_double(bar_h) << "\" fill=\"#4878a8\"/>\n";
    }

    // Axes.
    os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
       << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
       << top + plot_h << "\" stroke=\"black\"/>\n";

    const int x_ticks = 5;
    for (int k = 0; k <= x_ticks; ++k) {
        double frac = static_cast<double>(k) / x_ticks;
        double value = histogram.lo + frac * (histogram.hi - histogram.lo);
        double x = left + frac * plot_w;
        os << "<line x1=\"" << format_double(x) << "\" y1=\"" << top + plot_h << "\" x2=\""
           << format_double(x) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%.3g", value);
        os << "<text x=\"" << format_double(x) << "\" y=\"" << top + plot_h + 20
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << label
           << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        double frac = static_cast<double>(k) / 4;
        auto count = static_cast<Index>(std::llround(frac * static_cast<double>(max_count)));
        double y = top + plot_h - frac * plot_h;
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << format_double(y) << "\" x2=\"" << left
           << "\" y2=\"" << format_double(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << format_double(y + 4)
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << count
           << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
       << "</text>\n";
    os << "</svg>\n";
}

}  // namespace wigner
