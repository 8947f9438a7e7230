#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "wigner/experiments.hpp"

namespace wigner {

/// Locale-independent shortest round-trip representation (std::to_chars).
/// NaN prints as "nan", infinities as "inf"/"-inf".
std::string format_double(double v);

/// One header row, then one record per trial, sorted by trial index. Output
/// is byte-identical for identical (config, seed) at any worker count.
void write_distance_csv(const DistanceHistResult& result, std::ostream& os);
void write_scalar_csv(const std::vector<ScalarTrialRecord>& records, const std::string& value_name,
                      const std::string& scaled_name, std::ostream& os);
void write_hanson_wright_csv(const HansonWrightResult& result, std::ostream& os);
void write_interval_csv(const IntervalCountResult& result, std::ostream& os);
void write_identity_csv(const IdentitySuiteResult& result, std::ostream& os);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json tail_curve_to_json(const TailCurve& curve);
nlohmann::json histogram_to_json(const HistogramSummary& histogram);

nlohmann::json summary_json(const DistanceHistResult& result);
nlohmann::json summary_json(const IndependentTailResult& result);
nlohmann::json summary_json(const SvTailResult& result);
nlohmann::json summary_json(const HansonWrightResult& result);
nlohmann::json summary_json(const DelocalizationResult& result);
nlohmann::json summary_json(const InverseEntryResult& result);
nlohmann::json summary_json(const IntervalCountResult& result);
nlohmann::json summary_json(const IdentitySuiteResult& result);

/// Static SVG bar chart of a histogram, with axes and tick labels.
void write_svg_histogram(const HistogramSummary& histogram, const std::string& title,
                         const std::string& x_label, std::ostream& os);

}  // namespace wigner
