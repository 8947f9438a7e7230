#include "wigner/ensembles.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

#include "wigner/rng.hpp"

namespace wigner {

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement step.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

double truncated_gaussian_scale(double k0) {
    if (!(k0 > 0.0)) throw std::invalid_argument("subgaussian_param must be positive");
    // Variance of a standard normal conditioned on [-k0, k0].
    double phi = std::exp(-k0 * k0 / 2.0) / std::sqrt(2.0 * M_PI);
    double mass = normal_cdf(k0) - normal_cdf(-k0);
    double variance = 1.0 - 2.0 * k0 * phi / mass;
    return 1.0 / std::sqrt(variance);
}

namespace {

struct ScalarSampler {
    EnsembleKind kind;
    double trunc_lo = 0.0;    // Phi(-k0)
    double trunc_mass = 0.0;  // Phi(k0) - Phi(-k0)
    double trunc_scale = 1.0;

    explicit ScalarSampler(const EnsembleSpec& spec) : kind(spec.kind) {
        if (kind == EnsembleKind::custom_subgaussian) {
            double k0 = spec.subgaussian_param;
            trunc_scale = truncated_gaussian_scale(k0);
            trunc_lo = normal_cdf(-k0);
            trunc_mass = normal_cdf(k0) - trunc_lo;
        }
    }

    double at(const CounterRng& rng, std::uint64_t counter) const {
        switch (kind) {
            case EnsembleKind::standard_gaussian:
            case EnsembleKind::goe:
                return rng.normal_at(counter);
            case EnsembleKind::rademacher:
                return rng.rademacher_at(counter);
            case EnsembleKind::custom_subgaussian: {
                double u = rng.uniform_open_at(counter);
                return inverse_normal_cdf(trunc_lo + u * trunc_mass) * trunc_scale;
            }
        }
        throw std::invalid_argument("unknown ensemble kind");
    }
};

}  // namespace

MatrixSample sample_wigner(const EnsembleSpec& spec, std::uint64_t seed, std::int64_t trial_index) {
    const Index n = spec.dimension;
    if (n < 1) throw std::invalid_argument("sample_wigner: dimension must be >= 1");
    if (!spec.symmetric) throw std::invalid_argument("sample_wigner: spec.symmetric must be true");

    ScalarSampler draw(spec);
    CounterRng rng(seed, static_cast<std::uint64_t>(trial_index));
    const double diag_scale = spec.kind == EnsembleKind::goe ? std::sqrt(2.0) : 1.0;

    Matrix a(n, n);
    std::uint64_t base = 0;  // linear index of (i, i) over the upper triangle
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            double v = draw.at(rng, base + static_cast<std::uint64_t>(j - i));
            if (i == j) v *= diag_scale;
            a(i, j) = v;
            a(j, i) = v;
        }
        base += static_cast<std::uint64_t>(n - i);
    }
    return MatrixSample{std::move(a), seed, trial_index, spec};
}

MatrixSample sample_iid(Index rows, Index cols, const EnsembleSpec& spec, std::uint64_t seed,
                        std::int64_t trial_index) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("sample_iid: dimensions must be >= 1");
    if (spec.kind == EnsembleKind::goe)
        throw std::invalid_argument("sample_iid: goe is only defined for symmetric samples");

    ScalarSampler draw(spec);
    CounterRng rng(seed, static_cast<std::uint64_t>(trial_index));

    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            a(i, j) = draw.at(rng, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                                       static_cast<std::uint64_t>(j));
    return MatrixSample{std::move(a), seed, trial_index, spec};
}

namespace {

void check_range(Index begin, Index end, Index size, const char* what) {
    if (begin < 0 || end > size || begin >= end)
        throw std::out_of_range(std::string(what) + ": invalid range [" + std::to_string(begin) +
                                ", " + std::to_string(end) + ") for size " + std::to_string(size));
}

}  // namespace

MatrixSample take_rows(const MatrixSample& sample, Index begin, Index end) {
    check_range(begin, end, sample.entries.rows(), "take_rows");
    MatrixSample out = sample;
    out.entries = sample.entries.middleRows(begin, end - begin);
    return out;
}

MatrixSample take_cols(const MatrixSample& sample, Index begin, Index end) {
    check_range(begin, end, sample.entries.cols(), "take_cols");
    MatrixSample out = sample;
    out.entries = sample.entries.middleCols(begin, end - begin);
    return out;
}

double sample_scalar(const EnsembleSpec& spec, std::uint64_t seed, std::int64_t trial_index,
                     std::uint64_t counter) {
    ScalarSampler draw(spec);
    CounterRng rng(seed, static_cast<std::uint64_t>(trial_index));
    return draw.at(rng, counter);
}

EnsembleKind ensemble_kind_from_string(std::string_view name) {
    if (name == "standard-gaussian") return EnsembleKind::standard_gaussian;
    if (name == "rademacher") return EnsembleKind::rademacher;
    if (name == "goe") return EnsembleKind::goe;
    if (name == "custom-subgaussian") return EnsembleKind::custom_subgaussian;
    throw std::invalid_argument("unknown ensemble kind: " + std::string(name));
}

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::standard_gaussian: return "standard-gaussian";
        case EnsembleKind::rademacher: return "rademacher";
        case EnsembleKind::goe: return "goe";
        case EnsembleKind::custom_subgaussian: return "custom-subgaussian";
    }
    throw std::invalid_argument("unknown ensemble kind");
}

nlohmann::json ensemble_to_json(const EnsembleSpec& spec, std::uint64_t seed) {
    return nlohmann::json{{"kind", to_string(spec.kind)},
                          {"N", spec.dimension},
                          {"symmetric", spec.symmetric},
                          {"k0", spec.subgaussian_param},
                          {"seed", seed}};
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j, std::uint64_t* seed_out) {
    EnsembleSpec spec;
    spec.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
    spec.dimension = j.at("N").get<Index>();
    spec.symmetric = j.at("symmetric").get<bool>();
    if (j.contains("k0")) spec.subgaussian_param = j.at("k0").get<double>();
    if (seed_out) *seed_out = j.value("seed", std::uint64_t{0});
    return spec;
}

}  // namespace wigner
