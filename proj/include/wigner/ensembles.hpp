#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "wigner/types.hpp"

namespace wigner {

enum class EnsembleKind {
    standard_gaussian,   // N(0,1) everywhere
    rademacher,          // +-1 with probability 1/2 (symmetric Bernoulli)
    goe,                 // Gaussian, off-diagonal variance 1, diagonal variance 2
    custom_subgaussian,  // truncated Gaussian, standardized to mean 0 variance 1
};

/// Distribution + symmetry + dimension recipe for sampling matrices.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::standard_gaussian;
    double subgaussian_param = 2.0;  // truncation half-width K0 (custom_subgaussian)
    bool symmetric = false;
    Index dimension = 0;  // N, used by sample_wigner
};

/// A sampled matrix together with everything needed to reproduce it.
struct MatrixSample {
    Matrix entries;
    std::uint64_t seed = 0;
    std::int64_t trial_index = 0;
    EnsembleSpec spec;
};

/// Symmetric N x N sample: diagonal and upper-triangle entries are iid draws
/// from the spec's scalar distribution, mirrored below the diagonal exactly.
/// For kind goe the diagonal has variance 2. Resampling with identical
/// (spec, seed, trial_index) is bit-identical.
MatrixSample sample_wigner(const EnsembleSpec& spec, std::uint64_t seed, std::int64_t trial_index);

/// rows x cols matrix of iid draws. spec.symmetric and spec.dimension are
/// ignored; kind goe is rejected (it only makes sense for symmetric samples).
MatrixSample sample_iid(Index rows, Index cols, const EnsembleSpec& spec, std::uint64_t seed,
                        std::int64_t trial_index);

/// Submatrix copies over the half-open range [begin, end). Out-of-range or
/// empty ranges throw std::out_of_range.
MatrixSample take_rows(const MatrixSample& sample, Index begin, Index end);
MatrixSample take_cols(const MatrixSample& sample, Index begin, Index end);

/// Scalar draw from the spec's distribution at the given stream position.
/// Exposed so moment checks can estimate distribution statistics directly.
double sample_scalar(const EnsembleSpec& spec, std::uint64_t seed, std::int64_t trial_index,
                     std::uint64_t counter);

/// Scale applied to truncated-Gaussian draws so that the standardized
/// distribution has variance exactly 1 (truncation at +-k0).
double truncated_gaussian_scale(double k0);

EnsembleKind ensemble_kind_from_string(std::string_view name);
std::string to_string(EnsembleKind kind);

/// JSON object {kind, N, symmetric, k0, seed}.
nlohmann::json ensemble_to_json(const EnsembleSpec& spec, std::uint64_t seed);
EnsembleSpec ensemble_from_json(const nlohmann::json& j, std::uint64_t* seed_out = nullptr);

}  // namespace wigner
