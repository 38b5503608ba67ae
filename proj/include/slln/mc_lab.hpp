#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slln/models.hpp"
#include "slln/psi.hpp"
#include "slln/sequences.hpp"

namespace slln {

/// (S_n - ES_n)/a_n for n = 1..path.N (1-based, entry 0 unused). Handles
/// normalized paths by carrying S_n/c_n forward with the ratio c_{n-1}/c_n.
std::vector<double> centered_normalized(const Path& path, const MomentTable& moments, const NormingSequence& a);

/// Nearest-rank quantile of already sorted data: element ceil(q*M) - 1.
double nearest_rank_quantile(std::span<const double> sorted, double q);

struct EnsembleSummary {
    static constexpr std::array<double, 3> kLevels{0.5, 0.9, 0.99};

    std::string model_id;
    std::string norming_id;
    std::vector<Index> horizons;
    /// Per horizon, quantiles at kLevels of max_{N/2 <= n <= N} |S_n - ES_n|/a_n.
    std::vector<std::array<double, 3>> tail_sup_quantiles;
    std::int64_t path_count = 0;
    std::uint64_t master_seed = 0;
};

EnsembleSummary tail_sup_estimate(const ModelSpec& model, const NormingSequence& a, const std::vector<Index>& horizons,
                                  std::int64_t M, std::uint64_t master_seed, unsigned threads = 1);

struct BlockCell {
    Index k_minus = 0;
    Index k_plus = 0;
    bool populated = false;
};

struct BlockLevel {
    std::int64_t m = 0;
    Index first = 0;  // first index n with alpha^m <= a_n < alpha^{m+1}
    Index last = 0;
    /// The level runs past the horizon, so its k_plus values are cut short.
    bool truncated = false;
    std::map<std::int64_t, BlockCell> cells;  // populated bands only
};

/// The geometric-level / expectation-band partition of indices used to
/// sandwich (S_n - ES_n)/a_n between statistics at cell endpoints.
struct BlockingScheme {
    double alpha = 2.0;
    double eps = 0.1;
    double A = 0.0;
    std::int64_t L = 0;
    Index horizon = 0;
    std::vector<BlockLevel> levels;
    /// Per index (1-based): level position in `levels`, or -1 if a_n < alpha^{m_1}.
    std::vector<int> level_of;
    std::vector<std::int64_t> band_of;
    std::vector<double> ES;
    std::vector<Scaled> a_values;

    /// k+- for (level position, band); empty cells fall back to the level's
    /// first index.
    BlockCell cell(std::size_t level, std::int64_t band) const;
    std::vector<std::int64_t> m_levels() const;
    double upper_constant() const { return (alpha - 1.0) * A + eps; }
    double lower_constant() const { return (1.0 - 1.0 / alpha) * A + eps; }
};

/// ES is 1-based with size >= horizon + 1. When A is not given the witness
/// sup ES_n/a_n over the horizon is used. Fails if some ES_n/a_n > A.
BlockingScheme build_blocking(const NormingSequence& a, std::span<const double> ES, double alpha, double eps,
                              Index horizon, std::optional<double> A = std::nullopt);

struct SandwichOptions {
    /// Skip indices in the level cut by the horizon.
    bool exclude_truncated_levels = false;
    /// Relative slack absorbing floating rounding only.
    double tolerance = 1e-9;
};

struct SandwichResult {
    Index checked = 0;
    Index violations = 0;
    Index first_violation = 0;
    /// max over checked n of lhs - upper bound and lower bound - lhs.
    double max_upper_excess = 0.0;
    double max_lower_excess = 0.0;
    /// Extremes of (S_n - ES_n)/a_n over the last untruncated level.
    double observed_max = 0.0;
    double observed_min = 0.0;
};

SandwichResult sandwich_check(const Path& path, const NormingSequence& a, const BlockingScheme& scheme,
                              const SandwichOptions& options = {});

struct DyadicLevelResult {
    int level = 0;
    std::int64_t exceedances = 0;
    std::int64_t paths = 0;
    double frequency = 0.0;
    /// (sum_{i in (2^n, 2^{n+1}]} Var X_i) / (eps^2 a(2^{n+1})^2)
    double kolmogorov_bound = 0.0;
    double binomial_sigma = 0.0;
    /// C / (eps^2 psi(2^{n+1})) with C = sup Var(S_k) psi(k)/a_k^2.
    double psi_rate_bound = 0.0;
    bool within = false;
};

/// Frequency of max_{1<=k<=2^n} |sum_{i=2^n+1}^{2^n+k} (X_i - EX_i)| / a(2^{n+1}) > eps
/// over M paths, against Kolmogorov's maximal-inequality bound.
std::vector<DyadicLevelResult> dyadic_max_check(const ModelSpec& model, const NormingSequence& a, const PsiSpec& psi,
                                                double eps, const std::vector<int>& levels, std::int64_t M,
                                                std::uint64_t master_seed, unsigned threads = 1);

struct LedgerResult {
    SeriesTrace trace;
    Verdict verdict = Verdict::Inconclusive;
};

/// Partial sums of event probabilities p_first + ... + p_N.
LedgerResult borel_cantelli_ledger(const std::function<ExactRational(Index)>& p, Index first, Index N,
                                   const DiagnosticOptions& options = {});
LedgerResult borel_cantelli_ledger(const std::function<double(Index)>& p, Index first, Index N,
                                   const DiagnosticOptions& options = {});

struct HitSummary {
    Index horizon = 0;
    std::int64_t paths = 0;
    double mean_hits = 0.0;
    double expected_hits = 0.0;
    double sigma_mean = 0.0;
    double z = 0.0;
    Index window_lo = 0;
    Index window_hi = 0;
    /// Fraction of paths with at least one hit in [window_lo, window_hi].
    double window_fraction = 0.0;
    double window_expected = 0.0;
    double window_sigma = 0.0;
    double window_z = 0.0;
};

/// Counts |X_n| = a_n (normalized |x_n| = 1) for n >= 3 on Example 1 paths.
HitSummary example1_hit_counter(std::span<const Path> paths);
/// Same statistics, streaming M freshly drawn paths instead of holding them.
HitSummary example1_hit_ensemble(Index N, std::int64_t M, std::uint64_t master_seed, unsigned threads = 1);

}  // namespace slln
