#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace slln {

using Index = std::int64_t;

enum class Verdict { ConvergingTrend, DivergingTrend, Inconclusive };

std::string_view to_string(Verdict verdict);

/// Traces at or below this many terms keep every partial sum; longer ones keep
/// dyadic and decade checkpoints only.
inline constexpr Index kDenseTraceLimit = Index{1} << 20;

struct SliceSum {
    int k = 0;  // covers indices [2^k, 2^{k+1})
    double sum = 0.0;
};

/// Finite evidence for a series of terms indexed n_start..n_end.
struct SeriesTrace {
    Index n_start = 1;
    Index n_end = 0;
    std::vector<Index> indices;
    std::vector<double> terms;
    std::vector<double> partial_sums;
    /// Complete dyadic slices inside [n_start, n_end] only.
    std::vector<SliceSum> slices;
    /// slices[i].sum / slices[i-1].sum.
    std::vector<double> tail_slice_ratios;
    Verdict verdict = Verdict::Inconclusive;

    bool dense() const { return static_cast<Index>(indices.size()) == n_end - n_start + 1; }
    double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
    /// Partial sum through index n, if n was recorded.
    std::optional<double> partial_sum_at(Index n) const;
};

struct DiagnosticOptions {
    int k = 4;
    double margin = 0.05;
};

/// Trend verdict from the tail slice ratios.
///
/// ConvergingTrend needs the last k ratios <= 1 - margin. DivergingTrend fires
/// when the last k ratios are >= 1 - margin/10, or when the condensed terms
/// k*S_k are positive and nondecreasing over the last k+1 slices, which is a
/// finite witness for S_k >= c/k (comparison with the harmonic series). That
/// second clause catches log-type series whose slice ratios creep to 1 too
/// slowly to ever cross 1 - margin/10.
///
/// Throws InsufficientData when fewer than k ratios exist.
Verdict classify_diagnostic(const SeriesTrace& trace, const DiagnosticOptions& options = {});

/// Streams terms into a SeriesTrace with compensated (Neumaier) summation.
class SeriesAccumulator {
public:
    SeriesAccumulator(Index n_start, Index n_end, Index dense_limit = kDenseTraceLimit);

    /// Terms must arrive in ascending consecutive index order.
    void add(Index n, double term);
    /// Computes slices and the verdict; verdict stays Inconclusive when the
    /// trace is too short to classify.
    SeriesTrace finish(const DiagnosticOptions& options = {}) &&;

private:
    bool record(Index n);

    SeriesTrace trace_;
    bool dense_;
    Index next_;
    Index checkpoint_ = 0;  // sparse mode: no index below this is recorded
    double sum_ = 0.0;
    double carry_ = 0.0;
    int slice_k_ = -1;
    double slice_sum_ = 0.0;
    double slice_carry_ = 0.0;
    bool slice_complete_ = false;
};

SeriesTrace sum_series(Index n_start, Index n_end, const std::function<double(Index)>& term,
                       const DiagnosticOptions& options = {});

}  // namespace slln
