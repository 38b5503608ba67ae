#include "slln/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>

#include "slln/error.hpp"

namespace slln {

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::ConvergingTrend:
            return "ConvergingTrend";
        case Verdict::DivergingTrend:
            return "DivergingTrend";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

std::optional<double> SeriesTrace::partial_sum_at(Index n) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), n);
    if (it == indices.end() || *it != n) {
        return std::nullopt;
    }
    return partial_sums[static_cast<std::size_t>(it - indices.begin())];
}

namespace {

void neumaier_add(double& sum, double& carry, double term) {
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
        carry += (sum - t) + term;
    } else {
        carry += (term - t) + sum;
    }
    sum = t;
}

bool is_power_of_ten(Index n) {
    if (n < 1) {
        return false;
    }
    while (n % 10 == 0) {
        n /= 10;
    }
    return n == 1;
}

int floor_log2(Index n) { return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n))) - 1; }

}  // namespace

SeriesAccumulator::SeriesAccumulator(Index n_start, Index n_end, Index dense_limit)
    : dense_(n_end - n_start + 1 <= dense_limit), next_(n_start) {
    trace_.n_start = n_start;
    trace_.n_end = n_end;
    if (dense_ && n_end >= n_start) {
        const auto count = static_cast<std::size_t>(n_end - n_start + 1);
        trace_.indices.reserve(count);
        trace_.terms.reserve(count);
        trace_.partial_sums.reserve(count);
    }
}

bool SeriesAccumulator::record(Index n) {
    if (dense_) {
        return true;
    }
    if (n < checkpoint_) {
        return false;
    }
    // Next checkpoint after n: 2^k, 2^k - 1, 10^j or the horizon.
    Index next = trace_.n_end;
    const auto u = static_cast<std::uint64_t>(n);
    const auto pow2 = static_cast<Index>(std::bit_floor(u)) * 2;
    next = std::min(next, pow2 - 1 > n ? pow2 - 1 : pow2);
    Index ten = 1;
    while (ten <= n && ten <= std::numeric_limits<Index>::max() / 10) {
        ten *= 10;
    }
    if (ten > n) {
        next = std::min(next, ten);
    }
    checkpoint_ = next;
    const bool hit = n == trace_.n_start || n == trace_.n_end || std::has_single_bit(u) ||
                     std::has_single_bit(u + 1) || is_power_of_ten(n);
    return hit;
}

void SeriesAccumulator::add(Index n, double term) {
    if (n != next_ || n > trace_.n_end) {
        fail(ErrorCategory::Validation, "psi_catalog", "index", "series terms must arrive in consecutive order");
    }
    ++next_;
    neumaier_add(sum_, carry_, term);

    const int k = floor_log2(n);
    if (k != slice_k_) {
        slice_k_ = k;
        slice_sum_ = 0.0;
        slice_carry_ = 0.0;
        // A slice is complete only if it starts at 2^k exactly.
        slice_complete_ = (n == (Index{1} << k));
    }
    neumaier_add(slice_sum_, slice_carry_, term);
    if (slice_complete_ && n == (Index{1} << (k + 1)) - 1) {
        trace_.slices.push_back({k, slice_sum_ + slice_carry_});
    }

    if (record(n)) {
        trace_.indices.push_back(n);
        trace_.terms.push_back(term);
        trace_.partial_sums.push_back(sum_ + carry_);
    }
}

SeriesTrace SeriesAccumulator::finish(const DiagnosticOptions& options) && {
    if (next_ != trace_.n_end + 1) {
        fail(ErrorCategory::Validation, "psi_catalog", "index", "series trace finished before its horizon");
    }
    for (std::size_t i = 1; i < trace_.slices.size(); ++i) {
        const double prev = trace_.slices[i - 1].sum;
        const double cur = trace_.slices[i].sum;
        double ratio = 0.0;
        if (prev != 0.0) {
            ratio = cur / prev;
        } else if (cur != 0.0) {
            ratio = std::numeric_limits<double>::infinity();
        }
        trace_.tail_slice_ratios.push_back(ratio);
    }
    if (static_cast<int>(trace_.tail_slice_ratios.size()) >= options.k) {
        trace_.verdict = classify_diagnostic(trace_, options);
    }
    return std::move(trace_);
}

Verdict classify_diagnostic(const SeriesTrace& trace, const DiagnosticOptions& options) {
    const auto& ratios = trace.tail_slice_ratios;
    const int k = options.k;
    if (k < 1 || static_cast<int>(ratios.size()) < k) {
        fail(ErrorCategory::InsufficientData, "psi_catalog", "trace",
             "classify_diagnostic needs at least " + std::to_string(std::max(k, 1)) + " tail slice ratios");
    }
    const auto tail = std::span(ratios).last(static_cast<std::size_t>(k));
    const bool all_below = std::all_of(tail.begin(), tail.end(), [&](double r) { return r <= 1.0 - options.margin; });
    const bool all_near_one =
        std::all_of(tail.begin(), tail.end(), [&](double r) { return r >= 1.0 - options.margin / 10.0; });

    const auto slices = std::span(trace.slices).last(static_cast<std::size_t>(k) + 1);
    bool harmonic_dominated = true;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        if (!(slices[i].sum > 0.0)) {
            harmonic_dominated = false;
            break;
        }
        if (i > 0 && slices[i].k * slices[i].sum < slices[i - 1].k * slices[i - 1].sum) {
            harmonic_dominated = false;
            break;
        }
    }

    if (all_near_one || harmonic_dominated) {
        return Verdict::DivergingTrend;
    }
    if (all_below) {
        return Verdict::ConvergingTrend;
    }
    return Verdict::Inconclusive;
}

SeriesTrace sum_series(Index n_start, Index n_end, const std::function<double(Index)>& term,
                       const DiagnosticOptions& options) {
    SeriesAccumulator acc(n_start, n_end);
    for (Index n = n_start; n <= n_end; ++n) {
        acc.add(n, term(n));
    }
    return std::move(acc).finish(options);
}

}  // namespace slln
